// Extended trend check on a EuroSAT subset. Needs HQNN_EUROSAT_DIR pointing
// at the extracted directory-per-class dataset and several CPU-hours; not in
// the default suite.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "hqnn/datasets.hpp"
#include "hqnn/hybrid.hpp"
#include "hqnn/rng.hpp"

using namespace hqnn;

namespace {

// seeded 100-per-class subsample of the manifest
DatasetManifest subsample(const DatasetManifest& m, int per_class, std::uint64_t seed) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < m.items.size(); ++i) by_class[m.items[i].label].push_back(i);

    Rng rng(seed);
    DatasetManifest out;
    out.class_names = m.class_names;
    for (auto& [label, idxs] : by_class) {
        rng.shuffle(idxs);
        std::size_t take = std::min<std::size_t>(per_class, idxs.size());
        std::vector<std::size_t> chosen(idxs.begin(), idxs.begin() + take);
        std::sort(chosen.begin(), chosen.end());
        for (std::size_t i : chosen) out.items.push_back(m.items[i]);
    }
    return out;
}

double val_accuracy(ModelVariant variant, const std::vector<LabeledImage>& train_set,
                    const std::vector<LabeledImage>& val_set, std::uint64_t seed) {
    ModelConfig mc;
    mc.variant = variant;
    mc.n_classes = 10;
    TrainConfig tc;
    tc.epochs = 50;
    tc.seed = seed;
    HybridModel model(mc, seed);
    auto history = train(model, train_set, val_set, tc);
    double best = 0.0;
    for (const EpochStats& s : history) best = std::max(best, s.val_acc);
    return best;
}

}  // namespace

int main() {
    const char* dir = std::getenv("HQNN_EUROSAT_DIR");
    if (!dir) {
        std::printf("[SKIP] criterion 6: HQNN_EUROSAT_DIR not set\n");
        return 0;
    }

    DatasetManifest full = load_directory(dir);
    std::map<ModelVariant, double> mean_acc = {{ModelVariant::NoEntanglement, 0.0},
                                               {ModelVariant::Bellman, 0.0},
                                               {ModelVariant::RealAmplitudes, 0.0}};
    const std::vector<std::uint64_t> seeds = {1, 2, 3};
    for (std::uint64_t seed : seeds) {
        DatasetManifest subset = subsample(full, 100, seed);
        auto [tm, vm] = split(subset, 0.8, seed);
        auto train_set = load_images(tm, 64);
        auto val_set = load_images(vm, 64);
        for (auto& [variant, acc] : mean_acc) {
            double a = val_accuracy(variant, train_set, val_set, seed);
            std::printf("  seed=%llu %-16s val_acc=%.3f\n", (unsigned long long)seed,
                        variant_to_string(variant).c_str(), a);
            std::fflush(stdout);
            acc += a / seeds.size();
        }
    }

    double ne = mean_acc[ModelVariant::NoEntanglement];
    double bm = mean_acc[ModelVariant::Bellman];
    double ra = mean_acc[ModelVariant::RealAmplitudes];
    std::printf("mean accuracies: real_amplitudes=%.3f bellman=%.3f no_entanglement=%.3f\n", ra,
                bm, ne);
    bool ok = ra >= bm && bm >= ne - 0.02;
    std::printf("[%s] criterion 6: real_amplitudes >= bellman >= no_entanglement - 0.02\n",
                ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}
