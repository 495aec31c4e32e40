#include "hqnn/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hqnn {

ModelVariant variant_from_string(const std::string& s) {
    if (s == "no_entanglement") return ModelVariant::NoEntanglement;
    if (s == "bellman") return ModelVariant::Bellman;
    if (s == "real_amplitudes") return ModelVariant::RealAmplitudes;
    if (s == "classical_v1") return ModelVariant::ClassicalV1;
    if (s == "classical_v2") return ModelVariant::ClassicalV2;
    throw std::invalid_argument("unknown model variant: " + s);
}

std::string variant_to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::NoEntanglement: return "no_entanglement";
        case ModelVariant::Bellman: return "bellman";
        case ModelVariant::RealAmplitudes: return "real_amplitudes";
        case ModelVariant::ClassicalV1: return "classical_v1";
        case ModelVariant::ClassicalV2: return "classical_v2";
    }
    throw std::logic_error("unreachable");
}

bool variant_is_quantum(ModelVariant v) {
    return v == ModelVariant::NoEntanglement || v == ModelVariant::Bellman ||
           v == ModelVariant::RealAmplitudes;
}

std::vector<double> angle_embedding(const std::vector<double>& activations) {
    std::vector<double> angles(activations.size());
    for (std::size_t i = 0; i < activations.size(); ++i) {
        if (!std::isfinite(activations[i]))
            throw std::domain_error("angle_embedding: non-finite activation");
        angles[i] = M_PI * std::tanh(activations[i]);
    }
    return angles;
}

// ---------------------------------------------------------------- QuantumLayer

QuantumLayer::QuantumLayer(const CircuitSpec& spec)
    : weights_({std::max(spec.n_weight_params, 1)}),
      grad_weights_({std::max(spec.n_weight_params, 1)}),
      spec_(spec) {
    validate_spec(spec_);
    // zero init keeps the initial circuit at its identity-rotation form
    if (spec_.n_weight_params == 0) {
        weights_ = Tensor();
        grad_weights_ = Tensor();
    } else {
        weights_.fill(0.0);
    }
}

std::vector<Tensor*> QuantumLayer::params() {
    if (spec_.n_weight_params == 0) return {};
    return {&weights_};
}

std::vector<Tensor*> QuantumLayer::grads() {
    if (spec_.n_weight_params == 0) return {};
    return {&grad_weights_};
}

Tensor QuantumLayer::forward(const Tensor& x) {
    if (x.numel() != spec_.n_data_params)
        throw std::invalid_argument("QuantumLayer: input width mismatch");
    cached_input_ = x.data;
    cached_angles_ = angle_embedding(cached_input_);
    std::vector<double> probs =
        run_circuit(spec_, cached_angles_, std::span<const double>(weights_.data));
    Tensor out({static_cast<int>(probs.size())});
    out.data = std::move(probs);
    return out;
}

Tensor QuantumLayer::backward(const Tensor& grad_out) {
    auto jac = param_shift_jacobian(spec_, cached_angles_, std::span<const double>(weights_.data));
    Tensor grad_in({spec_.n_data_params});
    for (int j = 0; j < spec_.n_params(); ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < jac[j].size(); ++k) d += grad_out.data[k] * jac[j][k];
        if (j < spec_.n_data_params) {
            double t = std::tanh(cached_input_[j]);
            grad_in[j] = d * M_PI * (1.0 - t * t);
        } else {
            grad_weights_[j - spec_.n_data_params] += d;
        }
    }
    return grad_in;
}

// ---------------------------------------------------------------- HybridModel

namespace {

int conv_stack_features(const ModelConfig& c, std::vector<std::unique_ptr<Layer>>* layers,
                        Rng* rng) {
    int size = c.image_size;
    int channels = c.in_channels;
    for (int out_ch : c.conv_channels) {
        if (size < c.kernel)
            throw std::invalid_argument("HybridModel: image too small for conv stack");
        if (layers) layers->push_back(std::make_unique<Conv2d>(channels, out_ch, c.kernel, 1, *rng));
        size = size - c.kernel + 1;
        if (layers) layers->push_back(std::make_unique<Relu>());
        if (size % 2 != 0)
            throw std::invalid_argument("HybridModel: odd feature map before pooling");
        if (layers) layers->push_back(std::make_unique<MaxPool2x2>());
        size /= 2;
        channels = out_ch;
    }
    if (layers) layers->push_back(std::make_unique<Flatten>());
    return channels * size * size;
}

}  // namespace

HybridModel::HybridModel(const ModelConfig& config, std::uint64_t init_seed)
    : config_(config), init_seed_(init_seed) {
    if (config.n_classes < 2) throw std::invalid_argument("HybridModel: n_classes < 2");
    Rng rng(init_seed);
    int feat = conv_stack_features(config, &layers_, &rng);

    if (config.variant == ModelVariant::ClassicalV2) {
        layers_.push_back(std::make_unique<Dense>(feat, 256, rng));
        layers_.push_back(std::make_unique<Relu>());
        layers_.push_back(std::make_unique<Dense>(256, 64, rng));
        layers_.push_back(std::make_unique<Relu>());
        layers_.push_back(std::make_unique<Dense>(64, 32, rng));
        layers_.push_back(std::make_unique<Relu>());
        layers_.push_back(std::make_unique<Dense>(32, config.n_classes, rng));
        return;
    }

    layers_.push_back(std::make_unique<Dense>(feat, config.hidden, rng));
    layers_.push_back(std::make_unique<TanhLayer>());
    layers_.push_back(std::make_unique<Dense>(config.hidden, 4, rng));

    if (config.variant == ModelVariant::ClassicalV1) {
        // 16 nodes, sized after the quantum readout
        layers_.push_back(std::make_unique<TanhLayer>());
        layers_.push_back(std::make_unique<Dense>(4, 16, rng));
        layers_.push_back(std::make_unique<TanhLayer>());
    } else {
        layers_.push_back(
            std::make_unique<QuantumLayer>(circuit_by_name(variant_to_string(config.variant))));
    }
    layers_.push_back(std::make_unique<Dense>(16, config.n_classes, rng));
}

std::vector<double> HybridModel::forward(const Tensor& image) {
    if (image.shape.size() != 3 || image.shape[0] != config_.in_channels ||
        image.shape[1] != config_.image_size || image.shape[2] != config_.image_size)
        throw std::invalid_argument("HybridModel: input image shape mismatch");
    Tensor x = image;
    for (auto& layer : layers_) x = layer->forward(x);
    cached_logits_ = x;
    return softmax(x);
}

double HybridModel::backward(int label) {
    auto [loss, grad] = softmax_cross_entropy(cached_logits_, label);
    Tensor g = std::move(grad);
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return loss;
}

void HybridModel::zero_grads() {
    for (auto& layer : layers_) layer->zero_grads();
}

std::vector<Tensor*> HybridModel::params() {
    std::vector<Tensor*> out;
    for (auto& layer : layers_)
        for (Tensor* p : layer->params()) out.push_back(p);
    return out;
}

std::vector<Tensor*> HybridModel::grads() {
    std::vector<Tensor*> out;
    for (auto& layer : layers_)
        for (Tensor* g : layer->grads()) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------- training

std::vector<EpochStats> train(HybridModel& model, const std::vector<LabeledImage>& train_set,
                              const std::vector<LabeledImage>& val_set,
                              const TrainConfig& config) {
    if (train_set.empty()) throw std::invalid_argument("train: empty dataset");
    if (config.epochs <= 0 || config.batch_size <= 0)
        throw std::invalid_argument("train: bad epochs/batch_size");
    for (const LabeledImage& im : train_set)
        if (im.label < 0 || im.label >= model.config().n_classes)
            throw std::invalid_argument("train: label out of range");

    Rng rng(config.seed);
    AdamConfig acfg;
    acfg.lr = config.lr;
    Adam adam(acfg);
    std::vector<Tensor*> params = model.params();
    std::vector<Tensor*> grads = model.grads();

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<EpochStats> history;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        int correct = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            std::size_t end = std::min(order.size(), start + config.batch_size);
            model.zero_grads();
            for (std::size_t i = start; i < end; ++i) {
                const LabeledImage& im = train_set[order[i]];
                std::vector<double> probs = model.forward(im.pixels);
                int pred = static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                                            probs.begin());
                if (pred == im.label) ++correct;
                loss_sum += model.backward(im.label);
            }
            const double inv = 1.0 / static_cast<double>(end - start);
            for (Tensor* g : grads)
                for (double& v : g->data) v *= inv;
            adam.step(params, grads);
        }

        double val_acc = 0.0;
        if (!val_set.empty()) {
            auto [preds, gts] = evaluate(model, val_set);
            int ok = 0;
            for (std::size_t i = 0; i < preds.size(); ++i) ok += preds[i] == gts[i];
            val_acc = static_cast<double>(ok) / static_cast<double>(preds.size());
        }
        history.push_back({epoch + 1, loss_sum / static_cast<double>(train_set.size()),
                           static_cast<double>(correct) / static_cast<double>(train_set.size()),
                           val_acc});
    }
    model.epochs_trained += config.epochs;
    return history;
}

std::pair<std::vector<int>, std::vector<int>> evaluate(HybridModel& model,
                                                       const std::vector<LabeledImage>& dataset) {
    std::vector<int> preds, gts;
    preds.reserve(dataset.size());
    gts.reserve(dataset.size());
    for (const LabeledImage& im : dataset) {
        std::vector<double> probs = model.forward(im.pixels);
        preds.push_back(
            static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
        gts.push_back(im.label);
    }
    return {preds, gts};
}

int coarse_to_fine_predict(HybridModel& coarse, std::vector<HybridModel*>& fine,
                           const std::vector<std::vector<int>>& fine_to_global,
                           const Tensor& image) {
    std::vector<double> cp = coarse.forward(image);
    int cluster = static_cast<int>(std::max_element(cp.begin(), cp.end()) - cp.begin());
    if (cluster >= static_cast<int>(fine.size()) || fine[cluster] == nullptr)
        throw std::runtime_error("coarse_to_fine_predict: no fine model for cluster " +
                                 std::to_string(cluster));
    std::vector<double> fp = fine[cluster]->forward(image);
    int local = static_cast<int>(std::max_element(fp.begin(), fp.end()) - fp.begin());
    return fine_to_global.at(cluster).at(local);
}

}  // namespace hqnn
