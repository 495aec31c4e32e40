#include "hqnn/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "hqnn/threading.hpp"

namespace hqnn {

namespace fs = std::filesystem;

namespace {

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

DatasetManifest load_directory(const fs::path& root) {
    if (!fs::is_directory(root))
        throw std::runtime_error("load_directory: not a directory: " + root.string());

    std::vector<fs::path> class_dirs;
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) class_dirs.push_back(e.path());
    std::sort(class_dirs.begin(), class_dirs.end());

    DatasetManifest m;
    for (const fs::path& dir : class_dirs) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
        if (files.empty()) {
            std::cerr << "warning: skipping empty class directory " << dir << "\n";
            continue;
        }
        std::sort(files.begin(), files.end());
        int label = static_cast<int>(m.class_names.size());
        m.class_names.push_back(dir.filename().string());
        for (fs::path& f : files) m.items.push_back({std::move(f), label});
    }
    if (m.items.empty()) throw std::runtime_error("load_directory: no images under " + root.string());
    return m;
}

DatasetManifest load_csv_manifest(const fs::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("load_csv_manifest: cannot open " + csv_path.string());
    const fs::path base = csv_path.parent_path();

    std::vector<std::pair<fs::path, std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw std::runtime_error("load_csv_manifest: malformed row: " + line);
        fs::path p = line.substr(0, comma);
        if (p.is_relative()) p = base / p;
        rows.emplace_back(std::move(p), line.substr(comma + 1));
    }
    if (rows.empty()) throw std::runtime_error("load_csv_manifest: empty manifest");

    DatasetManifest m;
    std::map<std::string, int> label_of;
    for (auto& [p, cls] : rows) {
        if (!label_of.count(cls)) label_of[cls] = 0;
    }
    for (auto& [cls, lbl] : label_of) {
        lbl = static_cast<int>(m.class_names.size());
        m.class_names.push_back(cls);
    }
    for (auto& [p, cls] : rows) m.items.push_back({std::move(p), label_of[cls]});
    return m;
}

namespace {

// Shared stratified split over (index, label) pairs.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_indices(
    const std::vector<int>& labels, int n_classes, double train_fraction, std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw std::invalid_argument("split: train_fraction must be in (0, 1)");
    std::vector<std::vector<std::size_t>> per_class(n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) per_class[labels[i]].push_back(i);

    Rng rng(seed);
    std::vector<std::size_t> train, val;
    for (int c = 0; c < n_classes; ++c) {
        auto& idx = per_class[c];
        if (idx.size() < 2)
            throw std::runtime_error("split: class " + std::to_string(c) + " has < 2 items");
        rng.shuffle(idx);
        std::size_t n_train = static_cast<std::size_t>(
            std::lround(train_fraction * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        train.insert(train.end(), idx.begin(), idx.begin() + n_train);
        val.insert(val.end(), idx.begin() + n_train, idx.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    return {train, val};
}

}  // namespace

std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& manifest,
                                                  double train_fraction, std::uint64_t seed) {
    std::vector<int> labels;
    labels.reserve(manifest.items.size());
    for (const auto& it : manifest.items) labels.push_back(it.label);
    auto [ti, vi] = stratified_indices(labels, manifest.n_classes(), train_fraction, seed);

    DatasetManifest train, val;
    train.class_names = val.class_names = manifest.class_names;
    for (std::size_t i : ti) train.items.push_back(manifest.items[i]);
    for (std::size_t i : vi) val.items.push_back(manifest.items[i]);
    return {train, val};
}

std::pair<std::vector<LabeledImage>, std::vector<LabeledImage>> split_images(
    const std::vector<LabeledImage>& images, double train_fraction, std::uint64_t seed) {
    int n_classes = 0;
    std::vector<int> labels;
    labels.reserve(images.size());
    for (const auto& im : images) {
        labels.push_back(im.label);
        n_classes = std::max(n_classes, im.label + 1);
    }
    auto [ti, vi] = stratified_indices(labels, n_classes, train_fraction, seed);
    std::vector<LabeledImage> train, val;
    for (std::size_t i : ti) train.push_back(images[i]);
    for (std::size_t i : vi) val.push_back(images[i]);
    return {train, val};
}

Tensor to_tensor(const std::vector<unsigned char>& file_bytes, int size) {
    cv::Mat raw(1, static_cast<int>(file_bytes.size()), CV_8UC1,
                const_cast<unsigned char*>(file_bytes.data()));
    cv::Mat img = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (img.empty()) throw std::runtime_error("to_tensor: undecodable image");
    if (img.rows != size || img.cols != size)
        cv::resize(img, img, cv::Size(size, size), 0, 0, cv::INTER_LINEAR);

    Tensor t({3, size, size});
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            cv::Vec3b bgr = img.at<cv::Vec3b>(y, x);
            t.at3(0, y, x) = bgr[2] / 255.0;
            t.at3(1, y, x) = bgr[1] / 255.0;
            t.at3(2, y, x) = bgr[0] / 255.0;
        }
    return t;
}

std::vector<LabeledImage> load_images(const DatasetManifest& manifest, int image_size) {
    std::vector<LabeledImage> out(manifest.items.size());
    std::vector<std::string> errors(manifest.items.size());
    parallel_for(manifest.items.size(), [&](std::size_t i) {
        const auto& item = manifest.items[i];
        std::ifstream in(item.path, std::ios::binary);
        if (!in) {
            errors[i] = "load_images: cannot read " + item.path.string();
            return;
        }
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
        try {
            out[i] = {to_tensor(bytes, image_size), item.label, item.path.string()};
        } catch (const std::exception& e) {
            errors[i] = std::string(e.what()) + ": " + item.path.string();
        }
    });
    for (const std::string& err : errors)
        if (!err.empty()) throw std::runtime_error(err);
    return out;
}

ClusterMap ClusterMap::eurosat_default() {
    ClusterMap m;
    m.cluster_names = {"Vegetation", "Urban", "WaterBodies"};
    m.members = {
        {"AnnualCrop", "PermanentCrop", "Pasture", "Forest", "HerbaceousVegetation"},
        {"Highway", "Industrial", "Residential"},
        {"River", "SeaLake"},
    };
    return m;
}

namespace {

std::vector<int> cluster_label_map(const std::vector<std::string>& class_names,
                                   const ClusterMap& map) {
    std::vector<int> coarse_of(class_names.size(), -1);
    for (std::size_t c = 0; c < map.members.size(); ++c)
        for (const std::string& name : map.members[c]) {
            auto it = std::find(class_names.begin(), class_names.end(), name);
            if (it == class_names.end()) continue;
            std::size_t idx = static_cast<std::size_t>(it - class_names.begin());
            if (coarse_of[idx] != -1)
                throw std::runtime_error("relabel_clusters: class mapped twice: " + name);
            coarse_of[idx] = static_cast<int>(c);
        }
    for (std::size_t i = 0; i < coarse_of.size(); ++i)
        if (coarse_of[i] == -1)
            throw std::runtime_error("relabel_clusters: unmapped class: " + class_names[i]);
    return coarse_of;
}

}  // namespace

DatasetManifest relabel_clusters(const DatasetManifest& manifest, const ClusterMap& map) {
    std::vector<int> coarse_of = cluster_label_map(manifest.class_names, map);
    DatasetManifest out;
    out.class_names = map.cluster_names;
    out.items = manifest.items;
    for (auto& item : out.items) item.label = coarse_of[item.label];
    return out;
}

std::vector<LabeledImage> relabel_clusters(const std::vector<LabeledImage>& images,
                                           const std::vector<std::string>& class_names,
                                           const ClusterMap& map) {
    std::vector<int> coarse_of = cluster_label_map(class_names, map);
    std::vector<LabeledImage> out = images;
    for (auto& im : out) im.label = coarse_of[im.label];
    return out;
}

std::vector<LabeledImage> synthetic_generate(int n_classes, int n_per_class, int image_size,
                                             std::uint64_t seed) {
    if (n_classes < 2) throw std::invalid_argument("synthetic_generate: n_classes < 2");
    Rng rng(seed);
    std::vector<LabeledImage> out;
    out.reserve(static_cast<std::size_t>(n_classes) * n_per_class);

    for (int c = 0; c < n_classes; ++c) {
        // class signature: orientation sweeps the half circle, frequency alternates
        const double angle = M_PI * c / n_classes;
        const double freq = 2.0 + 1.5 * (c % 2) + 0.5 * (c / 2 % 2);
        const double ca = std::cos(angle), sa = std::sin(angle);
        for (int i = 0; i < n_per_class; ++i) {
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            LabeledImage im;
            im.label = c;
            im.source_id = "synthetic/" + std::to_string(c) + "/" + std::to_string(i);
            im.pixels = Tensor({3, image_size, image_size});
            for (int y = 0; y < image_size; ++y)
                for (int x = 0; x < image_size; ++x) {
                    double u = (ca * x + sa * y) / image_size;
                    double v = 0.5 + 0.35 * std::sin(2.0 * M_PI * freq * u + phase);
                    for (int ch = 0; ch < 3; ++ch) {
                        double noisy = v + 0.12 * rng.normal();
                        im.pixels.at3(ch, y, x) = std::clamp(noisy, 0.0, 1.0);
                    }
                }
            out.push_back(std::move(im));
        }
    }
    return out;
}

void export_directory(const std::vector<LabeledImage>& images,
                      const std::vector<std::string>& class_names, const fs::path& root) {
    std::vector<int> counter(class_names.size(), 0);
    for (const LabeledImage& im : images) {
        const Tensor& t = im.pixels;
        const int h = t.shape[1], w = t.shape[2];
        cv::Mat mat(h, w, CV_8UC3);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                auto q = [&](int ch) {
                    return static_cast<unsigned char>(
                        std::lround(std::clamp(t.at3(ch, y, x), 0.0, 1.0) * 255.0));
                };
                mat.at<cv::Vec3b>(y, x) = cv::Vec3b(q(2), q(1), q(0));
            }
        fs::path dir = root / class_names.at(im.label);
        fs::create_directories(dir);
        char name[32];
        std::snprintf(name, sizeof(name), "img_%05d.png", counter[im.label]++);
        if (!cv::imwrite((dir / name).string(), mat))
            throw std::runtime_error("export_directory: failed to write " + (dir / name).string());
    }
}

}  // namespace hqnn
