#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hqnn/neural.hpp"

namespace hqnn {

struct LabeledImage {
    Tensor pixels;  // (3, H, W), values in [0, 1]
    int label = 0;
    std::string source_id;
};

struct ManifestItem {
    std::filesystem::path path;
    int label = 0;
};

struct DatasetManifest {
    std::vector<std::string> class_names;
    std::vector<ManifestItem> items;

    int n_classes() const { return static_cast<int>(class_names.size()); }
    std::size_t size() const { return items.size(); }
};

// Directory-per-class tree (EuroSAT layout). Class names are the
// subdirectory names, sorted lexicographically; item order is sorted paths.
// Empty class directories are skipped with a warning on stderr.
DatasetManifest load_directory(const std::filesystem::path& root);

// CSV alternative: one "path,label" row per item, paths relative to the
// CSV's directory. Labels are class-name strings.
DatasetManifest load_csv_manifest(const std::filesystem::path& csv_path);

// Stratified, seeded 80-20 (or custom) split. Per-class train share is
// within one item of the target. Throws if any class has fewer than 2 items.
std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& manifest,
                                                  double train_fraction, std::uint64_t seed);

// Decodes PNG/JPEG bytes to a (3, size, size) RGB tensor in [0, 1].
// Bilinear resize when the source is not already size x size.
Tensor to_tensor(const std::vector<unsigned char>& file_bytes, int size = 64);

// Decodes every manifest item. Throws with the offending path on failure.
std::vector<LabeledImage> load_images(const DatasetManifest& manifest, int image_size = 64);

struct ClusterMap {
    std::vector<std::string> cluster_names;
    std::vector<std::vector<std::string>> members;  // per cluster, fine class names

    // Vegetation / Urban / WaterBodies over the ten EuroSAT classes.
    static ClusterMap eurosat_default();
};

// Remaps labels to coarse cluster indices; item count and order preserved.
// Every class name must be mapped exactly once.
DatasetManifest relabel_clusters(const DatasetManifest& manifest, const ClusterMap& map);
std::vector<LabeledImage> relabel_clusters(const std::vector<LabeledImage>& images,
                                           const std::vector<std::string>& class_names,
                                           const ClusterMap& map);

// Desk-scale synthetic dataset: class k is an oriented sinusoidal grating
// with class-specific frequency/orientation, random phase per image, plus
// seeded pixel noise. Deterministic given the seed.
std::vector<LabeledImage> synthetic_generate(int n_classes, int n_per_class, int image_size,
                                             std::uint64_t seed);

// Stratified in-memory split, same contract as split() on manifests.
std::pair<std::vector<LabeledImage>, std::vector<LabeledImage>> split_images(
    const std::vector<LabeledImage>& images, double train_fraction, std::uint64_t seed);

// Writes images as PNGs in the directory-per-class layout, for pipeline
// tests against load_directory.
void export_directory(const std::vector<LabeledImage>& images,
                      const std::vector<std::string>& class_names,
                      const std::filesystem::path& root);

}  // namespace hqnn
