#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "hqnn/hybrid.hpp"

namespace hqnn {

struct DatasetConfig {
    std::string kind = "synthetic";  // "directory" | "synthetic"
    std::string path;                // directory kind
    int n_classes = 4;               // synthetic kind
    int n_per_class = 50;            // synthetic kind
    int image_size = 64;
    double train_fraction = 0.8;

    bool operator==(const DatasetConfig&) const = default;
};

// Declarative experiment description consumed by the CLI. JSON on disk;
// CLI flags override individual keys after parsing.
struct ExperimentConfig {
    DatasetConfig dataset;
    ModelConfig model;
    TrainConfig train;
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_string(const std::string& json_text);
std::string serialize_config(const ExperimentConfig& config);

// Validates cross-field consistency (known kinds, existing paths, positive
// sizes). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

}  // namespace hqnn
