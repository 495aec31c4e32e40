#include "hqnn/config.hpp"

#include <fstream>

#include <json.hpp>

namespace hqnn {

namespace {

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config_string(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    ExperimentConfig c;
    try {
        if (j.contains("dataset")) {
            const json& d = j.at("dataset");
            maybe(d, "kind", c.dataset.kind);
            maybe(d, "path", c.dataset.path);
            maybe(d, "n_classes", c.dataset.n_classes);
            maybe(d, "n_per_class", c.dataset.n_per_class);
            maybe(d, "image_size", c.dataset.image_size);
            maybe(d, "train_fraction", c.dataset.train_fraction);
        }
        if (j.contains("model")) {
            const json& m = j.at("model");
            std::string variant = variant_to_string(c.model.variant);
            maybe(m, "variant", variant);
            c.model.variant = variant_from_string(variant);
            maybe(m, "conv_channels", c.model.conv_channels);
            maybe(m, "kernel", c.model.kernel);
            maybe(m, "hidden", c.model.hidden);
            maybe(m, "n_classes", c.model.n_classes);
        }
        if (j.contains("train")) {
            const json& t = j.at("train");
            maybe(t, "epochs", c.train.epochs);
            maybe(t, "lr", c.train.lr);
            maybe(t, "batch_size", c.train.batch_size);
        }
        maybe(j, "output_dir", c.output_dir);
        maybe(j, "seed", c.seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    // keep the model in sync with the data it will see
    c.model.image_size = c.dataset.image_size;
    if (c.dataset.kind == "synthetic") c.model.n_classes = c.dataset.n_classes;
    c.train.seed = c.seed;
    return c;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_string(text);
}

std::string serialize_config(const ExperimentConfig& c) {
    json j = {
        {"dataset",
         {{"kind", c.dataset.kind},
          {"path", c.dataset.path},
          {"n_classes", c.dataset.n_classes},
          {"n_per_class", c.dataset.n_per_class},
          {"image_size", c.dataset.image_size},
          {"train_fraction", c.dataset.train_fraction}}},
        {"model",
         {{"variant", variant_to_string(c.model.variant)},
          {"conv_channels", c.model.conv_channels},
          {"kernel", c.model.kernel},
          {"hidden", c.model.hidden},
          {"n_classes", c.model.n_classes}}},
        {"train",
         {{"epochs", c.train.epochs}, {"lr", c.train.lr}, {"batch_size", c.train.batch_size}}},
        {"output_dir", c.output_dir},
        {"seed", c.seed},
    };
    return j.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& c) {
    if (c.dataset.kind != "directory" && c.dataset.kind != "synthetic")
        throw ConfigError("config: unknown dataset kind: " + c.dataset.kind);
    if (c.dataset.kind == "directory" && !std::filesystem::is_directory(c.dataset.path))
        throw ConfigError("config: dataset path is not a directory: " + c.dataset.path);
    if (c.dataset.kind == "synthetic" && c.dataset.n_classes < 2)
        throw ConfigError("config: synthetic dataset needs >= 2 classes");
    if (c.dataset.image_size < 8) throw ConfigError("config: image_size too small");
    if (c.dataset.train_fraction <= 0.0 || c.dataset.train_fraction >= 1.0)
        throw ConfigError("config: train_fraction must be in (0, 1)");
    if (c.train.epochs <= 0) throw ConfigError("config: epochs must be positive");
    if (c.train.lr <= 0.0) throw ConfigError("config: lr must be positive");
    if (c.train.batch_size <= 0) throw ConfigError("config: batch_size must be positive");
}

}  // namespace hqnn
