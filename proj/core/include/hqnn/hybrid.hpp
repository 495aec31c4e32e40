#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hqnn/circuits.hpp"
#include "hqnn/datasets.hpp"
#include "hqnn/neural.hpp"

namespace hqnn {

enum class ModelVariant {
    NoEntanglement,
    Bellman,
    RealAmplitudes,
    ClassicalV1,  // quantum layer swapped for a 16-node dense layer
    ClassicalV2,  // plain MLP head: 256 -> 64 -> 32 -> n_classes
};

ModelVariant variant_from_string(const std::string& s);
std::string variant_to_string(ModelVariant v);
bool variant_is_quantum(ModelVariant v);

struct ModelConfig {
    ModelVariant variant = ModelVariant::RealAmplitudes;
    int in_channels = 3;
    int image_size = 64;
    int n_classes = 10;
    std::vector<int> conv_channels = {6, 16};  // LeNet-style conv stack
    int kernel = 5;
    int hidden = 64;  // width of the dense layer after flatten

    bool operator==(const ModelConfig&) const = default;
};

// Maps adapter activations to rotation angles: theta = pi * tanh(h),
// bounded to (-pi, pi) so one Ry period is covered without aliasing.
std::vector<double> angle_embedding(const std::vector<double>& activations);

// Quantum circuit as a network layer: angle embedding, exact-probability
// readout (16 values), parameter-shift backprop for both the data angles
// and the trainable circuit weights.
class QuantumLayer : public Layer {
  public:
    explicit QuantumLayer(const CircuitSpec& spec);
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Tensor*> params() override;
    std::vector<Tensor*> grads() override;
    std::string kind() const override { return "quantum"; }

    const CircuitSpec& spec() const { return spec_; }
    Tensor weights_;  // (n_weight_params), zero-initialized
    Tensor grad_weights_;

  private:
    CircuitSpec spec_;
    std::vector<double> cached_input_;
    std::vector<double> cached_angles_;
};

// CNN -> dense adapter -> quantum layer (or classical substitute)
// -> dense adapter -> softmax.
class HybridModel {
  public:
    HybridModel(const ModelConfig& config, std::uint64_t init_seed);

    // Class probability vector; caches activations for backward().
    std::vector<double> forward(const Tensor& image);

    // Gradients for the last forward()'s sample, accumulated into the
    // layers' grad tensors. Returns the cross-entropy loss.
    double backward(int label);

    void zero_grads();
    std::vector<Tensor*> params();
    std::vector<Tensor*> grads();

    const ModelConfig& config() const { return config_; }
    std::uint64_t init_seed() const { return init_seed_; }
    const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }

    // training metadata carried into checkpoints
    int epochs_trained = 0;

  private:
    ModelConfig config_;
    std::uint64_t init_seed_;
    std::vector<std::unique_ptr<Layer>> layers_;
    Tensor cached_logits_;
};

struct TrainConfig {
    int epochs = 50;
    double lr = 0.0002;
    int batch_size = 32;
    std::uint64_t seed = 0;

    bool operator==(const TrainConfig&) const = default;
};

struct EpochStats {
    int epoch;
    double train_loss;
    double train_acc;
    double val_acc;
};

// Algorithm: per epoch, seeded shuffle into batches; per sample
// forward/backward; batch-averaged gradients fed to Adam. Deterministic
// given (model init, dataset, config).
std::vector<EpochStats> train(HybridModel& model, const std::vector<LabeledImage>& train_set,
                              const std::vector<LabeledImage>& val_set, const TrainConfig& config);

// argmax predictions in dataset order, paired with ground truths.
std::pair<std::vector<int>, std::vector<int>> evaluate(HybridModel& model,
                                                       const std::vector<LabeledImage>& dataset);

// Routes through the coarse classifier, then the selected fine classifier.
// fine_label_offsets[c] maps fine model c's local labels into the global
// fine label space.
int coarse_to_fine_predict(HybridModel& coarse, std::vector<HybridModel*>& fine,
                           const std::vector<std::vector<int>>& fine_to_global,
                           const Tensor& image);

// Checkpoint I/O. Little-endian binary: magic "HQNN", u32 version,
// u32 JSON header length, JSON topology/metadata, then raw float64 weight
// blocks in layer declaration order.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void save_checkpoint(const HybridModel& model, const std::filesystem::path& path);
HybridModel load_checkpoint(const std::filesystem::path& path);

}  // namespace hqnn
