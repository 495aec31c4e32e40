#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hqnn/rng.hpp"

namespace hqnn {

// Flat row-major n-dimensional array of doubles.
struct Tensor {
    std::vector<int> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s);

    static Tensor zeros(std::vector<int> s) { return Tensor(std::move(s)); }

    int numel() const { return static_cast<int>(data.size()); }
    double& operator[](int i) { return data[i]; }
    double operator[](int i) const { return data[i]; }

    // 3D (C,H,W) and 4D (O,I,H,W) accessors for the conv kernels.
    double& at3(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
    }
    double at3(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * shape[1] + y) * shape[2] + x];
    }
    double& at4(int o, int i, int y, int x) {
        return data[((static_cast<std::size_t>(o) * shape[1] + i) * shape[2] + y) * shape[3] + x];
    }
    double at4(int o, int i, int y, int x) const {
        return data[((static_cast<std::size_t>(o) * shape[1] + i) * shape[2] + y) * shape[3] + x];
    }

    void fill(double v);
};

// Layers process one sample at a time: forward caches what backward needs,
// backward accumulates parameter gradients (call zero_grads between batches).
class Layer {
  public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Tensor*> params() { return {}; }
    virtual std::vector<Tensor*> grads() { return {}; }
    virtual std::string kind() const = 0;

    void zero_grads() {
        for (Tensor* g : grads()) g->fill(0.0);
    }
};

class Conv2d : public Layer {
  public:
    // Valid padding; square kernel.
    Conv2d(int in_channels, int out_channels, int kernel, int stride, Rng& rng);
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
    std::vector<Tensor*> grads() override { return {&grad_weights_, &grad_bias_}; }
    std::string kind() const override { return "conv2d"; }

    Tensor weights_;  // (out, in, k, k)
    Tensor bias_;     // (out)
    Tensor grad_weights_, grad_bias_;
    int stride_;

  private:
    Tensor cached_input_;
};

class MaxPool2x2 : public Layer {
  public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "maxpool2x2"; }

  private:
    std::vector<int> argmax_;  // flat input index per output element
    std::vector<int> in_shape_;
};

class Relu : public Layer {
  public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "relu"; }

  private:
    Tensor cached_input_;
};

class TanhLayer : public Layer {
  public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "tanh"; }

  private:
    Tensor cached_output_;
};

class Flatten : public Layer {
  public:
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "flatten"; }

  private:
    std::vector<int> in_shape_;
};

class Dense : public Layer {
  public:
    Dense(int in_features, int out_features, Rng& rng);
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Tensor*> params() override { return {&weights_, &bias_}; }
    std::vector<Tensor*> grads() override { return {&grad_weights_, &grad_bias_}; }
    std::string kind() const override { return "dense"; }

    Tensor weights_;  // (out, in)
    Tensor bias_;     // (out)
    Tensor grad_weights_, grad_bias_;

  private:
    Tensor cached_input_;
};

// Numerically stabilized fused softmax + cross-entropy.
// Returns {loss, d(loss)/d(logits)}.
std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int label);

std::vector<double> softmax(const Tensor& logits);

struct AdamConfig {
    double lr = 0.0002;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

class Adam {
  public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    // Parameter list must be identical (same order, same shapes) every call.
    void step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads);

    long long step_count() const { return step_; }

  private:
    AdamConfig cfg_;
    long long step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

// uniform(-sqrt(1/fan_in), +sqrt(1/fan_in))
void init_uniform(Tensor& t, int fan_in, Rng& rng);

}  // namespace hqnn
