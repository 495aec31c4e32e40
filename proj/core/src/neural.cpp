#include "hqnn/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hqnn {

Tensor::Tensor(std::vector<int> s) : shape(std::move(s)) {
    std::size_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw std::invalid_argument("Tensor: non-positive dimension");
        n *= static_cast<std::size_t>(d);
    }
    data.assign(n, 0.0);
}

void Tensor::fill(double v) { std::fill(data.begin(), data.end(), v); }

void init_uniform(Tensor& t, int fan_in, Rng& rng) {
    double bound = std::sqrt(1.0 / fan_in);
    for (double& w : t.data) w = rng.uniform(-bound, bound);
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int stride, Rng& rng)
    : weights_({out_channels, in_channels, kernel, kernel}),
      bias_({out_channels}),
      grad_weights_({out_channels, in_channels, kernel, kernel}),
      grad_bias_({out_channels}),
      stride_(stride) {
    if (kernel <= 0 || stride <= 0) throw std::invalid_argument("Conv2d: bad kernel/stride");
    init_uniform(weights_, in_channels * kernel * kernel, rng);
    init_uniform(bias_, in_channels * kernel * kernel, rng);
}

Tensor Conv2d::forward(const Tensor& x) {
    if (x.shape.size() != 3 || x.shape[0] != weights_.shape[1])
        throw std::invalid_argument("Conv2d: input shape mismatch");
    const int in_c = weights_.shape[1], out_c = weights_.shape[0], k = weights_.shape[2];
    const int h = x.shape[1], w = x.shape[2];
    if (h < k || w < k) throw std::invalid_argument("Conv2d: input smaller than kernel");
    const int oh = (h - k) / stride_ + 1, ow = (w - k) / stride_ + 1;
    cached_input_ = x;

    Tensor out({out_c, oh, ow});
    for (int oc = 0; oc < out_c; ++oc)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                double acc = bias_[oc];
                for (int ic = 0; ic < in_c; ++ic)
                    for (int ky = 0; ky < k; ++ky)
                        for (int kx = 0; kx < k; ++kx)
                            acc += weights_.at4(oc, ic, ky, kx) *
                                   x.at3(ic, oy * stride_ + ky, ox * stride_ + kx);
                out.at3(oc, oy, ox) = acc;
            }
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    const Tensor& x = cached_input_;
    const int in_c = weights_.shape[1], out_c = weights_.shape[0], k = weights_.shape[2];
    const int oh = grad_out.shape[1], ow = grad_out.shape[2];
    if (grad_out.shape[0] != out_c) throw std::invalid_argument("Conv2d: grad shape mismatch");

    Tensor grad_in(x.shape);
    for (int oc = 0; oc < out_c; ++oc)
        for (int oy = 0; oy < oh; ++oy)
            for (int ox = 0; ox < ow; ++ox) {
                const double g = grad_out.at3(oc, oy, ox);
                grad_bias_[oc] += g;
                for (int ic = 0; ic < in_c; ++ic)
                    for (int ky = 0; ky < k; ++ky)
                        for (int kx = 0; kx < k; ++kx) {
                            const int iy = oy * stride_ + ky, ix = ox * stride_ + kx;
                            grad_weights_.at4(oc, ic, ky, kx) += g * x.at3(ic, iy, ix);
                            grad_in.at3(ic, iy, ix) += g * weights_.at4(oc, ic, ky, kx);
                        }
            }
    return grad_in;
}

// ---------------------------------------------------------------- MaxPool2x2

Tensor MaxPool2x2::forward(const Tensor& x) {
    if (x.shape.size() != 3) throw std::invalid_argument("MaxPool2x2: expects CHW");
    const int c = x.shape[0], h = x.shape[1], w = x.shape[2];
    if (h % 2 != 0 || w % 2 != 0) throw std::invalid_argument("MaxPool2x2: odd spatial dims");
    in_shape_ = x.shape;
    Tensor out({c, h / 2, w / 2});
    argmax_.assign(out.data.size(), 0);
    int oi = 0;
    for (int ch = 0; ch < c; ++ch)
        for (int oy = 0; oy < h / 2; ++oy)
            for (int ox = 0; ox < w / 2; ++ox, ++oi) {
                double best = -1e300;
                int best_idx = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        int iy = 2 * oy + dy, ix = 2 * ox + dx;
                        double v = x.at3(ch, iy, ix);
                        // strict > keeps the first occurrence on ties
                        if (v > best) {
                            best = v;
                            best_idx = (ch * h + iy) * w + ix;
                        }
                    }
                out.data[oi] = best;
                argmax_[oi] = best_idx;
            }
    return out;
}

Tensor MaxPool2x2::backward(const Tensor& grad_out) {
    Tensor grad_in(in_shape_);
    for (std::size_t i = 0; i < grad_out.data.size(); ++i)
        grad_in.data[argmax_[i]] += grad_out.data[i];
    return grad_in;
}

// ---------------------------------------------------------------- activations

Tensor Relu::forward(const Tensor& x) {
    cached_input_ = x;
    Tensor out = x;
    for (double& v : out.data) v = std::max(v, 0.0);
    return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.data.size(); ++i)
        if (cached_input_.data[i] <= 0.0) grad_in.data[i] = 0.0;
    return grad_in;
}

Tensor TanhLayer::forward(const Tensor& x) {
    Tensor out = x;
    for (double& v : out.data) v = std::tanh(v);
    cached_output_ = out;
    return out;
}

Tensor TanhLayer::backward(const Tensor& grad_out) {
    Tensor grad_in = grad_out;
    for (std::size_t i = 0; i < grad_in.data.size(); ++i) {
        double t = cached_output_.data[i];
        grad_in.data[i] *= 1.0 - t * t;
    }
    return grad_in;
}

Tensor Flatten::forward(const Tensor& x) {
    in_shape_ = x.shape;
    Tensor out = x;
    out.shape = {x.numel()};
    return out;
}

Tensor Flatten::backward(const Tensor& grad_out) {
    Tensor grad_in = grad_out;
    grad_in.shape = in_shape_;
    return grad_in;
}

// ---------------------------------------------------------------- Dense

Dense::Dense(int in_features, int out_features, Rng& rng)
    : weights_({out_features, in_features}),
      bias_({out_features}),
      grad_weights_({out_features, in_features}),
      grad_bias_({out_features}) {
    init_uniform(weights_, in_features, rng);
    init_uniform(bias_, in_features, rng);
}

Tensor Dense::forward(const Tensor& x) {
    const int in_f = weights_.shape[1], out_f = weights_.shape[0];
    if (x.numel() != in_f) throw std::invalid_argument("Dense: input size mismatch");
    cached_input_ = x;
    Tensor out({out_f});
    for (int o = 0; o < out_f; ++o) {
        double acc = bias_[o];
        const double* wrow = &weights_.data[static_cast<std::size_t>(o) * in_f];
        for (int i = 0; i < in_f; ++i) acc += wrow[i] * x.data[i];
        out[o] = acc;
    }
    return out;
}

Tensor Dense::backward(const Tensor& grad_out) {
    const int in_f = weights_.shape[1], out_f = weights_.shape[0];
    if (grad_out.numel() != out_f) throw std::invalid_argument("Dense: grad size mismatch");
    Tensor grad_in({in_f});
    for (int o = 0; o < out_f; ++o) {
        const double g = grad_out[o];
        grad_bias_[o] += g;
        const double* wrow = &weights_.data[static_cast<std::size_t>(o) * in_f];
        double* gwrow = &grad_weights_.data[static_cast<std::size_t>(o) * in_f];
        for (int i = 0; i < in_f; ++i) {
            gwrow[i] += g * cached_input_.data[i];
            grad_in.data[i] += g * wrow[i];
        }
    }
    return grad_in;
}

// ---------------------------------------------------------------- loss / optim

std::vector<double> softmax(const Tensor& logits) {
    double mx = *std::max_element(logits.data.begin(), logits.data.end());
    std::vector<double> p(logits.data.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits.data[i] - mx);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::pair<double, Tensor> softmax_cross_entropy(const Tensor& logits, int label) {
    if (label < 0 || label >= logits.numel())
        throw std::invalid_argument("softmax_cross_entropy: label out of range");
    std::vector<double> p = softmax(logits);
    double loss = -std::log(std::max(p[label], 1e-300));
    Tensor grad({logits.numel()});
    for (int i = 0; i < logits.numel(); ++i) grad[i] = p[i] - (i == label ? 1.0 : 0.0);
    return {loss, grad};
}

void Adam::step(const std::vector<Tensor*>& params, const std::vector<Tensor*>& grads) {
    if (params.size() != grads.size()) throw std::invalid_argument("Adam: param/grad mismatch");
    if (m_.empty()) {
        m_.resize(params.size());
        v_.resize(params.size());
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i].assign(params[i]->data.size(), 0.0);
            v_[i].assign(params[i]->data.size(), 0.0);
        }
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Tensor& p = *params[i];
        const Tensor& g = *grads[i];
        if (p.data.size() != g.data.size() || p.data.size() != m_[i].size())
            throw std::invalid_argument("Adam: shape mismatch");
        for (std::size_t j = 0; j < p.data.size(); ++j) {
            m_[i][j] = cfg_.beta1 * m_[i][j] + (1.0 - cfg_.beta1) * g.data[j];
            v_[i][j] = cfg_.beta2 * v_[i][j] + (1.0 - cfg_.beta2) * g.data[j] * g.data[j];
            double mhat = m_[i][j] / bc1;
            double vhat = v_[i][j] / bc2;
            p.data[j] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
        }
    }
}

}  // namespace hqnn
