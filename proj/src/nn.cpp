#include "qcredit/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcredit {

double activation_apply(Activation act, double x) {
    switch (act) {
        case Activation::RELU: return x > 0.0 ? x : 0.0;
        case Activation::LEAKY_RELU: return x > 0.0 ? x : kLeakySlope * x;
        case Activation::TANH: return std::tanh(x);
        case Activation::SIGMOID: return 1.0 / (1.0 + std::exp(-x));
        case Activation::IDENTITY: return x;
    }
    throw std::invalid_argument("unknown activation");
}

double activation_grad(Activation act, double pre_activation) {
    switch (act) {
        case Activation::RELU: return pre_activation > 0.0 ? 1.0 : 0.0;
        case Activation::LEAKY_RELU: return pre_activation > 0.0 ? 1.0 : kLeakySlope;
        case Activation::TANH: {
            const double t = std::tanh(pre_activation);
            return 1.0 - t * t;
        }
        case Activation::SIGMOID: {
            const double s = 1.0 / (1.0 + std::exp(-pre_activation));
            return s * (1.0 - s);
        }
        case Activation::IDENTITY: return 1.0;
    }
    throw std::invalid_argument("unknown activation");
}

void DenseLayer::init_weights(Rng& rng) {
    const bool relu_family =
        activation == Activation::RELU || activation == Activation::LEAKY_RELU;
    const double bound = relu_family
                             ? std::sqrt(6.0 / static_cast<double>(in_dim))
                             : std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (auto& w : weights) w = rng.uniform(-bound, bound);
    for (auto& b : biases) b = 0.0;
}

DenseCache dense_forward(const DenseLayer& layer, const std::vector<double>& input) {
    if (input.size() != layer.in_dim) {
        throw std::invalid_argument("dense_forward: expected input of length " +
                                    std::to_string(layer.in_dim) + ", got " +
                                    std::to_string(input.size()));
    }
    DenseCache cache;
    cache.input = input;
    cache.pre_activation.resize(layer.out_dim);
    cache.output.resize(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double acc = layer.biases[o];
        const double* row = layer.weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) acc += row[i] * input[i];
        cache.pre_activation[o] = acc;
        cache.output[o] = activation_apply(layer.activation, acc);
    }
    return cache;
}

DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const std::vector<double>& upstream) {
    if (upstream.size() != layer.out_dim || cache.input.size() != layer.in_dim) {
        throw std::invalid_argument("dense_backward: shape mismatch");
    }
    DenseGrads grads;
    grads.d_input.assign(layer.in_dim, 0.0);
    grads.d_weights.assign(layer.weights.size(), 0.0);
    grads.d_biases.assign(layer.out_dim, 0.0);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        const double d_pre = upstream[o] * activation_grad(layer.activation, cache.pre_activation[o]);
        grads.d_biases[o] = d_pre;
        const double* wrow = layer.weights.data() + o * layer.in_dim;
        double* grow = grads.d_weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
            grow[i] = d_pre * cache.input[i];
            grads.d_input[i] += d_pre * wrow[i];
        }
    }
    return grads;
}

void DropoutLayer::validate() const {
    if (rate < 0.0 || rate >= 1.0) {
        throw std::invalid_argument("DropoutLayer: rate must be in [0, 1), got " +
                                    std::to_string(rate));
    }
}

DropoutResult dropout_forward(const DropoutLayer& layer, const std::vector<double>& input,
                              DropoutMode mode, Rng& rng) {
    layer.validate();
    DropoutResult result;
    result.output = input;
    result.mask.assign(input.size(), 1.0);
    if (mode == DropoutMode::EVAL || layer.rate == 0.0) return result;
    const double keep_scale = 1.0 / (1.0 - layer.rate);
    for (std::size_t i = 0; i < input.size(); ++i) {
        const double m = rng.uniform() < layer.rate ? 0.0 : keep_scale;
        result.mask[i] = m;
        result.output[i] = input[i] * m;
    }
    return result;
}

std::vector<double> dropout_backward(const std::vector<double>& mask,
                                     const std::vector<double>& upstream) {
    if (mask.size() != upstream.size()) {
        throw std::invalid_argument("dropout_backward: shape mismatch");
    }
    std::vector<double> d(upstream.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = upstream[i] * mask[i];
    return d;
}

BceResult bce_loss(double prediction, double label) {
    if (label != 0.0 && label != 1.0) {
        throw std::invalid_argument("bce_loss: label must be 0 or 1, got " +
                                    std::to_string(label));
    }
    constexpr double eps = 1e-12;
    const double p = std::min(std::max(prediction, eps), 1.0 - eps);
    BceResult result;
    result.loss = -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
    result.d_prediction = (p - label) / (p * (1.0 - p));
    return result;
}

void sgd_step(std::vector<double>& params, const std::vector<double>& grads, double lr,
              const std::string& block_name) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("sgd_step: size mismatch for block " + block_name);
    }
    if (!(lr >= 0.0)) {
        throw std::invalid_argument("sgd_step: learning rate must be >= 0");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (std::isnan(grads[i])) {
            throw std::runtime_error("sgd_step: NaN gradient in block " + block_name +
                                     " at index " + std::to_string(i));
        }
        params[i] -= lr * grads[i];
    }
}

}  // namespace qcredit
