#pragma once

#include <string>
#include <vector>

#include "qcredit/matrix.hpp"
#include "qcredit/rng.hpp"

namespace qcredit {

enum class Activation { RELU, LEAKY_RELU, TANH, SIGMOID, IDENTITY };

inline constexpr double kLeakySlope = 0.01;

// Fully connected layer, activation(W*x + b). Weights are out x in row-major.
struct DenseLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weights;
    std::vector<double> biases;
    Activation activation = Activation::IDENTITY;

    DenseLayer() = default;
    DenseLayer(std::size_t in, std::size_t out, Activation act)
        : in_dim(in), out_dim(out), weights(in * out, 0.0), biases(out, 0.0), activation(act) {}

    // He-uniform for ReLU-family layers, Xavier-uniform otherwise; biases zero.
    void init_weights(Rng& rng);

    std::size_t param_count() const { return weights.size() + biases.size(); }
};

struct DenseCache {
    std::vector<double> input;
    std::vector<double> pre_activation;
    std::vector<double> output;
};

struct DenseGrads {
    std::vector<double> d_input;
    std::vector<double> d_weights;
    std::vector<double> d_biases;
};

DenseCache dense_forward(const DenseLayer& layer, const std::vector<double>& input);

// Exact chain rule for the affine map and the activation subgradient
// (ReLU'(0) := 0, LeakyReLU'(0) := slope).
DenseGrads dense_backward(const DenseLayer& layer, const DenseCache& cache,
                          const std::vector<double>& upstream);

enum class DropoutMode { TRAIN, EVAL };

// Inverted dropout: each unit zeroed with probability `rate`, survivors scaled
// by 1/(1-rate). EVAL mode is the identity.
struct DropoutLayer {
    double rate = 0.0;

    void validate() const;
};

struct DropoutResult {
    std::vector<double> output;
    std::vector<double> mask;  // per-unit multiplier (0 or 1/(1-rate)); all ones in EVAL
};

DropoutResult dropout_forward(const DropoutLayer& layer, const std::vector<double>& input,
                              DropoutMode mode, Rng& rng);

std::vector<double> dropout_backward(const std::vector<double>& mask,
                                     const std::vector<double>& upstream);

struct BceResult {
    double loss = 0.0;
    double d_prediction = 0.0;
};

// Binary cross-entropy on the prediction clamped to [1e-12, 1 - 1e-12].
BceResult bce_loss(double prediction, double label);

// params -= lr * grads; plain SGD, no momentum. Aborts on NaN gradients,
// naming the parameter block.
void sgd_step(std::vector<double>& params, const std::vector<double>& grads, double lr,
              const std::string& block_name);

double activation_apply(Activation act, double x);
double activation_grad(Activation act, double pre_activation);

}  // namespace qcredit
