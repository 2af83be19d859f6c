#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qcredit/ansatz.hpp"
#include "qcredit/nn.hpp"

namespace qcredit {

enum class ModelKind { FH, CC };

// The full hybrid classifier and its classical counterpart. Both share the
// classical scaffold (master 21->21 ReLU, dropout, feeding 21->n_qubits ReLU,
// dropout, sigmoid decision neuron); FH routes the feeding activations through
// the re-uploading circuit, CC through a tanh surrogate layer of the same
// width.
struct HybridModel {
    ModelKind kind = ModelKind::FH;
    AnsatzConfig ansatz;
    DropoutLayer dropout{0.1};

    DenseLayer master;     // 21 -> 21, RELU
    DenseLayer feeding;    // 21 -> n_qubits, RELU
    DenseLayer surrogate;  // CC only: n_qubits -> n_qubits, TANH
    DenseLayer decision;   // n_qubits -> 1, SIGMOID
    QuantumParams quantum_params;  // FH only

    static HybridModel create(ModelKind kind, const AnsatzConfig& ansatz, double dropout_rate,
                              std::uint64_t seed);

    // every trainable tensor, in fixed order
    void for_each_tensor(const std::function<void(const std::string&, std::vector<double>&)>& fn);
    void for_each_tensor(
        const std::function<void(const std::string&, const std::vector<double>&)>& fn) const;
};

struct ModelCache {
    DenseCache master;
    DropoutResult drop1;
    DenseCache feeding;
    DropoutResult drop2;
    std::vector<double> quantum_in;
    std::vector<double> expectations;  // circuit output (FH) or surrogate output (CC)
    DenseCache surrogate;              // CC only
    DenseCache decision;
    double probability = 0.0;
};

struct ModelGrads {
    std::vector<double> master_w, master_b;
    std::vector<double> feeding_w, feeding_b;
    std::vector<double> surrogate_w, surrogate_b;
    std::vector<double> decision_w, decision_b;
    std::vector<double> quantum;

    void for_each(const std::function<void(const std::string&, std::vector<double>&)>& fn);
    std::vector<double>* block(const std::string& name);
    void add(const ModelGrads& other);  // element-wise +=; adopts sizes when empty
    void scale(double factor);
};

// p = sigmoid(decision(...)); rng drives dropout in TRAIN mode only.
// Aborts with the layer name if any activation turns NaN.
ModelCache model_forward(const HybridModel& model, const std::vector<double>& features,
                         DropoutMode mode, Rng& rng);

// Chain rule through the decision layer, the quantum circuit (parameter-shift
// Jacobians for both trainable angles and embedded inputs) or surrogate, and
// the classical layers; dropout masks are reused from the forward cache.
ModelGrads model_backward(const HybridModel& model, const ModelCache& cache, double d_probability);

struct ParamCountEntry {
    std::string name;
    std::size_t count = 0;
    bool quantum = false;
};

struct ParamCounts {
    std::vector<ParamCountEntry> blocks;
    std::size_t classical_total = 0;
    std::size_t quantum_total = 0;
};

ParamCounts param_count(const HybridModel& model);

// Versioned JSON checkpoint; save -> load -> forward round-trips bit-identically.
void save_checkpoint(const HybridModel& model, std::uint64_t seed, const std::string& path);
HybridModel load_checkpoint(const std::string& path, std::uint64_t* seed_out = nullptr);

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

}  // namespace qcredit
