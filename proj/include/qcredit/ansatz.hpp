#pragma once

#include <cstddef>
#include <vector>

#include "qcredit/matrix.hpp"
#include "qcredit/qsim.hpp"

namespace qcredit {

// Circuit shape of the re-uploading classifier: each block embeds the input
// with one RX per qubit, then runs `layers_per_block` entangling layers (a
// trainable ROT per qubit followed by a nearest-neighbour CNOT ring).
struct AnsatzConfig {
    int n_qubits = 1;
    int n_blocks = 1;
    int layers_per_block = 1;
    bool ring = true;  // false: open chain CNOT(i, i+1), no wrap-around

    // trainable angles: one (phi, theta, omega) triple per qubit per layer
    std::size_t param_count() const {
        return static_cast<std::size_t>(n_blocks) * static_cast<std::size_t>(layers_per_block) *
               static_cast<std::size_t>(n_qubits) * 3;
    }
    // flat index of euler angle a of qubit q in layer l of block b
    std::size_t param_index(int b, int l, int q, int a) const {
        return ((static_cast<std::size_t>(b) * layers_per_block + l) * n_qubits + q) * 3 + a;
    }

    void validate() const;
};

using QuantumParams = std::vector<double>;
using QuantumInput = std::vector<double>;

// Per-qubit gradients of <Z_q> with respect to the trainable angles and the
// embedded inputs. Rows index qubits.
struct AnsatzGradients {
    Matrix d_params;  // n_qubits x param_count
    Matrix d_input;   // n_qubits x n_qubits
};

// Ordered gate list of the full circuit. Inputs shorter than n_qubits are
// zero-padded; longer inputs are rejected.
std::vector<GateOp> build_circuit(const AnsatzConfig& cfg, const QuantumInput& x,
                                  const QuantumParams& params);

// expectation_z_all of the circuit applied to |0...0>
std::vector<double> ansatz_forward(const AnsatzConfig& cfg, const QuantumInput& x,
                                   const QuantumParams& params);

// Exact parameter-shift gradients: d<Z_q>/da = (<Z_q>(a+pi/2) - <Z_q>(a-pi/2))/2
// for every rotation angle a. Input gradients sum the shift contributions of
// the one RX occurrence per block.
AnsatzGradients ansatz_gradients(const AnsatzConfig& cfg, const QuantumInput& x,
                                 const QuantumParams& params);

}  // namespace qcredit
