#include "qcredit/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcredit {

void AnsatzConfig::validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("AnsatzConfig: n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    if (n_blocks < 1) {
        throw std::invalid_argument("AnsatzConfig: n_blocks must be >= 1, got " +
                                    std::to_string(n_blocks));
    }
    if (layers_per_block < 1) {
        throw std::invalid_argument("AnsatzConfig: layers_per_block must be >= 1, got " +
                                    std::to_string(layers_per_block));
    }
}

namespace {

// provenance of one shiftable angle in the gate list
struct AngleRef {
    std::size_t gate = 0;
    int slot = 0;          // angle slot within the gate
    bool is_input = false;
    std::size_t index = 0;  // flat param index, or input index
};

struct Layout {
    std::vector<GateOp> gates;
    std::vector<AngleRef> angles;
};

QuantumInput padded_input(const AnsatzConfig& cfg, const QuantumInput& x) {
    const auto n = static_cast<std::size_t>(cfg.n_qubits);
    if (x.size() > n) {
        throw std::invalid_argument("ansatz: input length " + std::to_string(x.size()) +
                                    " exceeds n_qubits " + std::to_string(cfg.n_qubits));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("ansatz: non-finite input value");
    }
    QuantumInput padded = x;
    padded.resize(n, 0.0);
    return padded;
}

void check_params(const AnsatzConfig& cfg, const QuantumParams& params) {
    if (params.size() != cfg.param_count()) {
        throw std::invalid_argument("ansatz: expected " + std::to_string(cfg.param_count()) +
                                    " params (blocks*layers*qubits*3), got " +
                                    std::to_string(params.size()));
    }
}

Layout build_layout(const AnsatzConfig& cfg, const QuantumInput& x, const QuantumParams& params) {
    cfg.validate();
    check_params(cfg, params);
    const QuantumInput xp = padded_input(cfg, x);
    const int n = cfg.n_qubits;

    Layout layout;
    for (int b = 0; b < cfg.n_blocks; ++b) {
        for (int q = 0; q < n; ++q) {
            layout.angles.push_back({layout.gates.size(), 0, true, static_cast<std::size_t>(q)});
            layout.gates.push_back(GateOp::rx(q, xp[static_cast<std::size_t>(q)]));
        }
        for (int l = 0; l < cfg.layers_per_block; ++l) {
            for (int q = 0; q < n; ++q) {
                const std::size_t p = cfg.param_index(b, l, q, 0);
                for (int a = 0; a < 3; ++a) {
                    layout.angles.push_back({layout.gates.size(), a, false, p + a});
                }
                layout.gates.push_back(GateOp::rot(q, params[p], params[p + 1], params[p + 2]));
            }
            if (n == 2) {
                layout.gates.push_back(GateOp::cnot(0, 1));
            } else if (n > 2) {
                const int last = cfg.ring ? n : n - 1;
                for (int q = 0; q < last; ++q) {
                    layout.gates.push_back(GateOp::cnot(q, (q + 1) % n));
                }
            }
        }
    }
    return layout;
}

}  // namespace

std::vector<GateOp> build_circuit(const AnsatzConfig& cfg, const QuantumInput& x,
                                  const QuantumParams& params) {
    return build_layout(cfg, x, params).gates;
}

std::vector<double> ansatz_forward(const AnsatzConfig& cfg, const QuantumInput& x,
                                   const QuantumParams& params) {
    Statevector state = new_zero_state(cfg.n_qubits);
    apply_circuit(state, build_circuit(cfg, x, params));
    return expectation_z_all(state);
}

AnsatzGradients ansatz_gradients(const AnsatzConfig& cfg, const QuantumInput& x,
                                 const QuantumParams& params) {
    const Layout layout = build_layout(cfg, x, params);
    const auto n = static_cast<std::size_t>(cfg.n_qubits);

    AnsatzGradients grads;
    grads.d_params = Matrix(n, cfg.param_count());
    grads.d_input = Matrix(n, n);

    // March the base state through the circuit once; every shifted evaluation
    // reuses the prefix and only replays the suffix.
    Statevector running = new_zero_state(cfg.n_qubits);
    std::size_t next_angle = 0;
    constexpr double half_pi = std::numbers::pi / 2.0;

    for (std::size_t k = 0; k < layout.gates.size(); ++k) {
        const GateOp& gate = layout.gates[k];
        for (; next_angle < layout.angles.size() && layout.angles[next_angle].gate == k;
             ++next_angle) {
            const AngleRef& ref = layout.angles[next_angle];
            double shifted[2][32];  // expectations at +pi/2 and -pi/2; n <= 20
            for (int s = 0; s < 2; ++s) {
                Statevector state = running;
                GateOp g = gate;
                g.angles[ref.slot] += s == 0 ? half_pi : -half_pi;
                apply_gate(state, g);
                for (std::size_t j = k + 1; j < layout.gates.size(); ++j) {
                    apply_gate(state, layout.gates[j]);
                }
                const std::vector<double> e = expectation_z_all(state);
                for (std::size_t q = 0; q < n; ++q) shifted[s][q] = e[q];
            }
            for (std::size_t q = 0; q < n; ++q) {
                const double d = (shifted[0][q] - shifted[1][q]) / 2.0;
                if (ref.is_input) {
                    grads.d_input.at(q, ref.index) += d;  // one occurrence per block
                } else {
                    grads.d_params.at(q, ref.index) = d;
                }
            }
        }
        apply_gate(running, gate);
    }
    return grads;
}

}  // namespace qcredit
