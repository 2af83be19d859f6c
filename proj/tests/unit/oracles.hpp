#pragma once

// Test-only reference implementations, kept independent of the simulator's
// stride kernels: gates become explicit 2^n x 2^n matrices via Kronecker
// products and circuits become dense matrix-vector products.

#include <complex>
#include <vector>

#include "qcredit/ansatz.hpp"
#include "qcredit/qsim.hpp"
#include "qcredit/rng.hpp"

namespace oracle {

using qcredit::cdouble;

struct DenseMatrix {
    std::size_t dim = 0;
    std::vector<cdouble> data;  // row-major

    explicit DenseMatrix(std::size_t d) : dim(d), data(d * d, cdouble{0, 0}) {}

    cdouble& at(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    cdouble at(std::size_t r, std::size_t c) const { return data[r * dim + c]; }

    static DenseMatrix identity(std::size_t d) {
        DenseMatrix m(d);
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.dim * b.dim);
    for (std::size_t ra = 0; ra < a.dim; ++ra)
        for (std::size_t ca = 0; ca < a.dim; ++ca)
            for (std::size_t rb = 0; rb < b.dim; ++rb)
                for (std::size_t cb = 0; cb < b.dim; ++cb)
                    out.at(ra * b.dim + rb, ca * b.dim + cb) = a.at(ra, ca) * b.at(rb, cb);
    return out;
}

// Full unitary of one gate on an n-qubit register, little-endian bit order
// (qubit 0 is the least significant index bit, i.e. the rightmost Kronecker
// factor).
inline DenseMatrix gate_unitary(const qcredit::GateOp& gate, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (gate.kind == qcredit::GateKind::CNOT) {
        DenseMatrix m(dim);
        const std::size_t cmask = std::size_t{1} << gate.control;
        const std::size_t tmask = std::size_t{1} << gate.target;
        for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t i = (j & cmask) ? (j ^ tmask) : j;
            m.at(i, j) = 1.0;
        }
        return m;
    }
    cdouble u[4];
    qcredit::gate_matrix(gate, u);
    DenseMatrix u2(2);
    u2.at(0, 0) = u[0];
    u2.at(0, 1) = u[1];
    u2.at(1, 0) = u[2];
    u2.at(1, 1) = u[3];
    const DenseMatrix eye = DenseMatrix::identity(2);
    DenseMatrix full = DenseMatrix::identity(1);
    for (int q = n_qubits - 1; q >= 0; --q) {
        full = kron(full, q == gate.target ? u2 : eye);
    }
    return full;
}

inline std::vector<cdouble> apply_dense(const DenseMatrix& m, const std::vector<cdouble>& v) {
    std::vector<cdouble> out(m.dim, cdouble{0, 0});
    for (std::size_t r = 0; r < m.dim; ++r)
        for (std::size_t c = 0; c < m.dim; ++c) out[r] += m.at(r, c) * v[c];
    return out;
}

inline std::vector<cdouble> run_circuit_dense(int n_qubits,
                                              const std::vector<qcredit::GateOp>& gates) {
    std::vector<cdouble> state(std::size_t{1} << n_qubits, cdouble{0, 0});
    state[0] = 1.0;
    for (const auto& gate : gates) state = apply_dense(gate_unitary(gate, n_qubits), state);
    return state;
}

inline qcredit::GateOp random_gate(int n_qubits, qcredit::Rng& rng) {
    const int kind = static_cast<int>(rng.below(n_qubits >= 2 ? 5 : 4));
    const int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
    const double angle = rng.uniform(-6.5, 6.5);
    switch (kind) {
        case 0: return qcredit::GateOp::rx(target, angle);
        case 1: return qcredit::GateOp::ry(target, angle);
        case 2: return qcredit::GateOp::rz(target, angle);
        case 3:
            return qcredit::GateOp::rot(target, angle, rng.uniform(-6.5, 6.5),
                                        rng.uniform(-6.5, 6.5));
        default: {
            int control = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
            while (control == target) {
                control = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
            }
            return qcredit::GateOp::cnot(control, target);
        }
    }
}

// Central finite differences of ansatz_forward with respect to one scalar.
inline std::vector<double> fd_forward_shift(const qcredit::AnsatzConfig& cfg,
                                            qcredit::QuantumInput x, qcredit::QuantumParams params,
                                            bool input_side, std::size_t index, double h) {
    auto& slot = input_side ? x.at(index) : params.at(index);
    slot += h;
    auto up = qcredit::ansatz_forward(cfg, x, params);
    slot -= 2.0 * h;
    auto down = qcredit::ansatz_forward(cfg, x, params);
    std::vector<double> grad(up.size());
    for (std::size_t q = 0; q < up.size(); ++q) grad[q] = (up[q] - down[q]) / (2.0 * h);
    return grad;
}

}  // namespace oracle
