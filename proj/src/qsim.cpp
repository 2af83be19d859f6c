#include "qcredit/qsim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcredit {

Statevector new_zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("new_zero_state: n_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
    Statevector state;
    state.n_qubits = n_qubits;
    state.amps.assign(std::size_t{1} << n_qubits, cdouble{0.0, 0.0});
    state.amps[0] = cdouble{1.0, 0.0};
    return state;
}

namespace {

void check_angles(const GateOp& gate) {
    for (int i = 0; i < gate.angle_count(); ++i) {
        if (std::isnan(gate.angles[i])) {
            throw std::invalid_argument("apply_gate: NaN gate angle");
        }
    }
}

void check_target(const Statevector& state, int qubit, const char* what) {
    if (qubit < 0 || qubit >= state.n_qubits) {
        throw std::invalid_argument(std::string(what) + ": qubit index " + std::to_string(qubit) +
                                    " out of range for " + std::to_string(state.n_qubits) +
                                    " qubits");
    }
}

// new0 = u00*a0 + u01*a1 ; new1 = u10*a0 + u11*a1 over all (target=0, target=1)
// pairs. The kernels work on the raw double array in explicit real arithmetic;
// that keeps the inner loops auto-vectorizable, which plain std::complex
// operations are not.
void apply_1q(Statevector& state, int target, const cdouble u[4]) {
    const std::size_t n = state.size();
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    const double u00r = u[0].real(), u00i = u[0].imag();
    const double u01r = u[1].real(), u01i = u[1].imag();
    const double u10r = u[2].real(), u10i = u[2].imag();
    const double u11r = u[3].real(), u11i = u[3].imag();
    auto* amps = reinterpret_cast<double*>(state.amps.data());
    for (std::size_t base = 0; base < n; base += block) {
        double* p0 = amps + 2 * base;
        double* p1 = p0 + 2 * step;
        for (std::size_t off = 0; off < step; ++off) {
            const double a0r = p0[2 * off], a0i = p0[2 * off + 1];
            const double a1r = p1[2 * off], a1i = p1[2 * off + 1];
            p0[2 * off] = u00r * a0r - u00i * a0i + u01r * a1r - u01i * a1i;
            p0[2 * off + 1] = u00r * a0i + u00i * a0r + u01r * a1i + u01i * a1r;
            p1[2 * off] = u10r * a0r - u10i * a0i + u11r * a1r - u11i * a1i;
            p1[2 * off + 1] = u10r * a0i + u10i * a0r + u11r * a1i + u11i * a1r;
        }
    }
}

// RX has a real diagonal and a purely imaginary off-diagonal: new0 = c*a0 - i*s*a1
void apply_rx(Statevector& state, int target, double c, double s) {
    const std::size_t n = state.size();
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    auto* amps = reinterpret_cast<double*>(state.amps.data());
    for (std::size_t base = 0; base < n; base += block) {
        double* p0 = amps + 2 * base;
        double* p1 = p0 + 2 * step;
        for (std::size_t off = 0; off < step; ++off) {
            const double a0r = p0[2 * off], a0i = p0[2 * off + 1];
            const double a1r = p1[2 * off], a1i = p1[2 * off + 1];
            p0[2 * off] = c * a0r + s * a1i;
            p0[2 * off + 1] = c * a0i - s * a1r;
            p1[2 * off] = c * a1r + s * a0i;
            p1[2 * off + 1] = c * a1i - s * a0r;
        }
    }
}

// RY is real, so it acts identically on real and imaginary parts
void apply_ry(Statevector& state, int target, double c, double s) {
    const std::size_t n = state.size();
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    auto* amps = reinterpret_cast<double*>(state.amps.data());
    for (std::size_t base = 0; base < n; base += block) {
        double* p0 = amps + 2 * base;
        double* p1 = p0 + 2 * step;
        for (std::size_t j = 0; j < 2 * step; ++j) {
            const double a0 = p0[j];
            const double a1 = p1[j];
            p0[j] = c * a0 - s * a1;
            p1[j] = s * a0 + c * a1;
        }
    }
}

// diagonal gates touch each amplitude once
void apply_diag(Statevector& state, int target, cdouble d0, cdouble d1) {
    const std::size_t n = state.size();
    const std::size_t step = std::size_t{1} << target;
    const std::size_t block = step << 1;
    const double d0r = d0.real(), d0i = d0.imag();
    const double d1r = d1.real(), d1i = d1.imag();
    auto* amps = reinterpret_cast<double*>(state.amps.data());
    for (std::size_t base = 0; base < n; base += block) {
        double* p0 = amps + 2 * base;
        double* p1 = p0 + 2 * step;
        for (std::size_t off = 0; off < step; ++off) {
            const double a0r = p0[2 * off], a0i = p0[2 * off + 1];
            const double a1r = p1[2 * off], a1i = p1[2 * off + 1];
            p0[2 * off] = d0r * a0r - d0i * a0i;
            p0[2 * off + 1] = d0r * a0i + d0i * a0r;
            p1[2 * off] = d1r * a1r - d1i * a1i;
            p1[2 * off + 1] = d1r * a1i + d1i * a1r;
        }
    }
}

void apply_cnot(Statevector& state, int control, int target) {
    const std::size_t n = state.size();
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    cdouble* amps = state.amps.data();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amps[i], amps[i | tmask]);
        }
    }
}

}  // namespace

void gate_matrix(const GateOp& gate, cdouble out[4]) {
    const double c = std::cos(gate.angles[0] / 2.0);
    const double s = std::sin(gate.angles[0] / 2.0);
    switch (gate.kind) {
        case GateKind::RX:
            out[0] = {c, 0};
            out[1] = {0, -s};
            out[2] = {0, -s};
            out[3] = {c, 0};
            return;
        case GateKind::RY:
            out[0] = {c, 0};
            out[1] = {-s, 0};
            out[2] = {s, 0};
            out[3] = {c, 0};
            return;
        case GateKind::RZ:
            out[0] = {c, -s};
            out[1] = {0, 0};
            out[2] = {0, 0};
            out[3] = {c, s};
            return;
        case GateKind::ROT: {
            // Rz(omega) * Ry(theta) * Rz(phi)
            const double phi = gate.angles[0];
            const double theta = gate.angles[1];
            const double omega = gate.angles[2];
            const double ct = std::cos(theta / 2.0);
            const double st = std::sin(theta / 2.0);
            const cdouble em = std::polar(1.0, -(phi + omega) / 2.0);
            const cdouble ep = std::polar(1.0, (phi + omega) / 2.0);
            const cdouble dm = std::polar(1.0, (phi - omega) / 2.0);
            const cdouble dp = std::polar(1.0, -(phi - omega) / 2.0);
            out[0] = em * ct;
            out[1] = -dm * st;
            out[2] = dp * st;
            out[3] = ep * ct;
            return;
        }
        case GateKind::CNOT:
            throw std::invalid_argument("gate_matrix: CNOT has no 2x2 matrix");
    }
    throw std::invalid_argument("gate_matrix: unknown gate kind");
}

void apply_gate(Statevector& state, const GateOp& gate) {
    check_angles(gate);
    check_target(state, gate.target, "apply_gate");
    switch (gate.kind) {
        case GateKind::CNOT:
            check_target(state, gate.control, "apply_gate");
            if (gate.control == gate.target) {
                throw std::invalid_argument("apply_gate: CNOT control equals target");
            }
            apply_cnot(state, gate.control, gate.target);
            return;
        case GateKind::RX:
            apply_rx(state, gate.target, std::cos(gate.angles[0] / 2.0),
                     std::sin(gate.angles[0] / 2.0));
            return;
        case GateKind::RY:
            apply_ry(state, gate.target, std::cos(gate.angles[0] / 2.0),
                     std::sin(gate.angles[0] / 2.0));
            return;
        case GateKind::RZ: {
            const double c = std::cos(gate.angles[0] / 2.0);
            const double s = std::sin(gate.angles[0] / 2.0);
            apply_diag(state, gate.target, {c, -s}, {c, s});
            return;
        }
        case GateKind::ROT: {
            cdouble u[4];
            gate_matrix(gate, u);
            apply_1q(state, gate.target, u);
            return;
        }
    }
    throw std::invalid_argument("apply_gate: unknown gate kind");
}

void apply_circuit(Statevector& state, const std::vector<GateOp>& gates) {
    for (const auto& gate : gates) apply_gate(state, gate);
}

double expectation_z(const Statevector& state, int qubit) {
    check_target(state, qubit, "expectation_z");
    const std::size_t mask = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double p = std::norm(state.amps[i]);
        acc += (i & mask) ? -p : p;
    }
    return acc;
}

std::vector<double> expectation_z_all(const Statevector& state) {
    std::vector<double> acc(static_cast<std::size_t>(state.n_qubits), 0.0);
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double p = std::norm(state.amps[i]);
        for (int q = 0; q < state.n_qubits; ++q) {
            acc[static_cast<std::size_t>(q)] += (i >> q) & 1 ? -p : p;
        }
    }
    return acc;
}

double squared_norm(const Statevector& state) {
    double acc = 0.0;
    for (const auto& a : state.amps) acc += std::norm(a);
    return acc;
}

}  // namespace qcredit
