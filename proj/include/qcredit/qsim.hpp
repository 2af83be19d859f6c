#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace qcredit {

using cdouble = std::complex<double>;

// Dense n-qubit register, 2^n complex amplitudes.
// Bit order is little-endian: qubit q corresponds to bit q of the basis index.
struct Statevector {
    int n_qubits = 0;
    std::vector<cdouble> amps;

    std::size_t size() const { return amps.size(); }
};

enum class GateKind { RX, RY, RZ, ROT, CNOT };

// A single circuit operation. RX/RY/RZ carry one angle, ROT carries the three
// Euler angles (phi, theta, omega) of Rz(omega)*Ry(theta)*Rz(phi), CNOT
// carries none and a control index.
struct GateOp {
    GateKind kind;
    int target = 0;
    int control = -1;       // CNOT only
    double angles[3] = {0.0, 0.0, 0.0};

    int angle_count() const {
        switch (kind) {
            case GateKind::ROT: return 3;
            case GateKind::CNOT: return 0;
            default: return 1;
        }
    }

    static GateOp rx(int target, double theta) { return {GateKind::RX, target, -1, {theta, 0, 0}}; }
    static GateOp ry(int target, double theta) { return {GateKind::RY, target, -1, {theta, 0, 0}}; }
    static GateOp rz(int target, double theta) { return {GateKind::RZ, target, -1, {theta, 0, 0}}; }
    static GateOp rot(int target, double phi, double theta, double omega) {
        return {GateKind::ROT, target, -1, {phi, theta, omega}};
    }
    static GateOp cnot(int control, int target) { return {GateKind::CNOT, target, control, {0, 0, 0}}; }
};

inline constexpr int kMaxQubits = 20;

Statevector new_zero_state(int n_qubits);

// 2x2 unitary of a single-qubit gate (row-major). ROT folds its three
// rotations into one matrix so application stays a single pass.
void gate_matrix(const GateOp& gate, cdouble out[4]);

// In-place application; O(2^n) stride iteration, never materializes the full
// unitary.
void apply_gate(Statevector& state, const GateOp& gate);

void apply_circuit(Statevector& state, const std::vector<GateOp>& gates);

double expectation_z(const Statevector& state, int qubit);

// <Z_q> for every qubit in one pass over the amplitudes.
std::vector<double> expectation_z_all(const Statevector& state);

double squared_norm(const Statevector& state);

}  // namespace qcredit
