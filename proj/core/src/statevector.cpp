#include "hqnn/statevector.hpp"

#include <cmath>
#include <stdexcept>

namespace hqnn {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Bit position of a wire inside a basis index (qubit 0 = MSB).
inline int bit_shift(int n_qubits, int qubit) { return n_qubits - 1 - qubit; }

}  // namespace

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cd& a : amps) s += std::norm(a);
    return s;
}

StateVector zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 14)
        throw std::length_error("zero_state: n_qubits must be in [1, 14]");
    StateVector s;
    s.n_qubits = n_qubits;
    s.amps.assign(std::size_t{1} << n_qubits, cd(0.0, 0.0));
    s.amps[0] = cd(1.0, 0.0);
    return s;
}

Gate1Q hadamard() {
    return {cd(kInvSqrt2), cd(kInvSqrt2), cd(kInvSqrt2), cd(-kInvSqrt2)};
}

Gate1Q identity_gate() {
    return {cd(1.0), cd(0.0), cd(0.0), cd(1.0)};
}

Gate1Q ry(double theta) {
    if (!std::isfinite(theta)) throw std::domain_error("ry: non-finite angle");
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    return {cd(c), cd(-s), cd(s), cd(c)};
}

void apply_1q(StateVector& state, const Gate1Q& gate, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits)
        throw std::out_of_range("apply_1q: qubit index out of range");
    const std::size_t mask = std::size_t{1} << bit_shift(state.n_qubits, qubit);
    const std::size_t n = state.amps.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i & mask) continue;
        cd a = state.amps[i];
        cd b = state.amps[i | mask];
        state.amps[i] = gate[0] * a + gate[1] * b;
        state.amps[i | mask] = gate[2] * a + gate[3] * b;
    }
}

void apply_cnot(StateVector& state, int control, int target) {
    if (control == target) throw std::invalid_argument("apply_cnot: control == target");
    if (control < 0 || control >= state.n_qubits || target < 0 || target >= state.n_qubits)
        throw std::out_of_range("apply_cnot: qubit index out of range");
    const std::size_t cmask = std::size_t{1} << bit_shift(state.n_qubits, control);
    const std::size_t tmask = std::size_t{1} << bit_shift(state.n_qubits, target);
    const std::size_t n = state.amps.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(state.amps[i], state.amps[i | tmask]);
    }
}

std::vector<double> probabilities(const StateVector& state) {
    std::vector<double> p(state.amps.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state.amps[i]);
    return p;
}

BlochAngles bloch_angles(const StateVector& state) {
    if (state.n_qubits != 1) throw std::invalid_argument("bloch_angles: expects a 1-qubit state");
    const cd a = state.amps[0];
    const cd b = state.amps[1];
    double theta = 2.0 * std::atan2(std::abs(b), std::abs(a));
    // phi is degenerate at the poles; pinned to 0 there.
    double phi = 0.0;
    if (std::abs(a) > 1e-12 && std::abs(b) > 1e-12) {
        phi = std::arg(b) - std::arg(a);
        if (phi < 0.0) phi += 2.0 * M_PI;
        if (phi >= 2.0 * M_PI) phi -= 2.0 * M_PI;
    }
    return {theta, phi};
}

Unitary identity_unitary(int dim) {
    Unitary u;
    u.dim = dim;
    u.m.assign(static_cast<std::size_t>(dim) * dim, cd(0.0));
    for (int i = 0; i < dim; ++i) u.at(i, i) = cd(1.0);
    return u;
}

Unitary matmul(const Unitary& a, const Unitary& b) {
    if (a.dim != b.dim) throw std::invalid_argument("matmul: dimension mismatch");
    Unitary c;
    c.dim = a.dim;
    c.m.assign(a.m.size(), cd(0.0));
    for (int i = 0; i < a.dim; ++i)
        for (int k = 0; k < a.dim; ++k) {
            cd aik = a.at(i, k);
            if (aik == cd(0.0)) continue;
            for (int j = 0; j < a.dim; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Unitary kron(const Unitary& a, const Unitary& b) {
    Unitary c;
    c.dim = a.dim * b.dim;
    c.m.assign(static_cast<std::size_t>(c.dim) * c.dim, cd(0.0));
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
            for (int k = 0; k < b.dim; ++k)
                for (int l = 0; l < b.dim; ++l)
                    c.at(i * b.dim + k, j * b.dim + l) = a.at(i, j) * b.at(k, l);
    return c;
}

Unitary dense_1q(int n_qubits, const Gate1Q& gate, int qubit) {
    Unitary g;
    g.dim = 2;
    g.m = {gate[0], gate[1], gate[2], gate[3]};
    Unitary u = identity_unitary(1);
    for (int q = 0; q < n_qubits; ++q)
        u = kron(u, q == qubit ? g : identity_unitary(2));
    return u;
}

Unitary dense_cnot(int n_qubits, int control, int target) {
    if (control == target) throw std::invalid_argument("dense_cnot: control == target");
    const int dim = 1 << n_qubits;
    Unitary u;
    u.dim = dim;
    u.m.assign(static_cast<std::size_t>(dim) * dim, cd(0.0));
    const int cshift = bit_shift(n_qubits, control);
    const int tshift = bit_shift(n_qubits, target);
    for (int i = 0; i < dim; ++i) {
        int j = (i >> cshift) & 1 ? i ^ (1 << tshift) : i;
        u.at(j, i) = cd(1.0);
    }
    return u;
}

std::vector<cd> apply_unitary(const Unitary& u, const std::vector<cd>& v) {
    if (static_cast<int>(v.size()) != u.dim)
        throw std::invalid_argument("apply_unitary: dimension mismatch");
    std::vector<cd> out(v.size(), cd(0.0));
    for (int i = 0; i < u.dim; ++i)
        for (int j = 0; j < u.dim; ++j) out[i] += u.at(i, j) * v[j];
    return out;
}

double unitarity_error(const Unitary& u) {
    double worst = 0.0;
    for (int i = 0; i < u.dim; ++i)
        for (int j = 0; j < u.dim; ++j) {
            cd s(0.0);
            for (int k = 0; k < u.dim; ++k) s += std::conj(u.at(k, i)) * u.at(k, j);
            if (i == j) s -= cd(1.0);
            worst = std::max(worst, std::abs(s));
        }
    return worst;
}

}  // namespace hqnn
