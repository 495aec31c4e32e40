#pragma once

#include <array>
#include <complex>
#include <vector>

namespace hqnn {

using cd = std::complex<double>;

// Row-major 2x2 single-qubit gate {m00, m01, m10, m11}.
using Gate1Q = std::array<cd, 4>;

// Full complex amplitude vector of an n-qubit register.
// Convention: qubit 0 is the top wire and the most significant bit of the
// basis index, so |1000> on 4 qubits sits at index 8.
struct StateVector {
    int n_qubits = 0;
    std::vector<cd> amps;

    std::size_t dim() const { return amps.size(); }
    double norm_sq() const;
};

struct BlochAngles {
    double theta;  // polar angle in [0, pi]
    double phi;    // azimuth in [0, 2*pi); 0 at the poles
};

// Dense 2^n x 2^n matrix, row-major. Used for cross-checking the strided
// gate kernels, never on the hot path.
struct Unitary {
    int dim = 0;
    std::vector<cd> m;

    cd& at(int r, int c) { return m[static_cast<std::size_t>(r) * dim + c]; }
    const cd& at(int r, int c) const { return m[static_cast<std::size_t>(r) * dim + c]; }
};

StateVector zero_state(int n_qubits);

Gate1Q hadamard();
Gate1Q identity_gate();
Gate1Q ry(double theta);

// Applies a 2x2 gate to one wire, strided over amplitude pairs in place.
void apply_1q(StateVector& state, const Gate1Q& gate, int qubit);
void apply_cnot(StateVector& state, int control, int target);

std::vector<double> probabilities(const StateVector& state);

// Single-qubit state -> (theta, phi) up to global phase.
BlochAngles bloch_angles(const StateVector& state);

// Dense-matrix helpers.
Unitary identity_unitary(int dim);
Unitary matmul(const Unitary& a, const Unitary& b);
Unitary kron(const Unitary& a, const Unitary& b);
Unitary dense_1q(int n_qubits, const Gate1Q& gate, int qubit);
Unitary dense_cnot(int n_qubits, int control, int target);
std::vector<cd> apply_unitary(const Unitary& u, const std::vector<cd>& v);
double unitarity_error(const Unitary& u);  // max |(U†U - I)_ij|

}  // namespace hqnn
