#pragma once

#include <span>
#include <string>
#include <vector>

#include "hqnn/statevector.hpp"

namespace hqnn {

enum class GateKind { Hadamard, RyData, RyWeight, Cnot };

struct GateOp {
    GateKind kind;
    int qubit;
    int control = -1;     // Cnot only
    int param_slot = -1;  // RyData / RyWeight only
};

// A circuit is data: an ordered gate list with parameter slots. Data slots
// are [0, n_data_params), weight slots continue at n_data_params.
struct CircuitSpec {
    int n_qubits = 0;
    std::vector<GateOp> ops;
    int n_data_params = 0;
    int n_weight_params = 0;

    int n_params() const { return n_data_params + n_weight_params; }
};

// Throws std::invalid_argument on malformed specs (unreferenced or
// out-of-range parameter slots, bad wiring).
void validate_spec(const CircuitSpec& spec);

// The three 4-qubit circuits. Identifiers used by config files and the CLI:
// "no_entanglement", "bellman", "real_amplitudes".
CircuitSpec build_no_entanglement();
CircuitSpec build_bellman();
CircuitSpec build_real_amplitudes();
CircuitSpec circuit_by_name(const std::string& name);

// Runs the circuit from the all-|0> state and returns the final state.
StateVector run_circuit_state(const CircuitSpec& spec,
                              std::span<const double> data_params,
                              std::span<const double> weight_params);

// Basis-state measurement probabilities of the final state (length 2^n,
// 16 for the built-in 4-qubit circuits).
std::vector<double> run_circuit(const CircuitSpec& spec,
                                std::span<const double> data_params,
                                std::span<const double> weight_params);

// d(probs)/d(theta_j) for every parameter, via the two-point parameter-shift
// rule with shift pi/2 (exact for Ry gates). Column j of the result is the
// derivative with respect to slot j; data slots first, then weight slots.
std::vector<std::vector<double>> param_shift_jacobian(const CircuitSpec& spec,
                                                      std::span<const double> data_params,
                                                      std::span<const double> weight_params);

// Dense unitary of the whole circuit at the given parameters. Guarded to
// <= 10 qubits.
Unitary circuit_unitary(const CircuitSpec& spec,
                        std::span<const double> data_params,
                        std::span<const double> weight_params);

}  // namespace hqnn
