#include "hqnn/circuits.hpp"

#include <cmath>
#include <stdexcept>

namespace hqnn {

namespace {

double slot_value(const GateOp& op, std::span<const double> data, std::span<const double> weights,
                  int n_data) {
    int s = op.param_slot;
    return s < n_data ? data[s] : weights[s - n_data];
}

void check_params(const CircuitSpec& spec, std::span<const double> data,
                  std::span<const double> weights) {
    if (static_cast<int>(data.size()) != spec.n_data_params)
        throw std::invalid_argument("run_circuit: data parameter count mismatch");
    if (static_cast<int>(weights.size()) != spec.n_weight_params)
        throw std::invalid_argument("run_circuit: weight parameter count mismatch");
}

}  // namespace

void validate_spec(const CircuitSpec& spec) {
    std::vector<bool> seen(spec.n_params(), false);
    for (const GateOp& op : spec.ops) {
        if (op.qubit < 0 || op.qubit >= spec.n_qubits)
            throw std::invalid_argument("validate_spec: qubit out of range");
        switch (op.kind) {
            case GateKind::Cnot:
                if (op.control < 0 || op.control >= spec.n_qubits || op.control == op.qubit)
                    throw std::invalid_argument("validate_spec: bad CNOT wiring");
                if (op.param_slot != -1)
                    throw std::invalid_argument("validate_spec: CNOT carries a param slot");
                break;
            case GateKind::RyData:
            case GateKind::RyWeight:
                if (op.param_slot < 0 || op.param_slot >= spec.n_params())
                    throw std::invalid_argument("validate_spec: param slot out of range");
                if (op.control != -1)
                    throw std::invalid_argument("validate_spec: Ry carries a control");
                seen[op.param_slot] = true;
                break;
            case GateKind::Hadamard:
                if (op.control != -1 || op.param_slot != -1)
                    throw std::invalid_argument("validate_spec: Hadamard carries extras");
                break;
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw std::invalid_argument("validate_spec: unreferenced param slot");
}

CircuitSpec build_no_entanglement() {
    CircuitSpec s;
    s.n_qubits = 4;
    s.n_data_params = 4;
    s.n_weight_params = 0;
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::Hadamard, q});
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::RyData, q, -1, q});
    return s;
}

CircuitSpec build_bellman() {
    CircuitSpec s;
    s.n_qubits = 4;
    s.n_data_params = 4;
    s.n_weight_params = 0;
    s.ops.push_back({GateKind::Hadamard, 0});
    s.ops.push_back({GateKind::Cnot, 1, 0});
    s.ops.push_back({GateKind::Cnot, 2, 1});
    s.ops.push_back({GateKind::Cnot, 3, 2});
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::RyData, q, -1, q});
    // reverse chain, top-wire pair last
    s.ops.push_back({GateKind::Cnot, 3, 2});
    s.ops.push_back({GateKind::Cnot, 2, 1});
    s.ops.push_back({GateKind::Cnot, 1, 0});
    return s;
}

CircuitSpec build_real_amplitudes() {
    CircuitSpec s;
    s.n_qubits = 4;
    s.n_data_params = 4;
    s.n_weight_params = 4;
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::Hadamard, q});
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::RyData, q, -1, q});
    s.ops.push_back({GateKind::Cnot, 1, 0});
    s.ops.push_back({GateKind::Cnot, 2, 0});
    s.ops.push_back({GateKind::Cnot, 3, 0});
    s.ops.push_back({GateKind::Cnot, 2, 1});
    s.ops.push_back({GateKind::Cnot, 3, 1});
    s.ops.push_back({GateKind::Cnot, 3, 2});
    for (int q = 0; q < 4; ++q) s.ops.push_back({GateKind::RyWeight, q, -1, 4 + q});
    return s;
}

CircuitSpec circuit_by_name(const std::string& name) {
    if (name == "no_entanglement") return build_no_entanglement();
    if (name == "bellman") return build_bellman();
    if (name == "real_amplitudes") return build_real_amplitudes();
    throw std::invalid_argument("unknown circuit: " + name);
}

StateVector run_circuit_state(const CircuitSpec& spec, std::span<const double> data_params,
                              std::span<const double> weight_params) {
    check_params(spec, data_params, weight_params);
    StateVector state = zero_state(spec.n_qubits);
    for (const GateOp& op : spec.ops) {
        switch (op.kind) {
            case GateKind::Hadamard:
                apply_1q(state, hadamard(), op.qubit);
                break;
            case GateKind::RyData:
            case GateKind::RyWeight:
                apply_1q(state, ry(slot_value(op, data_params, weight_params, spec.n_data_params)),
                         op.qubit);
                break;
            case GateKind::Cnot:
                apply_cnot(state, op.control, op.qubit);
                break;
        }
    }
    return state;
}

std::vector<double> run_circuit(const CircuitSpec& spec, std::span<const double> data_params,
                                std::span<const double> weight_params) {
    return probabilities(run_circuit_state(spec, data_params, weight_params));
}

std::vector<std::vector<double>> param_shift_jacobian(const CircuitSpec& spec,
                                                      std::span<const double> data_params,
                                                      std::span<const double> weight_params) {
    check_params(spec, data_params, weight_params);
    const int n_params = spec.n_params();
    std::vector<double> theta(data_params.begin(), data_params.end());
    theta.insert(theta.end(), weight_params.begin(), weight_params.end());

    std::vector<std::vector<double>> jac(n_params);
    const double shift = M_PI / 2.0;
    for (int j = 0; j < n_params; ++j) {
        std::vector<double> plus = theta, minus = theta;
        plus[j] += shift;
        minus[j] -= shift;
        auto pp = run_circuit(spec, std::span(plus).first(spec.n_data_params),
                              std::span(plus).subspan(spec.n_data_params));
        auto pm = run_circuit(spec, std::span(minus).first(spec.n_data_params),
                              std::span(minus).subspan(spec.n_data_params));
        jac[j].resize(pp.size());
        for (std::size_t k = 0; k < pp.size(); ++k) jac[j][k] = 0.5 * (pp[k] - pm[k]);
    }
    return jac;
}

Unitary circuit_unitary(const CircuitSpec& spec, std::span<const double> data_params,
                        std::span<const double> weight_params) {
    if (spec.n_qubits > 10) throw std::length_error("circuit_unitary: > 10 qubits");
    check_params(spec, data_params, weight_params);
    Unitary u = identity_unitary(1 << spec.n_qubits);
    for (const GateOp& op : spec.ops) {
        Unitary g;
        switch (op.kind) {
            case GateKind::Hadamard:
                g = dense_1q(spec.n_qubits, hadamard(), op.qubit);
                break;
            case GateKind::RyData:
            case GateKind::RyWeight:
                g = dense_1q(spec.n_qubits,
                             ry(slot_value(op, data_params, weight_params, spec.n_data_params)),
                             op.qubit);
                break;
            case GateKind::Cnot:
                g = dense_cnot(spec.n_qubits, op.control, op.qubit);
                break;
        }
        u = matmul(g, u);
    }
    return u;
}

}  // namespace hqnn
