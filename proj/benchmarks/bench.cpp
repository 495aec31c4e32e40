#include <benchmark/benchmark.h>

#include <vector>

#include "hqnn/circuits.hpp"
#include "hqnn/neural.hpp"
#include "hqnn/rng.hpp"

using namespace hqnn;

static void BM_Apply1Q(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    StateVector s = zero_state(n);
    Gate1Q h = hadamard();
    for (auto _ : state) {
        for (int q = 0; q < n; ++q) apply_1q(s, h, q);
        benchmark::DoNotOptimize(s.amps.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Apply1Q)->Arg(4)->Arg(8)->Arg(12);

static void BM_RunCircuit(benchmark::State& state) {
    CircuitSpec spec = build_real_amplitudes();
    std::vector<double> data = {0.1, 0.2, 0.3, 0.4};
    std::vector<double> weights = {0.5, 0.6, 0.7, 0.8};
    for (auto _ : state) {
        auto probs = run_circuit(spec, data, weights);
        benchmark::DoNotOptimize(probs.data());
    }
}
BENCHMARK(BM_RunCircuit);

static void BM_ParamShiftJacobian(benchmark::State& state) {
    CircuitSpec spec = build_real_amplitudes();
    std::vector<double> data = {0.1, 0.2, 0.3, 0.4};
    std::vector<double> weights = {0.5, 0.6, 0.7, 0.8};
    for (auto _ : state) {
        auto jac = param_shift_jacobian(spec, data, weights);
        benchmark::DoNotOptimize(jac.data());
    }
}
BENCHMARK(BM_ParamShiftJacobian);

static void BM_ConvForward(benchmark::State& state) {
    int size = static_cast<int>(state.range(0));
    Rng rng(1);
    Conv2d conv(3, 6, 5, 1, rng);
    Tensor img({3, size, size});
    for (double& v : img.data) v = rng.uniform();
    for (auto _ : state) {
        Tensor out = conv.forward(img);
        benchmark::DoNotOptimize(out.data.data());
    }
}
BENCHMARK(BM_ConvForward)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
