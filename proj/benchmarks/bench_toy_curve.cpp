// Forward scalar multiplication vs. brute-force discrete log: the asymmetry
// the concealment scheme rests on, visible even at toy scale.
#include <benchmark/benchmark.h>

#include "suci/toy_curve.hpp"

namespace {

// The F89 group is Z/4 x Z/20, so the largest cyclic subgroup has order 20.
suci::toy::ToyPoint find_generator(const suci::toy::ToyCurve& curve) {
    suci::toy::ToyPoint best = suci::toy::ToyPoint::at_infinity();
    std::uint64_t best_order = 1;
    for (const auto& pt : curve.enumerate_points()) {
        std::uint64_t order = curve.order_of(pt);
        if (order > best_order) {
            best = pt;
            best_order = order;
        }
    }
    return best;
}

void BM_ScalarMulForward(benchmark::State& state) {
    auto curve = suci::toy::example_curve_f89();
    auto g = find_generator(curve);
    std::uint64_t k = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(curve.scalar_mul(k, g));
}

void BM_EcdlpBruteForce(benchmark::State& state) {
    auto curve = suci::toy::example_curve_f89();
    auto g = find_generator(curve);
    std::uint64_t k = static_cast<std::uint64_t>(state.range(0));
    auto target = curve.scalar_mul(k, g);
    std::uint64_t order = curve.order_of(g);
    for (auto _ : state)
        benchmark::DoNotOptimize(curve.ecdlp_brute_force(g, target, order));
}

BENCHMARK(BM_ScalarMulForward)->Arg(3)->Arg(11)->Arg(19);
BENCHMARK(BM_EcdlpBruteForce)->Arg(3)->Arg(11)->Arg(19);

} // namespace
