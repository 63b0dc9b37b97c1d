#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "qmem/impurity.hpp"
#include "qmem/point_interaction.hpp"
#include "qmem/spectrum_optimizer.hpp"
#include "qmem/time_oracle.hpp"
#include "qmem/transfer_solver.hpp"

namespace {

using namespace qmem;

const Spinor kDiag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};

DiscretePotential random_chain(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Weak couplings keep long chains well conditioned; strong random chains localize.
  std::uniform_real_distribution<double> q(-0.05, 0.05);
  std::vector<Site> sites;
  for (std::size_t j = 0; j < n; ++j) sites.push_back({0.37 * static_cast<double>(j), {q(rng), q(rng), q(rng)}});
  return DiscretePotential(std::move(sites));
}

void BM_SolveFrequency(benchmark::State& state) {
  const DiscretePotential pot = random_chain(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_frequency(pot, kDiag, Spinor{}, 1.3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveFrequency)->RangeMultiplier(4)->Range(1, 1024)->Complexity(benchmark::oN);

void BM_ImpurityPipeline(benchmark::State& state) {
  const DiscretePotential pot = random_chain(static_cast<std::size_t>(state.range(0)), 2);
  const IncomingState in(Spectrum::rectangular(1.0, 1.5), kDiag, Parity::Even);
  for (auto _ : state) {
    benchmark::DoNotOptimize(impurity_pipeline(pot, in).imp);
  }
}
BENCHMARK(BM_ImpurityPipeline)->Arg(1)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RectangularFormula(benchmark::State& state) {
  const PointInteraction pi(2.0, ImaginaryQuaternion{0.0, 0.0, 1.0}, Parity::Even);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rectangular_impurity(pi, 1.0, 1.2));
  }
}
BENCHMARK(BM_RectangularFormula);

void BM_CrankNicolsonStep(benchmark::State& state) {
  const UniformGrid grid = UniformGrid::symmetric(300.0, static_cast<std::size_t>(state.range(0)));
  const DiscretePotential pot({Site{0.0, {0.0, 0.0, 1.0}}});
  const CrankNicolson cn(grid, pot, std::nullopt, 0.05);
  PacketSpec packet;
  GridField field = synthesize_packet(grid, packet);
  for (auto _ : state) {
    cn.step(field);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(2049)->Arg(8193)->Arg(32769)->Complexity(benchmark::oN);

void BM_BuildModelAndMinimize(benchmark::State& state) {
  const DiscretePotential pot = random_chain(4, 3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 0.5 + 2.5 * static_cast<double>(i) / static_cast<double>(n - 1);
  for (auto _ : state) {
    const QuadraticModel model = build_model(pot, kDiag, grid);
    benchmark::DoNotOptimize(minimize(model, std::vector<double>(n, 1.0)).imp);
  }
}
BENCHMARK(BM_BuildModelAndMinimize)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
