#include <mildflow/mildflow.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace mildflow;

static void BM_PicardWindowArctan(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const EvolutionSystem sys = EvolutionSystem::general(DiagonalSemigroup::dirichlet_laplacian_0_pi(N),
                                                       InputOperator::identity(N), Nonlinearity::arctan(0.5));
  const SpectralState w(Vector::Constant(static_cast<Eigen::Index>(N), 0.1));
  const InputSignal u = InputSignal::constant(Vector::Constant(static_cast<Eigen::Index>(N), 0.2), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(picard_window(sys, w, u, 0.5, SolverConfig{}));
}
BENCHMARK(BM_PicardWindowArctan)->Arg(16)->Arg(128)->Arg(512);

static void BM_BurgersF(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const BurgersSystem b(N, LocalTerm::sin_arctan(1.0));
  Vector c(static_cast<Eigen::Index>(N));
  for (Eigen::Index n = 0; n < c.size(); ++n) c(n) = 1.0 / double((n + 1) * (n + 1));
  const SpectralState x(c);
  for (auto _ : state) benchmark::DoNotOptimize(b.nonlinearity_F(x));
}
BENCHMARK(BM_BurgersF)->Arg(32)->Arg(128)->Arg(1024);

static void BM_ConvolveBoundary(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(N);
  Vector b(static_cast<Eigen::Index>(N));
  for (Eigen::Index n = 0; n < b.size(); ++n) b(n) = std::sqrt(2.0 / std::numbers::pi) * double(n + 1);
  const InputOperator B = InputOperator::column(b, OperatorClass::smooth_class(0.2));
  std::vector<double> grid;
  std::vector<Vector> vals;
  for (int i = 0; i <= 12; ++i) grid.push_back(i / 12.0);
  for (int i = 0; i < 12; ++i) vals.push_back(Vector::Constant(1, i % 2 ? -1.0 : 1.0));
  const InputSignal u(grid, vals);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(h, B, u, 1.0));
}
BENCHMARK(BM_ConvolveBoundary)->Arg(128)->Arg(1024);

static void BM_MeasureH(benchmark::State& state) {
  const DiagonalSemigroup h = DiagonalSemigroup::dirichlet_laplacian_0_pi(1024);
  Vector b(1024);
  for (Eigen::Index n = 0; n < b.size(); ++n) b(n) = std::sqrt(2.0 / std::numbers::pi) * double(n + 1);
  const InputOperator B = InputOperator::column(b, OperatorClass::smooth_class(0.2));
  for (auto _ : state) benchmark::DoNotOptimize(measure_h(h, B, 1.0 / 64, std::numeric_limits<double>::infinity()));
}
BENCHMARK(BM_MeasureH);
BENCHMARK_MAIN();
