// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include <random>

#include "sphereframe/constructions.hpp"
#include "sphereframe/expansion.hpp"
#include "sphereframe/frames.hpp"
#include "sphereframe/harmonics.hpp"

using namespace sphereframe;
namespace sc = sphereframe::constructions;

namespace {

const frames::FrameSystem& system_d4() {
  static const auto sys =
      frames::make_system(sc::wavelet_spec(4, 4, 2, sc::Window::kappa2), quadrature::GridVariant::steerable_so_d2);
  return sys;
}

std::vector<SphericalPoint> random_points(int d, std::size_t count) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<SphericalPoint> pts;
  for (std::size_t i = 0; i < count; ++i) {
    Eigen::VectorXd x(d);
    for (int a = 0; a < d; ++a) x[a] = g(rng);
    pts.push_back(harmonics::to_spherical(x / x.norm()));
  }
  return pts;
}

void BM_analysis(benchmark::State& state) {
  const auto& sys = system_d4();
  const auto f = Signal::random(4, 4, 1);
  const auto last = sys.grids.size() - 1;
  for (auto _ : state) benchmark::DoNotOptimize(frames::analysis(sys, f, last));
}

void BM_analysis_reference(benchmark::State& state) {
  const auto& sys = system_d4();
  const auto f = Signal::random(4, 4, 1);
  const auto last = sys.grids.size() - 1;
  for (auto _ : state) benchmark::DoNotOptimize(frames::analysis_reference(sys, f, last));
}

void BM_synthesis(benchmark::State& state) {
  const auto& sys = system_d4();
  const auto dual = frames::canonical_dual(sys.spec);
  const auto c = frames::analysis(sys, Signal::random(4, 4, 2));
  for (auto _ : state) benchmark::DoNotOptimize(frames::synthesis(sys, dual, c, 4));
}

void BM_synthesis_reference(benchmark::State& state) {
  const auto& sys = system_d4();
  const auto dual = frames::canonical_dual(sys.spec);
  const auto c = frames::analysis(sys, Signal::random(4, 4, 2));
  for (auto _ : state) benchmark::DoNotOptimize(frames::synthesis_reference(sys, dual, c, 4));
}

void BM_eval_expansion(benchmark::State& state) {
  const auto f = Signal::random(4, static_cast<int>(state.range(0)), 3);
  const auto pts = random_points(4, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(harmonics::eval_expansion(4, f.coeffs, pts));
}

void BM_eval_expansion_reference(benchmark::State& state) {
  const auto f = Signal::random(4, static_cast<int>(state.range(0)), 3);
  const auto pts = random_points(4, 2000);
  for (auto _ : state) {
    for (const auto& p : pts) benchmark::DoNotOptimize(harmonics::eval_expansion_reference(f.coeffs, p));
  }
}

}  // namespace

BENCHMARK(BM_analysis)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_analysis_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesis)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_synthesis_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval_expansion)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eval_expansion_reference)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
