#include <benchmark/benchmark.h>

#include "igabem/assembly.hpp"
#include "igabem/h2.hpp"
#include "igabem/shapes.hpp"

using namespace igabem;

namespace {

std::shared_ptr<const Geometry> sphere() {
  static auto g = std::make_shared<Geometry>(make_sphere());
  return g;
}

void bm_spline_eval(benchmark::State& state) {
  const auto kv = make_uniform_knots(static_cast<int>(state.range(0)), 5, 1);
  Eigen::VectorXd vals;
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 1) x = 0;
    benchmark::DoNotOptimize(eval_basis(kv, x, vals));
  }
}
BENCHMARK(bm_spline_eval)->Arg(1)->Arg(3)->Arg(5);

void bm_dense_assembly(benchmark::State& state) {
  Discretization disc(sphere(), Pde::laplace(), 1, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_dense(disc));
}
BENCHMARK(bm_dense_assembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_h2_assembly(benchmark::State& state) {
  Discretization disc(sphere(), Pde::laplace(), 1, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    H2Matrix<double> h(disc);
    benchmark::DoNotOptimize(h.storage_report());
  }
}
BENCHMARK(bm_h2_assembly)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void bm_h2_matvec(benchmark::State& state) {
  Discretization disc(sphere(), Pde::laplace(), 1, 1, static_cast<int>(state.range(0)));
  H2Matrix<double> h(disc);
  const Eigen::VectorXd x = Eigen::VectorXd::Random(disc.dof_count());
  for (auto _ : state) benchmark::DoNotOptimize(h.apply(x));
}
BENCHMARK(bm_h2_matvec)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
