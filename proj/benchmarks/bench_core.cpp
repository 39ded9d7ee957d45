#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "nsv/manufactured.hpp"
#include "nsv/saddle.hpp"
#include "nsv/state.hpp"

namespace {

std::shared_ptr<const nsv::Mesh> square(int n) {
  return std::make_shared<const nsv::Mesh>(nsv::build_structured(nsv::Box::unit(2), n));
}

void BM_AssembleMass(benchmark::State& st) {
  const nsv::MixedSpace space(square(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(nsv::assemble_mass(space));
  st.counters["dofs"] = static_cast<double>(space.n_vel());
}
BENCHMARK(BM_AssembleMass)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleConvection(benchmark::State& st) {
  const nsv::MixedSpace space(square(static_cast<int>(st.range(0))));
  const Eigen::VectorXd y = nsv::interpolate(space, [](const nsv::Point& x) {
    return nsv::Vec3{std::sin(3.0 * x[1]), std::cos(2.0 * x[0]), 0.0};
  });
  for (auto _ : st)
    benchmark::DoNotOptimize(nsv::assemble_convection(space, y, nsv::ConvectionMode::state_jacobian));
}
BENCHMARK(BM_AssembleConvection)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_SaddleFactorize(benchmark::State& st) {
  const nsv::MixedSpace space(square(static_cast<int>(st.range(0))));
  const nsv::SparseOperator a = nsv::assemble_a_alpha(space, 0.5);
  const nsv::SparseOperator b = nsv::assemble_div(space);
  for (auto _ : st) {
    nsv::SaddlePointSolver solver(space, a, b);
    benchmark::DoNotOptimize(&solver);
  }
}
BENCHMARK(BM_SaddleFactorize)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_StateStep(benchmark::State& st) {
  const nsv::ManufacturedCase c = nsv::build_case("poly-sin", 1.0, 0.5);
  const nsv::MixedSpace space(square(static_cast<int>(st.range(0))));
  const nsv::Discretization disc(nsv::state_problem(c, 1.0), space, nsv::TimeGrid::uniform(1.0, 8));
  const auto loads = disc.control_loads(c.forcing);
  for (auto _ : st)
    benchmark::DoNotOptimize(nsv::newton_step_state(disc, 1, disc.initial_state(), loads[1]));
}
BENCHMARK(BM_StateStep)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
