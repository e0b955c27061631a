#include "orbitfix/boussinesq.hpp"
#include "orbitfix/nbody.hpp"
#include "orbitfix/numlin.hpp"
#include "orbitfix/solvers.hpp"

#include <benchmark/benchmark.h>

using namespace orbitfix;

namespace {

void BM_SpectralSecondDerivative(benchmark::State& state) {
  const Index n = state.range(0);
  const SpectralGrid grid(n, 50.0);
  const Vector v = exact_profile(0.9, n, 50.0).wave.eta;
  for (auto _ : state) benchmark::DoNotOptimize(grid.derivative(v, 2));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SpectralSecondDerivative)->RangeMultiplier(2)->Range(256, 4096);

void BM_BsResidual(benchmark::State& state) {
  const Index n = state.range(0);
  const ProblemSpec p = build_bs_problem(BSParams::closed_form(0.9, n, 50.0));
  const Vector x = exact_profile(0.9, n, 50.0).wave.stacked();
  for (auto _ : state) benchmark::DoNotOptimize(p.residual(x));
}
BENCHMARK(BM_BsResidual)->Arg(1024)->Arg(4096);

// Newton correction system at a perturbed wave: J dx = -F.
struct BsLinearSystem {
  ProblemSpec p;
  Vector x, rhs;
  explicit BsLinearSystem(Index n) : p(build_bs_problem(BSParams::closed_form(0.9, n, 50.0))) {
    const ExactProfile prof = exact_profile(0.9, n, 50.0);
    x = gauss_perturbation(prof, SpectralGrid(n, 50.0), 0.05).stacked();
    rhs = -p.residual(x);
  }
};

void BM_Pcg(benchmark::State& state) {
  const BsLinearSystem sys(state.range(0));
  const LinearOperator a = sys.p.jacobian(sys.x);
  const LinearOperator m = sys.p.preconditioner(1.0);
  KrylovOptions opts;
  opts.check_symmetry = false;
  int its = 0;
  for (auto _ : state) {
    const auto r = pcg(a, sys.rhs, m, opts);
    its = r.stats.iterations;
    benchmark::DoNotOptimize(r.x);
  }
  state.counters["krylov_its"] = its;
}
BENCHMARK(BM_Pcg)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Minres(benchmark::State& state) {
  const BsLinearSystem sys(state.range(0));
  const LinearOperator a = sys.p.jacobian(sys.x);
  const LinearOperator m = sys.p.preconditioner(1.0);
  KrylovOptions opts;
  opts.check_symmetry = false;
  opts.max_iterations = 2000;
  const bool precond = state.range(1) != 0;
  int its = 0;
  for (auto _ : state) {
    const auto r = minres(a, sys.rhs, opts, precond ? &m : nullptr);
    its = r.stats.iterations;
    benchmark::DoNotOptimize(r.x);
  }
  state.counters["krylov_its"] = its;
}
BENCHMARK(BM_Minres)->Args({1024, 0})->Args({1024, 1})->Unit(benchmark::kMillisecond);

void BM_NewtonStep(benchmark::State& state) {
  const BsLinearSystem sys(state.range(0));
  SolverConfig cfg;
  cfg.max_outer = 1;
  cfg.tol_residual = 1e-300;
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(sys.p, sys.x, cfg));
}
BENCHMARK(BM_NewtonStep)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_NBodyPetviashvili(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ProblemSpec p = build_nbody(NBodyConfig::unit_bodies(n, 10.0));
  const Vector qs = polygon_solution(n);
  const Vector x0 = qs + 0.05 * ones_perturbation(qs.size());
  SolverConfig cfg;
  cfg.tol_residual = 1e-10;
  for (auto _ : state) benchmark::DoNotOptimize(petviashvili_solve(p, x0, cfg));
}
BENCHMARK(BM_NBodyPetviashvili)->Arg(2)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
