#include <benchmark/benchmark.h>

#include <random>

#include "k3c/lattice.hpp"
#include "k3c/mesh.hpp"
#include "k3c/metric_space.hpp"
#include "k3c/period_domain.hpp"
#include "k3c/weierstrass.hpp"

using namespace k3c;

namespace {

WeierstrassFamily random_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(-999, 999);
  auto coeffs = [&](std::size_t n) {
    std::vector<GaussRational> c(n);
    for (auto& x : c) x = GaussRational(Rational(u(rng), 1000), Rational(u(rng), 1000));
    return ExactPolynomial(c);
  };
  return WeierstrassFamily(coeffs(9), coeffs(13));
}

void BM_PolarizedLattice(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(signature(build_polarized_lattice(static_cast<int>(state.range(0))).lattice));
}
BENCHMARK(BM_PolarizedLattice)->Arg(1)->Arg(10);

void BM_IsotropicQuotient(benchmark::State& state) {
  Lattice k3 = build_k3_lattice();
  IntVector e(22, 0);
  e[2] = 1;
  for (auto _ : state) benchmark::DoNotOptimize(quotient_by_isotropic(k3, e).quotient().rank());
}
BENCHMARK(BM_IsotropicQuotient);

void BM_MonodromyLog(benchmark::State& state) {
  Lattice k3 = build_k3_lattice();
  IntMatrix t = IntMatrix::identity(22);
  // Eichler transvection with e = U1.e, v = U2.e + U2.f.
  t(2, 1) = 1;
  t(3, 1) = 1;
  t(0, 2) = -1;
  t(0, 3) = -1;
  t(0, 1) = -1;
  for (auto _ : state) benchmark::DoNotOptimize(monodromy_log(t, k3.gram()).unipotency_index);
}
BENCHMARK(BM_MonodromyLog);

void BM_FiberPeriods(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<std::pair<Complex, Complex>> ab(256);
  for (auto& [a, b] : ab) a = {n(rng), n(rng)}, b = {n(rng), n(rng)};
  std::size_t i = 0;
  for (auto _ : state) {
    auto const& [a, b] = ab[i++ % ab.size()];
    benchmark::DoNotOptimize(fiber_periods(a, b).tau);
  }
}
BENCHMARK(BM_FiberPeriods);

void BM_SingularFibers(benchmark::State& state) {
  WeierstrassFamily f = random_family(2);
  for (auto _ : state) benchmark::DoNotOptimize(singular_fibers(f).size());
}
BENCHMARK(BM_SingularFibers)->Unit(benchmark::kMillisecond);

void BM_Mesh(benchmark::State& state) {
  WeierstrassFamily f = random_family(3);
  MeshOptions o;
  o.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mesh_metric(f, o).raw_diameter);
}
BENCHMARK(BM_Mesh)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_GhUpper(benchmark::State& state) {
  FiniteMetricSpace a = flat_torus_space(FlatTorus(Eigen::MatrixXd::Identity(2, 2)), 8);
  FiniteMetricSpace b = segment_space(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gh_upper(a, b, {50, 0}));
}
BENCHMARK(BM_GhUpper)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TorusQuotient(benchmark::State& state) {
  FlatTorus t(Eigen::MatrixXd::Identity(4, 4));
  int const s = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(quotient_by_involution(flat_torus_space(t, s), negation_permutation(4, s)).size());
}
BENCHMARK(BM_TorusQuotient)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
