#include <gtest/gtest.h>

#include <random>

#include "elliptic_oracle.hpp"
#include "k3c/elliptic.hpp"
#include "k3c/error.hpp"
#include "k3c/weierstrass.hpp"

using namespace k3c;

namespace {

ExactPolynomial poly(std::initializer_list<std::pair<std::size_t, int>> terms) {
  ExactPolynomial p;
  for (auto [deg, c] : terms) p = p + ExactPolynomial::monomial(GaussRational(c), deg);
  return p;
}

WeierstrassFamily random_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-999, 999);
  auto coeffs = [&](std::size_t n) {
    std::vector<GaussRational> c(n);
    for (auto& x : c) x = GaussRational(Rational(u(rng), 1000), Rational(u(rng), 1000));
    return ExactPolynomial(c);
  };
  return WeierstrassFamily(coeffs(9), coeffs(13));
}

// (ord A, ord B, ord Δ) with the expected Kodaira type.
struct TableRow {
  int a, b, d;
  char const* name;
  int euler;
};

}  // namespace

TEST(Kodaira, TableLookup) {
  int const inf = kInfiniteOrder;
  TableRow const rows[] = {{0, 0, 1, "I1", 1},   {0, 0, 5, "I5", 5},     {1, 1, 2, "II", 2},     {inf, 1, 2, "II", 2},
                           {1, 2, 3, "III", 3},  {1, inf, 3, "III", 3},  {2, 2, 4, "IV", 4},     {2, 3, 6, "I0*", 6},
                           {3, 3, 6, "I0*", 6},  {2, 3, 8, "I2*", 8},    {3, 4, 8, "IV*", 8},    {3, 5, 9, "III*", 9},
                           {inf, 5, 10, "II*", 10}, {4, 5, 10, "II*", 10}};
  for (auto const& r : rows) {
    KodairaType t = classify_kodaira(r.a, r.b, r.d);
    EXPECT_EQ(t.name(), r.name) << r.a << "," << r.b << "," << r.d;
    EXPECT_EQ(t.euler_number(), r.euler);
  }
  EXPECT_THROW(classify_kodaira(4, 6, 12), Error);
  EXPECT_THROW(classify_kodaira(0, 0, 0), Error);
  EXPECT_THROW(classify_kodaira(1, 0, 2), Error);
}

TEST(Weierstrass, FamilyValidation) {
  EXPECT_THROW(WeierstrassFamily(poly({{9, 1}}), poly({{0, 1}})), Error);
  EXPECT_THROW(WeierstrassFamily(poly({{0, 1}}), poly({{13, 1}})), Error);
  EXPECT_THROW(WeierstrassFamily(ExactPolynomial(), ExactPolynomial()), Error);
  // A = -3 z^2, B = 2 z^3 gives Δ = 4(-27 z^6) + 27 * 4 z^6 = 0.
  EXPECT_THROW(WeierstrassFamily(poly({{2, -3}}), poly({{3, 2}})), Error);
}

TEST(Weierstrass, DiscriminantExamples) {
  DiscriminantInfo d = discriminant(WeierstrassFamily(poly({{0, 1}}), ExactPolynomial()));
  EXPECT_EQ(d.affine, poly({{0, 4}}));
  EXPECT_EQ(d.order_at_infinity, 24);

  DiscriminantInfo e = discriminant(WeierstrassFamily(ExactPolynomial(), poly({{12, 1}, {0, -1}})));
  EXPECT_EQ(e.affine, poly({{24, 27}, {12, -54}, {0, 27}}));
  EXPECT_EQ(e.affine_degree, 24);
  EXPECT_EQ(e.order_at_infinity, 0);

  DiscriminantInfo f = discriminant(WeierstrassFamily(poly({{4, -3}}), poly({{6, 1}, {0, 5}})));
  EXPECT_EQ(f.affine_degree, 12);
  EXPECT_EQ(f.order_at_infinity, 12);
}

TEST(Weierstrass, ChartAtInfinity) {
  WeierstrassFamily f(poly({{8, 2}, {1, 3}}), poly({{12, 5}, {0, 7}}));
  EXPECT_EQ(f.a(Chart::Infinity), poly({{0, 2}, {7, 3}}));
  EXPECT_EQ(f.b(Chart::Infinity), poly({{0, 5}, {12, 7}}));
}

TEST(Weierstrass, DesignedTypeIIAndIII) {
  SingularFiber two = fiber_at(WeierstrassFamily(ExactPolynomial(), poly({{1, 1}})), GaussRational(0));
  EXPECT_EQ(two.ord_a, kInfiniteOrder);
  EXPECT_EQ(two.ord_b, 1);
  EXPECT_EQ(two.ord_delta, 2);
  EXPECT_EQ(two.type.name(), "II");
  EXPECT_EQ(two.euler_number(), 2);

  SingularFiber three = fiber_at(WeierstrassFamily(poly({{1, 1}}), ExactPolynomial()), GaussRational(0));
  EXPECT_EQ(three.ord_a, 1);
  EXPECT_EQ(three.ord_b, kInfiniteOrder);
  EXPECT_EQ(three.ord_delta, 3);
  EXPECT_EQ(three.type.name(), "III");
}

TEST(Weierstrass, DesignedFamiliesSumTo24) {
  // A = 0, B = z^12 - z: twelve affine type II fibers; B(∞) != 0.
  auto twos = singular_fibers(WeierstrassFamily(ExactPolynomial(), poly({{12, 1}, {1, -1}})));
  EXPECT_EQ(twos.size(), 12u);
  EXPECT_EQ(euler_sum(twos), 24);
  for (auto const& s : twos) EXPECT_EQ(s.type.name(), "II");
  for (auto const& s : twos) EXPECT_FALSE(s.at_infinity());

  // A = z^8 - z, B = 0: eight type III fibers.
  auto threes = singular_fibers(WeierstrassFamily(poly({{8, 1}, {1, -1}}), ExactPolynomial()));
  EXPECT_EQ(threes.size(), 8u);
  EXPECT_EQ(euler_sum(threes), 24);
  for (auto const& s : threes) EXPECT_EQ(s.type.name(), "III");
}

TEST(Weierstrass, NonMinimalRejected) {
  // A = 0, B = z: at infinity ord B = 11 and ord A = ∞.
  EXPECT_THROW(singular_fibers(WeierstrassFamily(ExactPolynomial(), poly({{1, 1}}))), Error);
  try {
    singular_fibers(WeierstrassFamily(poly({{4, 1}}), poly({{6, 1}, {12, 1}})));
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), "non_minimal");
  }
}

TEST(Weierstrass, RandomFamiliesSumTo24) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    auto fibers = singular_fibers(random_family(rng));
    EXPECT_EQ(euler_sum(fibers), 24);
    EXPECT_EQ(fibers.size(), 24u);
  }
}

TEST(Weierstrass, MixedFibersAtDesignedPoints) {
  // A = z^2 (z^6 + 1), B = z^3 (z^9 + 2): orders (2, 3, 6) at 0 give I0*.
  ExactPolynomial a = poly({{8, 1}, {2, 1}});
  ExactPolynomial b = poly({{12, 1}, {3, 2}});
  WeierstrassFamily f(a, b);
  SingularFiber s = fiber_at(f, GaussRational(0));
  EXPECT_EQ(s.ord_a, 2);
  EXPECT_EQ(s.ord_b, 3);
  EXPECT_EQ(s.ord_delta, 6);
  EXPECT_EQ(s.type.name(), "I0*");
  EXPECT_EQ(euler_sum(singular_fibers(f)), 24);
}

TEST(Periods, SpecialJValues) {
  FiberPeriods p = fiber_periods(1.0, 0.0);
  EXPECT_LE(std::abs(modular_j(p.tau) - 1728.0), 1e-6 * 1729.0);
  EXPECT_NEAR(std::abs(p.tau - Complex(0, 1)), 0.0, 1e-9);
  FiberPeriods q = fiber_periods(0.0, 1.0);
  EXPECT_LE(std::abs(modular_j(q.tau)), 1e-6);
  EXPECT_NEAR(std::abs(std::abs(q.tau) - 1.0), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(std::abs(q.tau.real()) - 0.5), 0.0, 1e-9);
  EXPECT_THROW(fiber_periods(-3.0, 2.0), Error);
}

TEST(Periods, EisensteinOracle) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Complex a(n(rng), n(rng)), b(n(rng), n(rng));
    FiberPeriods p = fiber_periods(a, b);
    EXPECT_GT(p.tau.imag(), 0.0);
    EXPECT_GT((p.omega2 * std::conj(p.omega1)).imag(), 0.0);
    auto inv = oracle::lattice_invariants(p.omega1, p.tau);
    double const scale = 1.0 + std::abs(a) + std::abs(b);
    EXPECT_LT(std::abs(inv.g2 + 4.0 * a), 1e-9 * scale) << a << " " << b;
    EXPECT_LT(std::abs(inv.g3 + 4.0 * b), 1e-9 * scale) << a << " " << b;
  }
}

TEST(Periods, PathIntegrationAgrees) {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Complex a(n(rng), n(rng)), b(n(rng), n(rng));
    FiberPeriods r = fiber_periods(a, b);
    FiberPeriods q = fiber_periods(a, b, PeriodOptions{1e-6, true});
    EXPECT_TRUE(q.fallback_used);
    EXPECT_FALSE(r.fallback_used);
    EXPECT_NEAR(std::abs(r.tau - q.tau), 0.0, 1e-9);
    double ra = (r.omega2 * std::conj(r.omega1)).imag(), qa = (q.omega2 * std::conj(q.omega1)).imag();
    EXPECT_NEAR(ra, qa, 1e-9 * ra);
  }
}

TEST(Periods, RealRootsMatchAgm) {
  // y^2 = (x - 1)(x - 2)(x + 3): the real period is 2π / AGM(sqrt(5), 1).
  FiberPeriods p = fiber_periods(-7.0, 6.0);
  double x = std::sqrt(5.0), y = 1.0;
  for (int i = 0; i < 30; ++i) std::tie(x, y) = std::pair{(x + y) / 2, std::sqrt(x * y)};
  double const real_period = 2.0 * std::acos(-1.0) / x;
  // The real period is a primitive lattice vector; find it among small
  // combinations.
  double best = INFINITY;
  for (int m = -3; m <= 3; ++m)
    for (int k = -3; k <= 3; ++k)
      best = std::min(best, std::abs(double(m) * p.omega1 + double(k) * p.omega2 - real_period));
  EXPECT_LT(best, 1e-10);
}

TEST(Periods, DensityInvariantUnderSl2z) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> u(-5, 5);
  FiberPeriods p = fiber_periods(Complex(0.3, -1.1), Complex(0.7, 0.2));
  double const rho = (p.omega2 * std::conj(p.omega1)).imag();
  int done = 0;
  while (done < 10) {
    long a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    if (a * d - b * c != 1) continue;
    Complex w2 = double(a) * p.omega2 + double(b) * p.omega1;
    Complex w1 = double(c) * p.omega2 + double(d) * p.omega1;
    EXPECT_NEAR((w2 * std::conj(w1)).imag(), rho, 1e-10 * rho);
    ++done;
  }
}

TEST(Density, ConstantFamilyIsConstant) {
  WeierstrassFamily f(poly({{0, 1}}), poly({{0, 1}}));
  DensityField field(f, {});
  double const rho0 = field.density(Chart::Affine, 0.0);
  EXPECT_GT(rho0, 0.0);
  for (Complex z : {Complex(1, 1), Complex(-1.5, 0.2), Complex(0, 1.9)})
    EXPECT_NEAR(field.density(Chart::Affine, z), rho0, 1e-12 * rho0);
}

TEST(Density, ChartsAgree) {
  std::mt19937_64 rng(53);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  for (Complex z : {Complex(0.8, 0.9), Complex(-1.3, 0.4), Complex(0.2, -1.7)}) {
    double rz = field.density(Chart::Affine, z);
    double rw = field.density(Chart::Infinity, 1.0 / z);
    EXPECT_NEAR(rw, rz * std::pow(std::abs(z), 4), 1e-9 * rw);
  }
}

TEST(Density, LogGrowthNearI1) {
  std::mt19937_64 rng(59);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  SingularFiber const& s = field.fibers().front();
  ASSERT_EQ(s.type.name(), "I1");
  // ρ(r) ≈ c log(1/r) + const: successive decades add equal increments.
  std::vector<double> rho;
  for (int k = 2; k <= 5; ++k) {
    double avg = 0.0;
    for (int q = 0; q < 8; ++q)
      avg += field.density(Chart::Affine, s.location + std::pow(10.0, -k) * std::exp(Complex(0, q * 0.785398)));
    rho.push_back(avg / 8);
  }
  double const d1 = rho[1] - rho[0], d2 = rho[2] - rho[1], d3 = rho[3] - rho[2];
  EXPECT_GT(d1, 0.0);
  EXPECT_NEAR(d2 / d1, 1.0, 0.05);
  EXPECT_NEAR(d3 / d2, 1.0, 0.01);
}

TEST(Density, RefusesSingularPoints) {
  std::mt19937_64 rng(61);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  EXPECT_THROW(field.density(Chart::Affine, field.fibers().front().location), Error);
}

TEST(Monodromy, LoopAroundI1) {
  std::mt19937_64 rng(67);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  auto const& fibers = field.fibers();
  SingularFiber const& s = fibers.front();
  double nearest = INFINITY;
  for (auto const& o : fibers)
    if (&o != &s && !o.at_infinity()) nearest = std::min(nearest, std::abs(o.location - s.location));
  LoopMonodromy m = loop_monodromy(field, Chart::Affine, s.location, nearest / 3);
  auto const& t = m.matrix;
  EXPECT_LT(m.final_rounding_deviation, 1e-6);
  EXPECT_EQ(t[0][0] * t[1][1] - t[0][1] * t[1][0], 1);
  EXPECT_EQ(t[0][0] + t[1][1], 2);
  EXPECT_FALSE(t[0][1] == 0 && t[1][0] == 0);
}

TEST(Monodromy, TrivialLoopAwayFromFibers) {
  std::mt19937_64 rng(71);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  // A tiny loop around a smooth point encloses nothing.
  Complex z = 0.5 * (field.fibers()[0].location + field.fibers()[1].location);
  double r = 1e-3;
  for (auto const& s : field.fibers())
    if (!s.at_infinity()) r = std::min(r, std::abs(s.location - z) / 3);
  LoopMonodromy m = loop_monodromy(field, Chart::Affine, z, r);
  EXPECT_EQ(m.matrix[0][0], 1);
  EXPECT_EQ(m.matrix[0][1], 0);
  EXPECT_EQ(m.matrix[1][0], 0);
  EXPECT_EQ(m.matrix[1][1], 1);
}
