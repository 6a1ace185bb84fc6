#include <gtest/gtest.h>

#include <random>

#include "k3c/error.hpp"
#include "k3c/lattice.hpp"
#include "oracles.hpp"

using namespace k3c;

namespace {

IntVector to_int(RatVector const& v) {
  IntVector out;
  for (auto const& q : v) {
    EXPECT_EQ(boost::multiprecision::denominator(q), 1);
    out.push_back(boost::multiprecision::numerator(q));
  }
  return out;
}

IntVector l2d_coordinates(PolarizedLattice const& p, IntVector const& x) {
  auto c = solve_full_column_rank(to_rational(p.embedding), to_rational(x));
  EXPECT_TRUE(c);
  return to_int(*c);
}

}  // namespace

TEST(Lattice, E8IsEvenUnimodularNegativeDefinite) {
  Lattice e8(e8_negative_gram());
  EXPECT_EQ(lattice_determinant(e8), 1);
  EXPECT_EQ(signature(e8), (Signature{0, 8}));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(e8.gram()(i, i), -2);
}

TEST(Lattice, K3Invariants) {
  Lattice k3 = build_k3_lattice();
  EXPECT_EQ(k3.rank(), 22u);
  EXPECT_EQ(signature(k3), (Signature{3, 19}));
  EXPECT_EQ(abs(lattice_determinant(k3)), 1);
  EXPECT_EQ(k3.labels().size(), 22u);
  EXPECT_EQ(k3.labels()[0], "U1.e");
}

TEST(Lattice, PolarizedLatticeInvariants) {
  for (int d = 1; d <= 10; ++d) {
    PolarizedLattice p = build_polarized_lattice(d);
    EXPECT_EQ(p.lattice.rank(), 21u);
    EXPECT_EQ(signature(p.lattice), (Signature{2, 19}));
    // λ⊥ in a unimodular lattice has discriminant of order (λ,λ) = 2d.
    EXPECT_EQ(abs(lattice_determinant(p.lattice)), 2 * d);
    EXPECT_EQ(p.ambient.pairing(p.lambda, p.lambda), 2 * d);
    for (std::size_t j = 0; j < p.embedding.cols(); ++j) EXPECT_EQ(p.ambient.pairing(p.embedding.column(j), p.lambda), 0);
  }
  EXPECT_THROW(build_polarized_lattice(0), Error);
}

TEST(Lattice, GramValidation) {
  EXPECT_THROW(Lattice(IntMatrix{{1, 2}, {3, 4}}), Error);
  EXPECT_THROW(Lattice(IntMatrix{{1, 2, 3}}), Error);
  EXPECT_THROW(Lattice(IntMatrix{{1}}, {"a", "b"}), Error);
  EXPECT_THROW(signature(Lattice(IntMatrix{{1, 1}, {1, 1}})), Error);
}

TEST(Lattice, PrimitivityAndDivisibility) {
  Lattice k3 = build_k3_lattice();
  IntVector v(22, 0);
  v[0] = 2;
  v[1] = 4;
  EXPECT_FALSE(is_primitive(k3, v));
  v[1] = 3;
  EXPECT_TRUE(is_primitive(k3, v));
  EXPECT_EQ(divisibility(k3, v), 1);
  EXPECT_THROW(is_primitive(k3, IntVector(22, 0)), Error);
  EXPECT_THROW(is_primitive(k3, IntVector(3, 1)), Error);

  PolarizedLattice p = build_polarized_lattice(3);
  // U1.e - 3 U1.f lies in Λ_6; its divisibility divides 2d = 6.
  IntVector x(22, 0);
  x[0] = 1;
  x[1] = -3;
  Integer div = divisibility(p.lattice, l2d_coordinates(p, x));
  EXPECT_EQ(6 % div, 0);
}

TEST(Lattice, QuotientOfK3ByIsotropicVector) {
  Lattice k3 = build_k3_lattice();
  IsotropicQuotient q = quotient_by_isotropic(k3, oracle::basis_vector(22, 0));
  EXPECT_EQ(q.quotient().rank(), 20u);
  EXPECT_EQ(signature(q.quotient()), (Signature{2, 18}));
  EXPECT_EQ(abs(lattice_determinant(q.quotient())), 1);
  IntVector twice(22, 0);
  twice[0] = 2;
  EXPECT_THROW(quotient_by_isotropic(k3, twice), Error);
  EXPECT_THROW(quotient_by_isotropic(k3, [] {
                 IntVector v(22, 0);
                 v[0] = v[1] = 1;
                 return v;
               }()),
               Error);
}

TEST(Lattice, ProjectLiftRoundTrip) {
  Lattice k3 = build_k3_lattice();
  IsotropicQuotient q = quotient_by_isotropic(k3, oracle::basis_vector(22, 2));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> u(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    RatVector qc(20);
    for (auto& x : qc) x = u(rng);
    RatVector lifted = q.lift(qc);
    EXPECT_EQ(q.project(lifted), qc);
  }
  RatVector bad(22, 0);
  bad[3] = 1;  // pairs to 1 with U2.e
  EXPECT_THROW(q.project(bad), Error);
}

TEST(Lattice, RandomIsotropicQuotientsOfL2d) {
  std::mt19937_64 rng(2024);
  Lattice k3 = build_k3_lattice();
  for (int d : {1, 2, 5}) {
    PolarizedLattice p = build_polarized_lattice(d);
    for (int trial = 0; trial < 8; ++trial) {
      IntVector x = oracle::random_isotropic_in_l2d(k3, d, rng);
      IntVector e = l2d_coordinates(p, x);
      ASSERT_EQ(p.lattice.pairing(e, e), 0);
      IsotropicQuotient q = quotient_by_isotropic(p.lattice, e);
      EXPECT_EQ(signature(q.quotient()), (Signature{1, 18}));
      // The adapted basis starts with e and spans e⊥.
      EXPECT_EQ(q.adapted_basis().column(0), e);
      for (std::size_t j = 0; j < q.adapted_basis().cols(); ++j)
        EXPECT_EQ(p.lattice.pairing(q.adapted_basis().column(j), e), 0);
    }
  }
}

TEST(Lattice, ClassifyLineAndPlane) {
  Lattice k3 = build_k3_lattice();
  BoundaryStratumDescriptor line = classify_boundary(k3, RationalSubspace({{Rational(1, 2), 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
                                                                             0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}}));
  EXPECT_EQ(line.kind, StratumKind::Line);
  EXPECT_EQ(line.generators.column(0), oracle::basis_vector(22, 0));
  EXPECT_EQ(line.change_of_basis(0, 0), Rational(1, 2));
  ASSERT_TRUE(line.quotient_signature);
  EXPECT_EQ(*line.quotient_signature, (Signature{2, 18}));
  ASSERT_TRUE(line.invariants);
  EXPECT_EQ(line.invariants->divisibility, 1);

  BoundaryStratumDescriptor plane =
      classify_boundary(k3, RationalSubspace::span({oracle::basis_vector(22, 0), oracle::basis_vector(22, 2)}));
  EXPECT_EQ(plane.kind, StratumKind::Plane);
  EXPECT_EQ(plane.generators.cols(), 2u);
  EXPECT_FALSE(plane.quotient_signature);

  EXPECT_THROW(classify_boundary(k3, RationalSubspace::span({oracle::basis_vector(22, 6)})), Error);
  EXPECT_THROW(classify_boundary(k3, RationalSubspace::span({oracle::basis_vector(22, 0), oracle::basis_vector(22, 1)})),
               Error);
}

TEST(Lattice, BoundaryInvariantsInPolarizedLattice) {
  PolarizedLattice p = build_polarized_lattice(2);
  Lattice k3 = build_k3_lattice();
  // U2.e is isotropic, lies in λ⊥ and has divisibility 1.
  IntVector e = l2d_coordinates(p, oracle::basis_vector(22, 2));
  BoundaryInvariants inv = boundary_invariants(p.lattice, e);
  EXPECT_EQ(inv.divisibility, 1);
  EXPECT_EQ(inv.class_order, 1);
  EXPECT_EQ(inv.class_norm_mod_2, 0);
  for (auto const& c : inv.discriminant_class) EXPECT_EQ(c, 0);
}
