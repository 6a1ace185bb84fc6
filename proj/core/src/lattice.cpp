#include "k3c/lattice.hpp"

#include <utility>

#include "k3c/error.hpp"

namespace k3c {

namespace {

void require_length(Lattice const& l, std::size_t n, char const* what) {
  if (n != l.rank())
    throw Error("dimension_mismatch", std::string(what) + " has length " + std::to_string(n) + ", lattice rank is " +
                                          std::to_string(l.rank()));
}

bool all_zero(IntVector const& v) {
  for (auto const& x : v)
    if (x != 0) return false;
  return true;
}

Rational frac(Rational const& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer fl = num / den;
  if (num < 0 && fl * den != num) fl -= 1;
  return q - Rational(fl);
}

}  // namespace

Lattice::Lattice(IntMatrix gram, std::vector<std::string> labels) : gram_(std::move(gram)), labels_(std::move(labels)) {
  if (!gram_.square() || gram_.rows() == 0) throw Error("invalid_gram", "Gram matrix must be square and nonempty");
  for (std::size_t i = 0; i < gram_.rows(); ++i)
    for (std::size_t j = i + 1; j < gram_.cols(); ++j)
      if (gram_(i, j) != gram_(j, i))
        throw Error("not_symmetric", "Gram matrix is not symmetric",
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");
  if (!labels_.empty() && labels_.size() != gram_.rows())
    throw Error("dimension_mismatch", "label count does not match rank");
}

Integer Lattice::pairing(IntVector const& v, IntVector const& w) const {
  require_length(*this, v.size(), "first vector");
  require_length(*this, w.size(), "second vector");
  Integer s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w[j] != 0) s += v[i] * gram_(i, j) * w[j];
  }
  return s;
}

Rational Lattice::pairing(RatVector const& v, RatVector const& w) const {
  require_length(*this, v.size(), "first vector");
  require_length(*this, w.size(), "second vector");
  Rational s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (w[j] != 0 && gram_(i, j) != 0) s += v[i] * Rational(gram_(i, j)) * w[j];
  }
  return s;
}

IntVector Lattice::dual_coordinates(IntVector const& v) const {
  require_length(*this, v.size(), "vector");
  return gram_.transpose() * v;
}

RationalSubspace::RationalSubspace(std::vector<RatVector> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) return;
  ambient_ = basis_.front().size();
  RatMatrix m(basis_.size(), ambient_);
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (basis_[i].size() != ambient_) throw Error("dimension_mismatch", "subspace vectors have different lengths");
    for (std::size_t j = 0; j < ambient_; ++j) m(i, j) = basis_[i][j];
  }
  if (rank(m) != basis_.size()) throw Error("dependent_basis", "subspace basis vectors are linearly dependent");
}

RationalSubspace RationalSubspace::span(std::vector<IntVector> const& vectors) {
  std::vector<RatVector> b;
  for (auto const& v : vectors) b.push_back(to_rational(v));
  return RationalSubspace(std::move(b));
}

IntMatrix e8_negative_gram() {
  // Bourbaki numbering: chain 1-3-4-5-6-7-8 with node 2 attached to 4.
  IntMatrix g(8, 8);
  for (std::size_t i = 0; i < 8; ++i) g(i, i) = -2;
  constexpr std::pair<int, int> edges[] = {{1, 3}, {3, 4}, {2, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}};
  for (auto [a, b] : edges) {
    g(a - 1, b - 1) = 1;
    g(b - 1, a - 1) = 1;
  }
  return g;
}

IntMatrix hyperbolic_plane_gram() { return IntMatrix{{0, 1}, {1, 0}}; }

Lattice build_k3_lattice() {
  IntMatrix u = hyperbolic_plane_gram();
  IntMatrix e8 = e8_negative_gram();
  std::vector<std::string> labels;
  for (int k = 1; k <= 3; ++k) {
    labels.push_back("U" + std::to_string(k) + ".e");
    labels.push_back("U" + std::to_string(k) + ".f");
  }
  for (int k = 1; k <= 2; ++k)
    for (int i = 1; i <= 8; ++i) labels.push_back("E8_" + std::to_string(k) + ".a" + std::to_string(i));
  return Lattice(direct_sum({u, u, u, e8, e8}), std::move(labels));
}

PolarizedLattice build_polarized_lattice(int d) {
  if (d < 1) throw Error("invalid_degree", "polarization degree parameter d must be >= 1");
  Lattice k3 = build_k3_lattice();
  LatticeVector lambda(k3.rank(), 0);
  lambda[0] = 1;
  lambda[1] = d;
  IntMatrix basis = orthogonal_complement(k3, RationalSubspace::span({lambda}));
  Lattice l2d = sublattice(k3, basis);
  return PolarizedLattice{std::move(l2d), std::move(basis), std::move(lambda), std::move(k3)};
}

Signature signature(Lattice const& l) {
  Inertia in = symmetric_inertia(to_rational(l.gram()));
  if (in.zero != 0) throw Error("degenerate_form", "form is degenerate (" + std::to_string(in.zero) + " null directions)");
  return Signature{in.positive, in.negative};
}

Integer lattice_determinant(Lattice const& l) { return determinant(l.gram()); }

bool is_primitive(Lattice const& l, LatticeVector const& v) {
  require_length(l, v.size(), "vector");
  if (all_zero(v)) throw Error("zero_vector", "primitivity is undefined for the zero vector");
  return gcd_of(v) == 1;
}

Integer divisibility(Lattice const& l, LatticeVector const& v) {
  require_length(l, v.size(), "vector");
  if (all_zero(v)) throw Error("zero_vector", "divisibility is undefined for the zero vector");
  Integer g = gcd_of(l.dual_coordinates(v));
  if (g == 0) throw Error("degenerate_form", "vector lies in the radical of the form");
  return g;
}

IntMatrix orthogonal_complement(Lattice const& l, RationalSubspace const& s) {
  if (s.dim() == 0) return IntMatrix::identity(l.rank());
  require_length(l, s.ambient_rank(), "subspace vector");
  IntMatrix rows(s.dim(), l.rank());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    IntVector dual = l.dual_coordinates(clear_denominators(s.basis()[i]));
    for (std::size_t j = 0; j < l.rank(); ++j) rows(i, j) = dual[j];
  }
  return integer_kernel(rows);
}

Lattice sublattice(Lattice const& l, IntMatrix const& basis) {
  if (basis.rows() != l.rank()) throw Error("dimension_mismatch", "basis rows do not match lattice rank");
  return Lattice(basis.transpose() * l.gram() * basis);
}

RatVector IsotropicQuotient::project(RatVector const& x) const {
  if (ambient_.pairing(x, to_rational(e_)) != 0)
    throw Error("not_orthogonal", "vector is not orthogonal to the isotropic vector");
  auto y = solve_full_column_rank(to_rational(adapted_), x);
  if (!y) throw Error("not_orthogonal", "vector does not lie in the orthogonal complement");
  return RatVector(y->begin() + 1, y->end());
}

RatVector IsotropicQuotient::lift(RatVector const& q) const {
  if (q.size() + 1 != adapted_.cols()) throw Error("dimension_mismatch", "quotient coordinates have wrong length");
  RatVector y(adapted_.cols(), 0);
  for (std::size_t i = 0; i < q.size(); ++i) y[i + 1] = q[i];
  return to_rational(adapted_) * y;
}

IsotropicQuotient quotient_by_isotropic(Lattice const& l, LatticeVector const& e) {
  if (!is_primitive(l, e)) throw Error("not_primitive", "isotropic vector must be primitive");
  if (l.pairing(e, e) != 0) throw Error("not_isotropic", "vector is not isotropic");
  IntMatrix perp = orthogonal_complement(l, RationalSubspace::span({e}));
  auto coords = solve_full_column_rank(to_rational(perp), to_rational(e));
  if (!coords) throw Error("internal", "isotropic vector not found in its own orthogonal complement");
  IntVector c;
  for (auto const& q : *coords) {
    if (boost::multiprecision::denominator(q) != 1) throw Error("internal", "orthogonal complement is not saturated");
    c.push_back(boost::multiprecision::numerator(q));
  }
  UnimodularPair w = unimodular_to_first_basis_vector(c);
  IntMatrix adapted = perp * w.inverse;

  IntMatrix lifts(l.rank(), adapted.cols() - 1);
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t j = 1; j < adapted.cols(); ++j) lifts(i, j - 1) = adapted(i, j);
  Lattice q(lifts.transpose() * l.gram() * lifts);
  return IsotropicQuotient(std::move(q), std::move(adapted), e, l);
}

std::string to_string(StratumKind k) { return k == StratumKind::Line ? "line" : "plane"; }

BoundaryInvariants boundary_invariants(Lattice const& l, LatticeVector const& e) {
  BoundaryInvariants inv;
  inv.divisibility = divisibility(l, e);
  Integer order = 1;
  for (auto const& x : e) {
    Rational c = frac(Rational(x, inv.divisibility));
    Integer den = boost::multiprecision::denominator(c);
    order = order / boost::multiprecision::gcd(order, den) * den;
    inv.discriminant_class.push_back(c);
  }
  inv.class_order = order;
  inv.class_norm_mod_2 =
      Rational(l.pairing(e, e), inv.divisibility * inv.divisibility);
  inv.class_norm_mod_2 = 2 * frac(inv.class_norm_mod_2 / 2);
  return inv;
}

BoundaryStratumDescriptor classify_boundary(Lattice const& l, RationalSubspace const& s) {
  if (s.dim() != 1 && s.dim() != 2)
    throw Error("invalid_dimension", "isotropic subspaces of a signature (2, n) form have dimension 1 or 2, got " +
                                         std::to_string(s.dim()));
  require_length(l, s.ambient_rank(), "subspace vector");
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = i; j < s.dim(); ++j)
      if (l.pairing(s.basis()[i], s.basis()[j]) != 0)
        throw Error("not_isotropic", "form does not vanish on the subspace",
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");

  std::vector<IntVector> cols;
  for (auto const& v : s.basis()) cols.push_back(clear_denominators(v));
  BoundaryStratumDescriptor out;
  out.generators = saturate_columns(IntMatrix::from_columns(cols, l.rank()));
  out.change_of_basis = RatMatrix(out.generators.cols(), s.dim());
  RatMatrix gens_q = to_rational(out.generators);
  for (std::size_t j = 0; j < s.dim(); ++j) {
    auto c = solve_full_column_rank(gens_q, s.basis()[j]);
    if (!c) throw Error("internal", "saturation does not contain the input subspace");
    for (std::size_t i = 0; i < c->size(); ++i) out.change_of_basis(i, j) = (*c)[i];
  }

  if (s.dim() == 2) {
    out.kind = StratumKind::Plane;
    return out;
  }
  out.kind = StratumKind::Line;
  LatticeVector e = out.generators.column(0);
  IsotropicQuotient q = quotient_by_isotropic(l, e);
  out.quotient_lattice = q.quotient();
  Inertia in = symmetric_inertia(to_rational(q.quotient().gram()));
  if (in.zero == 0) out.quotient_signature = Signature{in.positive, in.negative};
  out.invariants = boundary_invariants(l, e);
  return out;
}

}  // namespace k3c
