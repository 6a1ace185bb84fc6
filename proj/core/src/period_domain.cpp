#include "k3c/period_domain.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include <Eigen/Dense>

#include "k3c/error.hpp"

namespace k3c {

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}

using ModMatrix = std::vector<std::uint64_t>;

ModMatrix mod_mul(ModMatrix const& a, ModMatrix const& b, std::size_t n) {
  ModMatrix c(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t aik = a[i * n + k];
      if (aik == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t s = c[i * n + j] + mulmod(aik, b[k * n + j]);
        c[i * n + j] = s >= kPrime ? s - kPrime : s;
      }
    }
  return c;
}

bool mod_nilpotent(ModMatrix a, std::size_t n) {
  for (std::size_t power = 1; power < n; power *= 2) a = mod_mul(a, a, n);
  for (auto x : a)
    if (x != 0) return false;
  return true;
}

template <class T>
Matrix<T> power(Matrix<T> base, unsigned long long e) {
  Matrix<T> r = Matrix<T>::identity(base.rows());
  while (e > 0) {
    if (e & 1ULL) r = r * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return r;
}

std::string eigenvalue_evidence(IntMatrix const& t) {
  std::size_t const n = t.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j).convert_to<double>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(m, false);
  std::ostringstream os;
  os << "eigenvalue moduli:";
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) os << ' ' << std::abs(es.eigenvalues()[i]);
  return os.str();
}

bool has_eigenvalue_off_unit_circle(IntMatrix const& t) {
  std::size_t const n = t.rows();
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = t(i, j).convert_to<double>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(m, false);
  // Unipotent blocks of size k perturb eigenvalues by ~eps^(1/k); stay loose.
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(std::abs(es.eigenvalues()[i]) - 1.0) > 1e-2) return true;
  return false;
}

}  // namespace

DomainMembership is_in_domain(Lattice const& l, PeriodPoint const& p) {
  if (p.re.size() != l.rank() || p.im.size() != l.rank())
    throw Error("dimension_mismatch", "period vector length does not match lattice rank");
  if (!(p.tolerance >= 0.0)) throw Error("invalid_tolerance", "tolerance must be nonnegative");
  Rational xx = l.pairing(p.re, p.re);
  Rational yy = l.pairing(p.im, p.im);
  Rational xy = l.pairing(p.re, p.im);
  DomainMembership out;
  out.self_pairing_re = xx - yy;
  out.self_pairing_im = 2 * xy;
  out.hermitian = xx + yy;
  bool isotropic;
  if (p.tolerance == 0.0) {
    isotropic = out.self_pairing_re == 0 && out.self_pairing_im == 0;
  } else {
    double re = out.self_pairing_re.convert_to<double>();
    double im = out.self_pairing_im.convert_to<double>();
    isotropic = std::hypot(re, im) <= p.tolerance;
  }
  out.inside = isotropic && out.hermitian > 0;
  return out;
}

MonodromyData monodromy_log(IntMatrix const& t, IntMatrix const& form, int max_index) {
  if (!t.square() || t.rows() == 0) throw Error("invalid_monodromy", "monodromy matrix must be square and nonempty");
  if (form.rows() != t.rows() || !form.square())
    throw Error("dimension_mismatch", "form and monodromy have different sizes");
  if (max_index < 1) throw Error("invalid_argument", "unipotency bound must be positive");
  if (!(t.transpose() * form * t == form))
    throw Error("not_form_preserving", "monodromy does not preserve the bilinear form");
  Integer det = determinant(t);
  if (det != 1 && det != -1) throw Error("not_unimodular", "monodromy is not invertible over the integers");
  if (has_eigenvalue_off_unit_circle(t))
    throw Error("not_quasi_unipotent", "monodromy has eigenvalues off the unit circle; " + eigenvalue_evidence(t));

  std::size_t const n = t.rows();
  ModMatrix tp(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Integer r = t(i, j) % Integer(kPrime);
      if (r < 0) r += Integer(kPrime);
      tp[i * n + j] = r.convert_to<std::uint64_t>();
    }

  IntMatrix const identity = IntMatrix::identity(n);
  ModMatrix pm = tp;
  for (int m = 1; m <= max_index; ++m) {
    if (m > 1) pm = mod_mul(pm, tp, n);
    ModMatrix a = pm;
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = (a[i * n + i] + kPrime - 1) % kPrime;
    if (!mod_nilpotent(a, n)) continue;

    IntMatrix u = power(t, static_cast<unsigned long long>(m)) - identity;
    if (!power(u, n).is_zero()) continue;  // false positive modulo the prime

    RatMatrix uq = to_rational(u);
    RatMatrix log(n, n);
    RatMatrix uk = uq;
    for (std::size_t k = 1; k < n && !uk.is_zero(); ++k) {
      Rational c(k % 2 == 1 ? 1 : -1, static_cast<long>(k));
      log = log + c * uk;
      uk = uk * uq;
    }
    RatMatrix fq = to_rational(form);
    if (!(log.transpose() * fq + fq * log).is_zero())
      throw Error("internal", "log-monodromy is not an infinitesimal isometry");
    return MonodromyData{t, form, m, std::move(log)};
  }
  throw Error("no_unipotent_power",
              "no power T^m with m <= " + std::to_string(max_index) + " is unipotent; " + eigenvalue_evidence(t));
}

std::string to_string(DegenerationType t) {
  switch (t) {
    case DegenerationType::TypeI: return "I";
    case DegenerationType::TypeII: return "II";
    case DegenerationType::TypeIII: return "III";
  }
  return "?";
}

DegenerationType classify_degeneration(MonodromyData const& m) {
  RatMatrix const& n = m.log;
  if (n.is_zero()) return DegenerationType::TypeI;
  RatMatrix n2 = n * n;
  if (n2.is_zero()) return DegenerationType::TypeII;
  if ((n2 * n).is_zero()) return DegenerationType::TypeIII;
  throw Error("invalid_monodromy", "log-monodromy has N^3 != 0, impossible for K3-type degenerations");
}

IntMatrix saturated_image(RatMatrix const& m) {
  std::vector<IntVector> cols;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    IntVector c = clear_denominators(m.column(j));
    bool zero = true;
    for (auto const& x : c) zero = zero && x == 0;
    if (!zero) cols.push_back(std::move(c));
  }
  if (cols.empty()) return IntMatrix(m.rows(), 0);
  return saturate_columns(IntMatrix::from_columns(cols, m.rows()));
}

BoundaryStratumDescriptor limit_boundary_stratum(MonodromyData const& m, Lattice const& l) {
  if (!(l.gram() == m.form)) throw Error("form_mismatch", "lattice form differs from the form preserved by the monodromy");
  DegenerationType type = classify_degeneration(m);
  if (type == DegenerationType::TypeI) throw Error("type_i_no_boundary", "Type I degenerations have no boundary stratum");
  RatMatrix image = type == DegenerationType::TypeII ? m.log : m.log * m.log;
  IntMatrix gens = saturated_image(image);
  std::vector<IntVector> vecs;
  for (std::size_t j = 0; j < gens.cols(); ++j) vecs.push_back(gens.column(j));
  BoundaryStratumDescriptor d = classify_boundary(l, RationalSubspace::span(vecs));
  StratumKind expected = type == DegenerationType::TypeII ? StratumKind::Plane : StratumKind::Line;
  if (d.kind != expected)
    throw Error("invalid_monodromy", "image of the log-monodromy has unexpected dimension for a Type " + to_string(type) +
                                         " degeneration");
  return d;
}

}  // namespace k3c
