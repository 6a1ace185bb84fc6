#include "k3c/polynomial.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "k3c/error.hpp"

namespace k3c {

GaussRational GaussRational::from_double(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im)) throw Error("non_finite", "coefficient is not finite");
  // Every finite double is a dyadic rational; convert without rounding.
  auto exact = [](double x) {
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);
    auto m = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{Integer(m)};
    if (exp > 0) r *= Rational(Integer(1) << exp);
    if (exp < 0) r /= Rational(Integer(1) << -exp);
    return r;
  };
  return {exact(re), exact(im)};
}

GaussRational GaussRational::inverse() const {
  Rational n = re * re + im * im;
  if (n == 0) throw Error("division_by_zero", "inverse of zero");
  return {re / n, -im / n};
}

NumericPolynomial to_numeric(ExactPolynomial const& p) {
  std::vector<std::complex<double>> c;
  c.reserve(p.coefficients().size());
  for (auto const& x : p.coefficients()) c.push_back(x.to_complex());
  return NumericPolynomial(std::move(c));
}

DivMod divmod(ExactPolynomial const& a, ExactPolynomial const& b) {
  if (b.is_zero()) throw Error("division_by_zero", "polynomial division by zero");
  std::vector<GaussRational> rem = a.coefficients();
  int const db = b.degree();
  if (a.degree() < db) return {ExactPolynomial(), a};
  std::vector<GaussRational> quo(a.degree() - db + 1, GaussRational(0));
  GaussRational const inv_lead = b.leading().inverse();
  for (int k = a.degree(); k >= db; --k) {
    GaussRational const& top = rem[k];
    if (top.is_zero()) continue;
    GaussRational f = top * inv_lead;
    quo[k - db] = f;
    for (int i = 0; i <= db; ++i) rem[k - db + i] = rem[k - db + i] - f * b.coefficients()[i];
  }
  rem.resize(db);
  return {ExactPolynomial(std::move(quo)), ExactPolynomial(std::move(rem))};
}

ExactPolynomial exact_quotient(ExactPolynomial const& a, ExactPolynomial const& b) {
  DivMod d = divmod(a, b);
  if (!d.remainder.is_zero()) throw Error("internal", "polynomial division is not exact");
  return d.quotient;
}

ExactPolynomial monic(ExactPolynomial const& p) {
  if (p.is_zero()) return p;
  return p.leading().inverse() * p;
}

namespace {

// Z[i]/(p) is the field F_{p^2} because p = 2^61 - 1 is 3 mod 4.
constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(t & kPrime);
  std::uint64_t hi = static_cast<std::uint64_t>(t >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}
std::uint64_t addmod(std::uint64_t a, std::uint64_t b) { return a + b >= kPrime ? a + b - kPrime : a + b; }
std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

struct Fp2 {
  std::uint64_t re = 0, im = 0;
  bool zero() const { return re == 0 && im == 0; }
};
Fp2 operator*(Fp2 a, Fp2 b) {
  return {submod(mulmod(a.re, b.re), mulmod(a.im, b.im)), addmod(mulmod(a.re, b.im), mulmod(a.im, b.re))};
}
Fp2 operator-(Fp2 a, Fp2 b) { return {submod(a.re, b.re), submod(a.im, b.im)}; }
Fp2 inverse(Fp2 a) {
  std::uint64_t n = powmod(addmod(mulmod(a.re, a.re), mulmod(a.im, a.im)), kPrime - 2);
  return {mulmod(a.re, n), mulmod(submod(0, a.im), n)};
}

std::optional<std::uint64_t> reduce(Rational const& q) {
  Integer const p(kPrime);
  Integer den = denominator(q) % p;
  if (den == 0) return std::nullopt;
  Integer num = numerator(q) % p;
  if (num < 0) num += p;
  return mulmod(static_cast<std::uint64_t>(num), powmod(static_cast<std::uint64_t>(den), kPrime - 2));
}

// Coefficients mod p, or nothing if p divides a denominator or the leading
// coefficient (the reduction would not preserve gcd degrees).
std::optional<std::vector<Fp2>> reduce(ExactPolynomial const& f) {
  std::vector<Fp2> out;
  for (auto const& c : f.coefficients()) {
    auto re = reduce(c.re), im = reduce(c.im);
    if (!re || !im) return std::nullopt;
    out.push_back({*re, *im});
  }
  if (out.empty() || out.back().zero()) return std::nullopt;
  return out;
}

int gcd_degree_mod_p(std::vector<Fp2> a, std::vector<Fp2> b) {
  auto trim = [](std::vector<Fp2>& v) {
    while (!v.empty() && v.back().zero()) v.pop_back();
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    Fp2 inv = inverse(b.back());
    while (a.size() >= b.size()) {
      Fp2 f = a.back() * inv;
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = a[shift + i] - f * b[i];
      a.pop_back();
      trim(a);
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

}  // namespace

bool certified_coprime(ExactPolynomial const& a, ExactPolynomial const& b) {
  // deg gcd(a mod p, b mod p) bounds the true gcd degree from above.
  auto ra = reduce(a), rb = reduce(b);
  return ra && rb && gcd_degree_mod_p(*ra, *rb) == 0;
}

ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b) {
  if (!a.is_zero() && !b.is_zero() && certified_coprime(a, b))
    return ExactPolynomial(std::vector<GaussRational>{GaussRational(1)});
  while (!b.is_zero()) {
    ExactPolynomial r = divmod(a, b).remainder;
    a = std::move(b);
    b = monic(r);
  }
  return monic(a);
}

std::vector<ExactPolynomial> squarefree_decomposition(ExactPolynomial const& f) {
  if (f.degree() < 1) return {};
  std::vector<ExactPolynomial> out;
  ExactPolynomial fp = f.derivative();
  ExactPolynomial a0 = gcd(f, fp);
  ExactPolynomial b = exact_quotient(f, a0);
  ExactPolynomial c = exact_quotient(fp, a0);
  ExactPolynomial d = c - b.derivative();
  while (b.degree() > 0) {
    ExactPolynomial a = gcd(b, d);
    out.push_back(a);
    b = exact_quotient(b, a);
    c = exact_quotient(d, a);
    d = c - b.derivative();
  }
  return out;
}

int order_at(ExactPolynomial const& p, GaussRational const& z0) {
  if (p.is_zero()) return -1;
  // Repeated synthetic division by (z - z0).
  std::vector<GaussRational> c = p.coefficients();
  int order = 0;
  for (;;) {
    std::size_t n = c.size();
    std::vector<GaussRational> q(n - 1, GaussRational(0));
    GaussRational acc = c[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
      q[k] = acc;
      acc = c[k] + acc * z0;
    }
    if (!acc.is_zero()) return order;
    ++order;
    c = std::move(q);
  }
}

std::vector<std::complex<double>> polynomial_roots(NumericPolynomial const& p) {
  int const n = p.degree();
  if (n < 1) return {};
  auto const& c = p.coefficients();
  std::complex<double> lead = c.back();
  std::vector<std::complex<double>> roots;
  if (n == 1) {
    roots.push_back(-c[0] / lead);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  }
  NumericPolynomial dp = p.derivative();
  for (auto& z : roots) {
    for (int it = 0; it < 8; ++it) {
      std::complex<double> f = p.evaluate(z);
      std::complex<double> df = dp.evaluate(z);
      if (std::abs(df) == 0.0) break;
      std::complex<double> step = f / df;
      z -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
  }
  return roots;
}

}  // namespace k3c
