#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "k3c/exact.hpp"

namespace k3c {

// Gaussian rational a + b i.
struct GaussRational {
  Rational re = 0;
  Rational im = 0;

  GaussRational() = default;
  GaussRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussRational(int r) : re(r), im(0) {}

  static GaussRational from_double(double re, double im);

  bool is_zero() const { return re == 0 && im == 0; }
  std::complex<double> to_complex() const { return {re.convert_to<double>(), im.convert_to<double>()}; }

  GaussRational inverse() const;

  friend bool operator==(GaussRational const& a, GaussRational const& b) { return a.re == b.re && a.im == b.im; }
  friend GaussRational operator+(GaussRational const& a, GaussRational const& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRational operator-(GaussRational const& a, GaussRational const& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRational operator-(GaussRational const& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(GaussRational const& a, GaussRational const& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRational operator/(GaussRational const& a, GaussRational const& b) { return a * b.inverse(); }
};

// Dense univariate polynomial, coefficients in ascending degree. The zero
// polynomial has no coefficients and degree -1.
template <class T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(T const& c, std::size_t degree) {
    std::vector<T> v(degree + 1, T(0));
    v[degree] = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::vector<T> const& coefficients() const { return c_; }
  T coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }
  T const& leading() const { return c_.back(); }

  template <class U>
  U evaluate(U const& z) const {
    U acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + convert<U>(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * T(static_cast<int>(k));
    return Polynomial(std::move(d));
  }

  friend Polynomial operator+(Polynomial const& a, Polynomial const& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = r[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] + b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator-(Polynomial const& a, Polynomial const& b) {
    std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] = r[k] + a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] = r[k] - b.c_[k];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(Polynomial const& a, Polynomial const& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
    return Polynomial(std::move(r));
  }
  friend Polynomial operator*(T const& s, Polynomial const& a) {
    std::vector<T> r = a.c_;
    for (auto& x : r) x = s * x;
    return Polynomial(std::move(r));
  }
  friend bool operator==(Polynomial const& a, Polynomial const& b) { return a.c_ == b.c_; }

 private:
  template <class U>
  static U convert(T const& x) {
    if constexpr (std::is_same_v<T, GaussRational> && std::is_same_v<U, std::complex<double>>)
      return x.to_complex();
    else
      return U(x);
  }

  void trim() {
    while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
  }
  static bool is_zero_coeff(T const& x) {
    if constexpr (std::is_same_v<T, GaussRational>)
      return x.is_zero();
    else
      return x == T(0);
  }

  std::vector<T> c_;
};

using ExactPolynomial = Polynomial<GaussRational>;
using NumericPolynomial = Polynomial<std::complex<double>>;

NumericPolynomial to_numeric(ExactPolynomial const& p);

struct DivMod {
  ExactPolynomial quotient;
  ExactPolynomial remainder;
};
DivMod divmod(ExactPolynomial const& a, ExactPolynomial const& b);
ExactPolynomial exact_quotient(ExactPolynomial const& a, ExactPolynomial const& b);
ExactPolynomial monic(ExactPolynomial const& p);
// True when a and b are provably coprime by reduction modulo a large
// prime; false means "unknown".
bool certified_coprime(ExactPolynomial const& a, ExactPolynomial const& b);
// Monic gcd; gcd(0, 0) = 0.
ExactPolynomial gcd(ExactPolynomial a, ExactPolynomial b);

// Yun's square-free decomposition f = c * prod_k P_k^k; entry k-1 holds P_k
// (monic, possibly constant 1).
std::vector<ExactPolynomial> squarefree_decomposition(ExactPolynomial const& f);

// Multiplicity of z0 as a root of p; -1 for the zero polynomial.
int order_at(ExactPolynomial const& p, GaussRational const& z0);

// Roots of a polynomial with nonzero leading coefficient, via the companion
// matrix followed by Newton polishing.
std::vector<std::complex<double>> polynomial_roots(NumericPolynomial const& p);

}  // namespace k3c
