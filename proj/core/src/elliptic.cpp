#include "k3c/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "k3c/error.hpp"

namespace k3c {

Complex carlson_rf(Complex x, Complex y, Complex z) {
  int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros > 1) throw Error("domain_error", "carlson_rf: more than one zero argument");
  constexpr double kErrTol = 0.0025;
  Complex ave;
  Complex dx, dy, dz;
  for (int iter = 0;; ++iter) {
    if (iter > 200) throw Error("domain_error", "carlson_rf did not converge");
    Complex sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    Complex lambda = sx * (sy + sz) + sy * sz;
    x = 0.25 * (x + lambda);
    y = 0.25 * (y + lambda);
    z = 0.25 * (z + lambda);
    ave = (x + y + z) / 3.0;
    dx = (ave - x) / ave;
    dy = (ave - y) / ave;
    dz = (ave - z) / ave;
    if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) < kErrTol) break;
  }
  Complex e2 = dx * dy - dz * dz;
  Complex e3 = dx * dy * dz;
  constexpr double c1 = 1.0 / 24.0, c2 = 0.1, c3 = 3.0 / 44.0, c4 = 1.0 / 14.0;
  return (1.0 + (c1 * e2 - c2 - c3 * e3) * e2 + c4 * e3) / std::sqrt(ave);
}

Complex modular_j(Complex tau) {
  if (!(tau.imag() > 0.0)) throw Error("domain_error", "modular_j requires Im(tau) > 0");
  Complex const q = std::exp(Complex(0.0, 2.0 * std::numbers::pi) * tau);
  Complex e4_sum = 0.0;
  Complex eta24 = 1.0;
  Complex qn = q;
  for (int n = 1; n < 10000; ++n) {
    double const n3 = static_cast<double>(n) * n * n;
    Complex const one_minus = 1.0 - qn;
    e4_sum += n3 * qn / one_minus;
    eta24 *= std::pow(one_minus, 24);
    if (std::abs(qn) * n3 < 1e-20) break;
    qn *= q;
  }
  Complex const e4 = 1.0 + 240.0 * e4_sum;
  Complex const discriminant = q * eta24;
  return e4 * e4 * e4 / discriminant;
}

Complex reduce_to_fundamental_domain(Complex tau, Sl2z* transform) {
  if (!(tau.imag() > 0.0)) throw Error("domain_error", "reduction requires Im(tau) > 0");
  Sl2z m;
  auto apply = [&m](long a, long b, long c, long d) {
    Sl2z r;
    r.a = a * m.a + b * m.c;
    r.b = a * m.b + b * m.d;
    r.c = c * m.a + d * m.c;
    r.d = c * m.b + d * m.d;
    m = r;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    double shift = std::round(tau.real());
    if (shift != 0.0) {
      tau -= shift;
      apply(1, -static_cast<long>(shift), 0, 1);
    }
    if (std::norm(tau) < 1.0 - 1e-14) {
      tau = -1.0 / tau;
      apply(0, -1, 1, 0);
    } else {
      break;
    }
  }
  if (transform) *transform = m;
  return tau;
}

std::array<Complex, 3> depressed_cubic_roots(Complex a, Complex b) {
  Complex const d0 = -3.0 * a;
  Complex const d1 = 27.0 * b;
  Complex const disc = std::sqrt(d1 * d1 - 4.0 * d0 * d0 * d0);
  Complex cc = (std::abs(d1 + disc) >= std::abs(d1 - disc)) ? (d1 + disc) / 2.0 : (d1 - disc) / 2.0;
  std::array<Complex, 3> roots{};
  if (std::abs(cc) == 0.0) return roots;  // a = b = 0: triple root at 0
  Complex const c = std::pow(cc, 1.0 / 3.0);
  Complex const xi(-0.5, std::sqrt(3.0) / 2.0);
  Complex xik = 1.0;
  for (auto& r : roots) {
    Complex ck = xik * c;
    r = -(ck + d0 / ck) / 3.0;
    xik *= xi;
  }
  auto min_gap = [](std::array<Complex, 3> const& r) {
    return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
  };
  std::array<Complex, 3> polished = roots;
  for (auto& r : polished) {
    for (int it = 0; it < 3; ++it) {
      Complex f = (r * r + a) * r + b;
      Complex df = 3.0 * r * r + a;
      if (std::abs(df) == 0.0) break;
      Complex next = r - f / df;
      if (std::abs((next * next + a) * next + b) >= std::abs(f)) break;
      r = next;
    }
  }
  // Near a double root Newton can hop onto the neighbouring root.
  return min_gap(polished) >= 0.5 * min_gap(roots) ? polished : roots;
}

}  // namespace k3c
