#pragma once

#include <array>
#include <complex>

namespace k3c {

using Complex = std::complex<double>;

// Carlson's symmetric integral R_F(x, y, z) = 1/2 ∫_0^∞ dt / sqrt((t+x)(t+y)(t+z)),
// by duplication. Arguments must lie in C \ (-∞, 0) with at most one zero.
Complex carlson_rf(Complex x, Complex y, Complex z);

// Klein's j-invariant from q-series: j = E4^3 / Δ with Δ as the eta product.
Complex modular_j(Complex tau);

// SL(2, Z) element acting on a period basis (ω1, ω2) as
// (ω2', ω1') = (a ω2 + b ω1, c ω2 + d ω1), hence on τ = ω2/ω1 by Möbius.
struct Sl2z {
  long a = 1, b = 0, c = 0, d = 1;
};

// Reduces τ (Im τ > 0) to the standard fundamental domain; returns the
// reduced τ and the accumulated transform.
Complex reduce_to_fundamental_domain(Complex tau, Sl2z* transform = nullptr);

// Roots of x^3 + a x + b, polished by Newton steps.
std::array<Complex, 3> depressed_cubic_roots(Complex a, Complex b);

}  // namespace k3c
