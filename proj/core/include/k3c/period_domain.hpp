#pragma once

#include <complex>
#include <string>
#include <vector>

#include "k3c/exact.hpp"
#include "k3c/lattice.hpp"

namespace k3c {

// w = re + i*im in L ⊗ C. Exact points use tolerance 0.
struct PeriodPoint {
  RatVector re;
  RatVector im;
  double tolerance = 0.0;
};

struct DomainMembership {
  bool inside = false;
  Rational self_pairing_re;  // Re (w, w) = (x, x) - (y, y)
  Rational self_pairing_im;  // Im (w, w) = 2 (x, y)
  Rational hermitian;        // (w, w̄) = (x, x) + (y, y)
};

DomainMembership is_in_domain(Lattice const& l, PeriodPoint const& p);

struct MonodromyData {
  IntMatrix monodromy;     // T
  IntMatrix form;          // bilinear form preserved by T
  int unipotency_index;    // smallest m with T^m unipotent
  RatMatrix log;           // N = log(T^m)
};

inline constexpr int kDefaultUnipotencyBound = 2 * 3 * 5 * 7 * 11;

// `form` may be symmetric (monodromy on a lattice) or alternating
// (monodromy on H^1 of an elliptic fiber).
MonodromyData monodromy_log(IntMatrix const& t, IntMatrix const& form, int max_index = kDefaultUnipotencyBound);

enum class DegenerationType { TypeI, TypeII, TypeIII };
std::string to_string(DegenerationType t);

DegenerationType classify_degeneration(MonodromyData const& m);

// Type II -> saturated image(N) (isotropic plane); Type III -> saturated
// image(N^2) (isotropic line). The form of `l` must be the one preserved by T.
BoundaryStratumDescriptor limit_boundary_stratum(MonodromyData const& m, Lattice const& l);

// Saturated integral basis of the column space of a rational matrix.
IntMatrix saturated_image(RatMatrix const& m);

}  // namespace k3c
