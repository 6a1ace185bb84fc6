#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "k3c/elliptic.hpp"
#include "k3c/polynomial.hpp"

namespace k3c {

inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

enum class Chart { Affine, Infinity };
std::string to_string(Chart c);

enum class KodairaKind { I, II, III, IV, IStar, IVStar, IIIStar, IIStar };

struct KodairaType {
  KodairaKind kind = KodairaKind::I;
  int n = 0;  // subscript for I_n and I*_n

  std::string name() const;
  int euler_number() const;
  friend bool operator==(KodairaType const&, KodairaType const&) = default;
};

// Kodaira type of a minimal fiber from vanishing orders of A, B and
// Δ = 4A^3 + 27B^2 (kInfiniteOrder for an identically zero coefficient).
KodairaType classify_kodaira(int ord_a, int ord_b, int ord_delta);

// y^2 = x^3 + A(z) x + B(z) over P^1 with deg A <= 8, deg B <= 12. In the
// chart w = 1/z the coefficients are w^8 A(1/w) and w^12 B(1/w).
class WeierstrassFamily {
 public:
  static constexpr int kWeightA = 8;
  static constexpr int kWeightB = 12;

  WeierstrassFamily(ExactPolynomial a, ExactPolynomial b);

  ExactPolynomial const& a() const { return a_; }
  ExactPolynomial const& b() const { return b_; }
  ExactPolynomial a(Chart c) const;
  ExactPolynomial b(Chart c) const;

 private:
  ExactPolynomial a_;
  ExactPolynomial b_;
};

// (1 - s) F0 + s F1 coefficientwise.
WeierstrassFamily interpolate(WeierstrassFamily const& f0, WeierstrassFamily const& f1, Rational const& s);

struct DiscriminantInfo {
  ExactPolynomial affine;  // 4A^3 + 27B^2
  int affine_degree = 0;
  int order_at_infinity = 0;  // 24 - affine_degree
};

DiscriminantInfo discriminant(WeierstrassFamily const& f);

struct SingularFiber {
  Chart chart = Chart::Affine;
  Complex location;  // affine coordinate; w = 0 for the point at infinity
  int ord_a = 0;
  int ord_b = 0;
  int ord_delta = 0;
  KodairaType type;

  bool at_infinity() const { return chart == Chart::Infinity; }
  int euler_number() const { return type.euler_number(); }
};

struct FiberSearchOptions {
  double cluster_tolerance = 1e-8;
};

// Vanishing orders are exact (square-free splitting over Q(i)); only the
// root locations are numerical.
std::vector<SingularFiber> singular_fibers(WeierstrassFamily const& f, FiberSearchOptions const& options = {});
SingularFiber fiber_at(WeierstrassFamily const& f, GaussRational const& z0);
SingularFiber fiber_at_infinity(WeierstrassFamily const& f);
int euler_sum(std::vector<SingularFiber> const& fibers);

// Periods of dx/y on y^2 = x^3 + a x + b, reduced so that tau = omega2/omega1
// lies in the standard fundamental domain.
struct FiberPeriods {
  Complex omega1;
  Complex omega2;
  Complex tau;
  double j_mismatch = 0.0;  // |j(tau) - j(a, b)| / (1 + |j(a, b)|)
  bool fallback_used = false;
};

struct PeriodOptions {
  double j_tolerance = 1e-6;
  // Testing hook: skip the R_F route and use path integration directly.
  bool force_path_integration = false;
};

FiberPeriods fiber_periods(Complex a, Complex b, PeriodOptions const& options = {});

Complex algebraic_j(Complex a, Complex b);

// Period 2 ∫ dx/y over the cycle around [from, to], `third` being the
// remaining root. Defined up to sign.
Complex carlson_period(Complex from, Complex to, Complex third);
Complex path_integrated_period(Complex from, Complex to, Complex third);

// ρ = Im(ω2 · conj(ω1)) on both charts, refusing points closer than
// `min_distance` to a singular fiber.
class DensityField {
 public:
  DensityField(WeierstrassFamily const& f, std::vector<SingularFiber> fibers, double min_distance = 1e-12,
               PeriodOptions options = {});
  explicit DensityField(WeierstrassFamily const& f);

  double density(Chart c, Complex z) const;
  FiberPeriods periods(Chart c, Complex z) const;
  std::vector<Complex> const& punctures(Chart c) const { return c == Chart::Affine ? affine_punct_ : infinity_punct_; }
  std::vector<SingularFiber> const& fibers() const { return fibers_; }
  double distance_to_puncture(Chart c, Complex z) const;

 private:
  NumericPolynomial a_[2];
  NumericPolynomial b_[2];
  std::vector<SingularFiber> fibers_;
  std::vector<Complex> affine_punct_;
  std::vector<Complex> infinity_punct_;
  double min_distance_;
  PeriodOptions options_;
};

double metric_density(WeierstrassFamily const& f, Complex z);

// Analytic continuation of the period basis around a circle. `matrix` maps
// the initial basis to the continued one: Ω_end = matrix · Ω_start.
struct LoopMonodromy {
  std::array<std::array<long, 2>, 2> matrix{};
  // Distance from the nearest integers of the predicted coordinates, before
  // rounding: at the closing step, and the worst over the other steps.
  double final_rounding_deviation = 0.0;
  double max_step_deviation = 0.0;
  int steps = 0;
};

LoopMonodromy loop_monodromy(DensityField const& field, Chart chart, Complex center, double radius, int min_steps = 1024);

}  // namespace k3c
