#include "k3c/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "k3c/error.hpp"

namespace k3c {

namespace {

std::string describe(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

// Re-expansion with weight k: w^k p(1/w), i.e. the coefficient list reversed
// and padded to length k + 1.
ExactPolynomial reverse_with_weight(ExactPolynomial const& p, int weight) {
  if (p.is_zero()) return p;
  std::vector<GaussRational> c(weight + 1, GaussRational(0));
  for (int k = 0; k <= p.degree(); ++k) c[weight - k] = p.coefficients()[k];
  return ExactPolynomial(std::move(c));
}

int infinity_order(ExactPolynomial const& p, int weight) { return p.is_zero() ? kInfiniteOrder : weight - p.degree(); }

struct OrderPiece {
  int order;
  ExactPolynomial factor;
};

// Splits the square-free p into factors on whose roots `coeff` vanishes to a
// constant order.
std::vector<OrderPiece> split_by_order(ExactPolynomial const& p, ExactPolynomial const& coeff) {
  if (coeff.is_zero()) return {{kInfiniteOrder, p}};
  std::vector<OrderPiece> out;
  ExactPolynomial g = p;
  ExactPolynomial deriv = coeff;
  for (int j = 0;; ++j) {
    ExactPolynomial h = gcd(g, deriv);
    ExactPolynomial piece = exact_quotient(g, h);
    if (piece.degree() > 0) out.push_back({j, monic(piece)});
    if (h.degree() <= 0) break;
    g = h;
    deriv = deriv.derivative();
  }
  return out;
}

void check_minimal(SingularFiber const& f) {
  if (f.ord_a >= 4 && f.ord_b >= 6)
    throw Error("non_minimal", "Weierstrass model is not minimal (ord A >= 4 and ord B >= 6)",
                f.at_infinity() ? std::string("infinity") : describe(f.location));
}

std::array<double, 2> real_coordinates(Complex x, Complex w1, Complex w2) {
  // Solve x = p w1 + q w2 with p, q real.
  double det = w1.real() * w2.imag() - w2.real() * w1.imag();
  double p = (x.real() * w2.imag() - w2.real() * x.imag()) / det;
  double q = (w1.real() * x.imag() - x.real() * w1.imag()) / det;
  return {p, q};
}

// Gauss-Legendre 8-point nodes/weights on [-1, 1].
constexpr double kGlNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                  0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

std::string to_string(Chart c) { return c == Chart::Affine ? "affine" : "infinity"; }

std::string KodairaType::name() const {
  switch (kind) {
    case KodairaKind::I: return "I" + std::to_string(n);
    case KodairaKind::II: return "II";
    case KodairaKind::III: return "III";
    case KodairaKind::IV: return "IV";
    case KodairaKind::IStar: return "I" + std::to_string(n) + "*";
    case KodairaKind::IVStar: return "IV*";
    case KodairaKind::IIIStar: return "III*";
    case KodairaKind::IIStar: return "II*";
  }
  return "?";
}

int KodairaType::euler_number() const {
  switch (kind) {
    case KodairaKind::I: return n;
    case KodairaKind::II: return 2;
    case KodairaKind::III: return 3;
    case KodairaKind::IV: return 4;
    case KodairaKind::IStar: return n + 6;
    case KodairaKind::IVStar: return 8;
    case KodairaKind::IIIStar: return 9;
    case KodairaKind::IIStar: return 10;
  }
  return 0;
}

KodairaType classify_kodaira(int a, int b, int d) {
  auto inconsistent = [&]() {
    return Error("inconsistent_orders", "vanishing orders (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                                            std::to_string(d) + ") match no Kodaira type");
  };
  if (d <= 0 || d == kInfiniteOrder) throw Error("not_singular", "discriminant does not vanish to finite positive order");
  if (a >= 4 && b >= 6) throw Error("non_minimal", "Weierstrass model is not minimal");
  if (a == 0 || b == 0) {
    if (a != 0 || b != 0) throw inconsistent();
    return {KodairaKind::I, d};
  }
  if (b == 1 && d == 2) return {KodairaKind::II, 0};
  if (a == 1 && b >= 2 && d == 3) return {KodairaKind::III, 0};
  if (a >= 2 && b == 2 && d == 4) return {KodairaKind::IV, 0};
  if (a >= 2 && b >= 3 && d == 6) return {KodairaKind::IStar, 0};
  if (a == 2 && b == 3 && d > 6) return {KodairaKind::IStar, d - 6};
  if (a >= 3 && b == 4 && d == 8) return {KodairaKind::IVStar, 0};
  if (a == 3 && b >= 5 && d == 9) return {KodairaKind::IIIStar, 0};
  if (a >= 4 && b == 5 && d == 10) return {KodairaKind::IIStar, 0};
  throw inconsistent();
}

WeierstrassFamily::WeierstrassFamily(ExactPolynomial a, ExactPolynomial b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.degree() > kWeightA) throw Error("degree_exceeded", "deg A exceeds 8");
  if (b_.degree() > kWeightB) throw Error("degree_exceeded", "deg B exceeds 12");
  ExactPolynomial four(std::vector<GaussRational>{GaussRational(4)});
  ExactPolynomial tw7(std::vector<GaussRational>{GaussRational(27)});
  if ((four * a_ * a_ * a_ + tw7 * b_ * b_).is_zero())
    throw Error("degenerate_discriminant", "discriminant 4A^3 + 27B^2 vanishes identically");
}

ExactPolynomial WeierstrassFamily::a(Chart c) const { return c == Chart::Affine ? a_ : reverse_with_weight(a_, kWeightA); }
ExactPolynomial WeierstrassFamily::b(Chart c) const { return c == Chart::Affine ? b_ : reverse_with_weight(b_, kWeightB); }

WeierstrassFamily interpolate(WeierstrassFamily const& f0, WeierstrassFamily const& f1, Rational const& s) {
  GaussRational gs(s), gr(Rational(1) - s);
  return WeierstrassFamily(gr * f0.a() + gs * f1.a(), gr * f0.b() + gs * f1.b());
}

DiscriminantInfo discriminant(WeierstrassFamily const& f) {
  ExactPolynomial const& a = f.a();
  ExactPolynomial const& b = f.b();
  DiscriminantInfo out;
  out.affine = GaussRational(4) * (a * a * a) + GaussRational(27) * (b * b);
  if (out.affine.is_zero()) throw Error("degenerate_discriminant", "discriminant vanishes identically");
  out.affine_degree = out.affine.degree();
  out.order_at_infinity = 2 * WeierstrassFamily::kWeightB - out.affine_degree;
  return out;
}

SingularFiber fiber_at(WeierstrassFamily const& f, GaussRational const& z0) {
  SingularFiber s;
  s.chart = Chart::Affine;
  s.location = z0.to_complex();
  int oa = order_at(f.a(), z0);
  int ob = order_at(f.b(), z0);
  s.ord_a = oa < 0 ? kInfiniteOrder : oa;
  s.ord_b = ob < 0 ? kInfiniteOrder : ob;
  s.ord_delta = order_at(discriminant(f).affine, z0);
  if (s.ord_delta == 0) throw Error("not_singular", "fiber is smooth at this point", describe(s.location));
  check_minimal(s);
  s.type = classify_kodaira(s.ord_a, s.ord_b, s.ord_delta);
  return s;
}

SingularFiber fiber_at_infinity(WeierstrassFamily const& f) {
  SingularFiber s;
  s.chart = Chart::Infinity;
  s.location = 0.0;
  s.ord_a = infinity_order(f.a(), WeierstrassFamily::kWeightA);
  s.ord_b = infinity_order(f.b(), WeierstrassFamily::kWeightB);
  s.ord_delta = discriminant(f).order_at_infinity;
  if (s.ord_delta == 0) throw Error("not_singular", "fiber at infinity is smooth", "infinity");
  check_minimal(s);
  s.type = classify_kodaira(s.ord_a, s.ord_b, s.ord_delta);
  return s;
}

std::vector<SingularFiber> singular_fibers(WeierstrassFamily const& f, FiberSearchOptions const& options) {
  DiscriminantInfo disc = discriminant(f);
  std::vector<SingularFiber> out;
  std::vector<ExactPolynomial> parts = squarefree_decomposition(disc.affine);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].degree() <= 0) continue;
    int const ord_delta = static_cast<int>(k) + 1;
    for (auto const& pa : split_by_order(parts[k], f.a())) {
      for (auto const& pab : split_by_order(pa.factor, f.b())) {
        for (Complex z : polynomial_roots(to_numeric(pab.factor))) {
          SingularFiber s;
          s.chart = Chart::Affine;
          s.location = z;
          s.ord_a = pa.order;
          s.ord_b = pab.order;
          s.ord_delta = ord_delta;
          check_minimal(s);
          s.type = classify_kodaira(s.ord_a, s.ord_b, s.ord_delta);
          out.push_back(s);
        }
      }
    }
  }

  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      double scale = 1.0 + std::max(std::abs(out[i].location), std::abs(out[j].location));
      if (std::abs(out[i].location - out[j].location) <= options.cluster_tolerance * scale)
        throw Error("ambiguous_clustering", "distinct singular fibers closer than the cluster tolerance",
                    describe(out[i].location));
    }

  std::sort(out.begin(), out.end(), [](SingularFiber const& x, SingularFiber const& y) {
    if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
    return x.location.imag() < y.location.imag();
  });
  if (disc.order_at_infinity > 0) out.push_back(fiber_at_infinity(f));
  return out;
}

int euler_sum(std::vector<SingularFiber> const& fibers) {
  int s = 0;
  for (auto const& f : fibers) s += f.euler_number();
  return s;
}

Complex algebraic_j(Complex a, Complex b) {
  Complex a3 = 4.0 * a * a * a;
  return 1728.0 * a3 / (a3 + 27.0 * b * b);
}

Complex carlson_period(Complex from, Complex to, Complex third) {
  // With x = from + (to - from) u the cycle integral reduces to
  // 4 R_F(0, (third - to)/(third - from), 1) / sqrt(third - from).
  Complex ratio = (third - to) / (third - from);
  return 4.0 * carlson_rf(0.0, ratio, 1.0) / std::sqrt(third - from);
}

Complex path_integrated_period(Complex from, Complex to, Complex third) {
  // x(θ) = from + D (1 - cos θ)/2 turns dx/y into dθ / sqrt(third - x(θ)),
  // smooth on [0, π]; the square root is continued along the path.
  Complex const d = to - from;
  auto integrate = [&](int panels) {
    Complex sum = 0.0;
    Complex prev = std::sqrt(third - from);
    double const h = std::numbers::pi / panels;
    for (int p = 0; p < panels; ++p) {
      double const mid = (p + 0.5) * h;
      for (int k = 0; k < 8; ++k) {
        double theta = mid + 0.5 * h * kGlNodes[k];
        Complex x = from + d * (1.0 - std::cos(theta)) / 2.0;
        Complex s = std::sqrt(third - x);
        if (std::abs(s - prev) > std::abs(s + prev)) s = -s;
        prev = s;
        sum += 0.5 * h * kGlWeights[k] / s;
      }
    }
    return 2.0 * sum;
  };
  Complex last = integrate(16);
  for (int panels = 32; panels <= 1 << 14; panels *= 2) {
    Complex next = integrate(panels);
    if (std::abs(next - last) <= 1e-14 * std::abs(next)) return next;
    last = next;
  }
  throw Error("quadrature_not_converged", "path integration of dx/y did not converge");
}

namespace {

FiberPeriods normalize_basis(Complex w1, Complex w2) {
  Complex tau = w2 / w1;
  if (tau.imag() < 0.0) {
    w2 = -w2;
    tau = -tau;
  }
  if (!(tau.imag() > 0.0)) throw Error("degenerate_periods", "periods are real-linearly dependent");
  Sl2z m;
  reduce_to_fundamental_domain(tau, &m);
  // (ω2', ω1') = (a ω2 + b ω1, c ω2 + d ω1)
  Complex n2 = static_cast<double>(m.a) * w2 + static_cast<double>(m.b) * w1;
  Complex n1 = static_cast<double>(m.c) * w2 + static_cast<double>(m.d) * w1;
  FiberPeriods out;
  out.omega1 = n1;
  out.omega2 = n2;
  out.tau = n2 / n1;
  return out;
}

}  // namespace

FiberPeriods fiber_periods(Complex a, Complex b, PeriodOptions const& options) {
  Complex const a3 = 4.0 * a * a * a;
  Complex const b2 = 27.0 * b * b;
  if (std::abs(a3 + b2) <= 1e-13 * (std::abs(a3) + std::abs(b2)) || (a == 0.0 && b == 0.0))
    throw Error("singular_fiber", "fiber is singular (4a^3 + 27b^2 = 0)", describe(a) + ";" + describe(b));

  std::array<Complex, 3> roots = depressed_cubic_roots(a, b);
  std::sort(roots.begin(), roots.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  // Branch policy: the root at the widest triangle angle is the shared
  // endpoint, so no root lies on either integration segment.
  std::size_t mid = 0;
  double best_cos = 2.0;
  for (std::size_t i = 0; i < 3; ++i) {
    Complex u = roots[(i + 1) % 3] - roots[i];
    Complex v = roots[(i + 2) % 3] - roots[i];
    double c = (u * std::conj(v)).real() / (std::abs(u) * std::abs(v));
    if (c < best_cos) {
      best_cos = c;
      mid = i;
    }
  }
  Complex const e2 = roots[mid];
  Complex const e1 = roots[(mid + 1) % 3];
  Complex const e3 = roots[(mid + 2) % 3];
  Complex const j_alg = algebraic_j(a, b);

  auto evaluate = [&](bool path) {
    Complex w1 = path ? path_integrated_period(e2, e1, e3) : carlson_period(e2, e1, e3);
    Complex w2 = path ? path_integrated_period(e2, e3, e1) : carlson_period(e2, e3, e1);
    FiberPeriods p = normalize_basis(w1, w2);
    p.j_mismatch = std::abs(modular_j(p.tau) - j_alg) / (1.0 + std::abs(j_alg));
    p.fallback_used = path;
    return p;
  };

  if (!options.force_path_integration) {
    FiberPeriods p = evaluate(false);
    if (p.j_mismatch < options.j_tolerance) return p;
  }
  FiberPeriods p = evaluate(true);
  if (!(p.j_mismatch < options.j_tolerance))
    throw Error("branch_tracking_failure", "period lattice does not reproduce the j-invariant",
                describe(a) + ";" + describe(b));
  return p;
}

DensityField::DensityField(WeierstrassFamily const& f, std::vector<SingularFiber> fibers, double min_distance,
                           PeriodOptions options)
    : fibers_(std::move(fibers)), min_distance_(min_distance), options_(options) {
  for (Chart c : {Chart::Affine, Chart::Infinity}) {
    a_[static_cast<int>(c)] = to_numeric(f.a(c));
    b_[static_cast<int>(c)] = to_numeric(f.b(c));
  }
  for (auto const& s : fibers_) {
    if (s.at_infinity()) {
      infinity_punct_.push_back(0.0);
    } else {
      affine_punct_.push_back(s.location);
      if (std::abs(s.location) > 0.0) infinity_punct_.push_back(1.0 / s.location);
    }
  }
}

DensityField::DensityField(WeierstrassFamily const& f) : DensityField(f, singular_fibers(f)) {}

double DensityField::distance_to_puncture(Chart c, Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (Complex p : punctures(c)) d = std::min(d, std::abs(z - p));
  return d;
}

FiberPeriods DensityField::periods(Chart c, Complex z) const {
  if (distance_to_puncture(c, z) < min_distance_)
    throw Error("too_near_singular_fiber", "evaluation point is within tolerance of a singular fiber",
                to_string(c) + ":" + describe(z));
  int i = static_cast<int>(c);
  return fiber_periods(a_[i].evaluate(z), b_[i].evaluate(z), options_);
}

double DensityField::density(Chart c, Complex z) const {
  FiberPeriods p = periods(c, z);
  return (p.omega2 * std::conj(p.omega1)).imag();
}

double metric_density(WeierstrassFamily const& f, Complex z) { return DensityField(f).density(Chart::Affine, z); }

LoopMonodromy loop_monodromy(DensityField const& field, Chart chart, Complex center, double radius, int min_steps) {
  if (radius <= 0.0 || min_steps < 4) throw Error("invalid_argument", "loop radius and step count must be positive");
  auto point = [&](double theta) { return center + radius * std::exp(Complex(0.0, theta)); };
  FiberPeriods const start = field.periods(chart, point(0.0));

  // Accepted continuation history (θ, Ω1, Ω2); the next value is predicted
  // by Lagrange extrapolation through the last four nodes, then snapped to
  // the lattice at the new point. The pre-snap coordinates measure how far
  // the prediction was from an integral combination.
  struct Node {
    double theta;
    Complex w1, w2;
  };
  std::vector<Node> hist{{0.0, start.omega1, start.omega2}};
  auto predict = [&](double t) {
    std::size_t const k = std::min<std::size_t>(4, hist.size());
    Complex p1 = 0.0, p2 = 0.0;
    for (std::size_t i = hist.size() - k; i < hist.size(); ++i) {
      double l = 1.0;
      for (std::size_t j = hist.size() - k; j < hist.size(); ++j)
        if (j != i) l *= (t - hist[j].theta) / (hist[i].theta - hist[j].theta);
      p1 += l * hist[i].w1;
      p2 += l * hist[i].w2;
    }
    return std::pair{p1, p2};
  };
  auto deviation = [](std::array<double, 2> const& a, std::array<double, 2> const& b) {
    double dev = 0.0;
    for (double x : {a[0], a[1], b[0], b[1]}) dev = std::max(dev, std::abs(x - std::round(x)));
    return dev;
  };

  LoopMonodromy out;
  double const two_pi = 2.0 * std::numbers::pi;
  double const max_h = two_pi / min_steps;
  double h = max_h * 1e-3;  // low-order predictions at the start need short steps
  while (hist.back().theta < two_pi) {
    double const theta = hist.back().theta;
    double const next = std::min(theta + h, two_pi);
    bool const closing = next == two_pi;
    FiberPeriods const p = closing ? start : field.periods(chart, point(next));
    auto [q1, q2] = predict(next);
    auto c1 = real_coordinates(q1, p.omega1, p.omega2);
    auto c2 = real_coordinates(q2, p.omega1, p.omega2);
    double const dev = deviation(c1, c2);
    if (dev > 0.05 && h > 1e-9) {
      h *= 0.5;
      continue;
    }
    if (closing) {
      out.final_rounding_deviation = dev;
      out.matrix = {{{std::lround(c1[0]), std::lround(c1[1])}, {std::lround(c2[0]), std::lround(c2[1])}}};
    } else {
      out.max_step_deviation = std::max(out.max_step_deviation, dev);
    }
    hist.push_back({next, std::round(c1[0]) * p.omega1 + std::round(c1[1]) * p.omega2,
                    std::round(c2[0]) * p.omega1 + std::round(c2[1]) * p.omega2});
    ++out.steps;
    h = std::min(max_h, 2.0 * h);
  }
  return out;
}

}  // namespace k3c
