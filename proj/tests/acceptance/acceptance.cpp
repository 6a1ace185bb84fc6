// Acceptance checks: one PASS/FAIL line per criterion, each with a time
// limit. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "elliptic_oracle.hpp"
#include "k3c/collapse_map.hpp"
#include "k3c/elliptic.hpp"
#include "k3c/error.hpp"
#include "k3c/io.hpp"
#include "k3c/lattice.hpp"
#include "k3c/mesh.hpp"
#include "k3c/metric_space.hpp"
#include "k3c/period_domain.hpp"
#include "k3c/weierstrass.hpp"
#include "oracles.hpp"

#ifndef K3C_TEST_DATA_DIR
#error "K3C_TEST_DATA_DIR must be defined"
#endif

using namespace k3c;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void check(bool ok, std::string const& what) {
    if (ok) return;
    failed += (pass ? "" : "; ") + what;
    pass = false;
  }
};

std::string data(std::string const& name) { return std::string(K3C_TEST_DATA_DIR) + "/" + name; }

ExactPolynomial poly(std::initializer_list<std::pair<std::size_t, int>> terms) {
  ExactPolynomial p;
  for (auto [deg, c] : terms) p = p + ExactPolynomial::monomial(GaussRational(c), deg);
  return p;
}

WeierstrassFamily random_family(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> u(-999, 999);
  auto coeffs = [&](std::size_t n) {
    std::vector<GaussRational> c(n);
    for (auto& x : c) x = GaussRational(Rational(u(rng), 1000), Rational(u(rng), 1000));
    if (c.back().is_zero()) c.back() = GaussRational(1);
    return ExactPolynomial(c);
  };
  return WeierstrassFamily(coeffs(9), coeffs(13));
}

bool isotropic_primitive_columns(Lattice const& l, IntMatrix const& g) {
  for (std::size_t i = 0; i < g.cols(); ++i) {
    if (gcd_of(g.column(i)) != 1) return false;
    for (std::size_t j = 0; j < g.cols(); ++j)
      if (l.pairing(g.column(i), g.column(j)) != 0) return false;
  }
  return true;
}

// 1. Lattice suite.
void lattice_suite(Outcome& out) {
  Lattice k3 = build_k3_lattice();
  Signature s = signature(k3);
  out.check(s == Signature{3, 19}, "signature(K3)");
  out.check(k3.rank() == 22, "rank(K3)");
  out.check(abs(lattice_determinant(k3)) == 1, "|det K3| = 1");
  std::mt19937_64 rng(20241017);
  int quotients = 0;
  for (int d = 1; d <= 10; ++d) {
    PolarizedLattice p = build_polarized_lattice(d);
    out.check(signature(p.lattice) == Signature{2, 19}, "signature(L2d), d=" + std::to_string(d));
    out.check(p.lattice.rank() == 21, "rank(L2d), d=" + std::to_string(d));
    for (int k = 0; k < 5; ++k) {
      IntVector x = oracle::random_isotropic_in_l2d(k3, d, rng);
      auto c = solve_full_column_rank(to_rational(p.embedding), to_rational(x));
      if (!c) {
        out.check(false, "isotropic vector outside L2d");
        continue;
      }
      IntVector e;
      for (auto const& q : *c) e.push_back(boost::multiprecision::numerator(q));
      bool ok = p.lattice.pairing(e, e) == 0 && is_primitive(p.lattice, e) &&
                signature(quotient_by_isotropic(p.lattice, e).quotient()) == Signature{1, 18};
      out.check(ok, "quotient signature (1,18), d=" + std::to_string(d));
      quotients += ok;
    }
  }
  out.detail << quotients << "/50 isotropic quotients of signature (1,18)";
}

// 2. Degeneration classifier.
void degeneration_suite(Outcome& out) {
  MonodromyData id = monodromy_log(IntMatrix::identity(22), build_k3_lattice().gram());
  out.check(classify_degeneration(id) == DegenerationType::TypeI, "identity is Type I");

  MonodromyData el = monodromy_log(IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{0, 1}, {-1, 0}});
  out.check(classify_degeneration(el) == DegenerationType::TypeII, "elementary unipotent is Type II");

  // Flag example on U ⊕ U: e = U1.e, v = U2.e + U2.f.
  Lattice uu(direct_sum({hyperbolic_plane_gram(), hyperbolic_plane_gram()}));
  IntMatrix t3 = oracle::exp_nilpotent(oracle::wedge_operator(uu, {1, 0, 0, 0}, {0, 0, 1, 1}));
  MonodromyData m3 = monodromy_log(t3, uu.gram());
  out.check(classify_degeneration(m3) == DegenerationType::TypeIII, "flag matrix is Type III");
  BoundaryStratumDescriptor l3 = limit_boundary_stratum(m3, uu);
  out.check(l3.kind == StratumKind::Line && isotropic_primitive_columns(uu, l3.generators), "image(N^2) line");

  Lattice k3 = build_k3_lattice();
  MonodromyData k2 = monodromy_log(oracle::k3_type2_monodromy(k3), k3.gram());
  BoundaryStratumDescriptor p2 = limit_boundary_stratum(k2, k3);
  out.check(classify_degeneration(k2) == DegenerationType::TypeII && p2.kind == StratumKind::Plane &&
                p2.generators.cols() == 2 && isotropic_primitive_columns(k3, p2.generators),
            "K3 Type II plane");
  MonodromyData k3m = monodromy_log(oracle::k3_type3_monodromy(k3), k3.gram());
  BoundaryStratumDescriptor l = limit_boundary_stratum(k3m, k3);
  out.check(classify_degeneration(k3m) == DegenerationType::TypeIII && l.kind == StratumKind::Line &&
                isotropic_primitive_columns(k3, l.generators),
            "K3 Type III line");
  out.detail << "I / II / III recovered; strata isotropic with primitive integral generators";
}

// 3. Fibration suite.
void fibration_suite(Outcome& out) {
  std::mt19937_64 rng(3);
  int good = 0;
  for (int k = 0; k < 20; ++k) {
    int sum = euler_sum(singular_fibers(random_family(rng)));
    out.check(sum == 24, "random family " + std::to_string(k) + " Euler sum " + std::to_string(sum));
    good += sum == 24;
  }
  auto twos = singular_fibers(WeierstrassFamily(ExactPolynomial(), poly({{12, 1}, {1, -1}})));
  bool two_ok = twos.size() == 12 && euler_sum(twos) == 24;
  for (auto const& s : twos) two_ok = two_ok && s.type.name() == "II" && s.ord_b == 1 && s.ord_delta == 2;
  out.check(two_ok, "designed type II family");
  auto threes = singular_fibers(WeierstrassFamily(poly({{8, 1}, {1, -1}}), ExactPolynomial()));
  bool three_ok = threes.size() == 8 && euler_sum(threes) == 24;
  for (auto const& s : threes) three_ok = three_ok && s.type.name() == "III" && s.ord_a == 1 && s.ord_delta == 3;
  out.check(three_ok, "designed type III family");
  out.detail << good << "/20 random families sum to 24; 12 x II and 8 x III";
}

// 4. Period consistency.
void period_suite(Outcome& out) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> mag(-2.0, 2.0);
  std::uniform_int_distribution<int> u(-7, 7);
  int matched = 0, flagged = 0, unflagged = 0;
  double worst_rho = 0.0, worst_g = 0.0;
  for (int k = 0; k < 100; ++k) {
    double const s = std::pow(10.0, mag(rng));
    Complex a = s * Complex(n(rng), n(rng)), b = std::pow(s, 1.5) * Complex(n(rng), n(rng));
    FiberPeriods p;
    try {
      p = fiber_periods(a, b);
    } catch (Error const& e) {
      if (e.code() == "branch_tracking_failure") {
        ++flagged;
        continue;
      }
      throw;
    }
    if (p.j_mismatch < 1e-6) ++matched;
    else if (p.fallback_used) ++flagged;
    else ++unflagged;
    double const rho = (p.omega2 * std::conj(p.omega1)).imag();
    out.check(p.tau.imag() > 0.0 && rho > 0.0, "Im tau > 0 and rho > 0");
    auto inv = oracle::lattice_invariants(p.omega1, p.tau);
    worst_g = std::max(worst_g, std::max(std::abs(inv.g2 + 4.0 * a) / (1 + std::abs(a)),
                                         std::abs(inv.g3 + 4.0 * b) / (1 + std::abs(b))));
    for (int t = 0; t < 10;) {
      long aa = u(rng), bb = u(rng), cc = u(rng), dd = u(rng);
      if (aa * dd - bb * cc != 1) continue;
      Complex w2 = double(aa) * p.omega2 + double(bb) * p.omega1, w1 = double(cc) * p.omega2 + double(dd) * p.omega1;
      worst_rho = std::max(worst_rho, std::abs((w2 * std::conj(w1)).imag() - rho) / rho);
      ++t;
    }
  }
  out.check(matched >= 99, "j matched in " + std::to_string(matched) + "/100");
  out.check(unflagged == 0, "unflagged j failures");
  out.check(worst_rho <= 1e-10, "rho SL2Z invariance");
  out.check(worst_g < 1e-8, "Eisenstein cross-check");
  char buf[160];
  std::snprintf(buf, sizeof buf, "j matched %d/100, flagged %d, max rho drift %.1e, Eisenstein residual %.1e", matched,
                flagged, worst_rho, worst_g);
  out.detail << buf;
}

// 5. Monodromy loop around an I1 fiber.
void loop_suite(Outcome& out) {
  std::mt19937_64 rng(5);
  WeierstrassFamily f = random_family(rng);
  DensityField field(f);
  auto const& fibers = field.fibers();
  SingularFiber const& s = fibers.front();
  out.check(s.type.name() == "I1", "first fiber is I1");
  double nearest = INFINITY;
  for (auto const& o : fibers)
    if (&o != &s && !o.at_infinity()) nearest = std::min(nearest, std::abs(o.location - s.location));
  LoopMonodromy m = loop_monodromy(field, Chart::Affine, s.location, nearest / 3);
  auto const& t = m.matrix;
  long const tr = t[0][0] + t[1][1], det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
  // With det 1 and trace 2, T - I has rank 1 exactly when T != I.
  bool const nonidentity = t[0][1] != 0 || t[1][0] != 0 || t[0][0] != 1;
  out.check(det == 1, "det 1");
  out.check(tr == 2, "trace 2");
  out.check(nonidentity, "rank(T - I) = 1");
  out.check(m.final_rounding_deviation < 1e-6, "pre-rounding deviation");
  char buf[200];
  std::snprintf(buf, sizeof buf, "T = [[%ld,%ld],[%ld,%ld]], pre-rounding deviation %.1e, worst step %.1e, %d steps",
                t[0][0], t[0][1], t[1][0], t[1][1], m.final_rounding_deviation, m.max_step_deviation, m.steps);
  out.detail << buf;
}

// 6. Metric convergence.
void convergence_suite(Outcome& out) {
  WeierstrassFamily f = io::family_from_json(io::read_json_file(data("generic.json")));
  MeshOptions o;
  o.sample_grid = 10;
  double d[3];
  int const res[3] = {40, 80, 160};
  for (int k = 0; k < 3; ++k) {
    o.resolution = res[k];
    d[k] = mesh_metric(f, o).raw_diameter;
  }
  double const g1 = std::abs(d[1] - d[0]) / d[1], g2 = std::abs(d[2] - d[1]) / d[2];
  out.check(g1 < 0.02, "gap N -> 2N");
  out.check(g2 < 0.01, "gap 2N -> 4N");
  o.resolution = 80;
  o.puncture_radius = 5e-4;
  double const half = mesh_metric(f, o).raw_diameter;
  double const gp = std::abs(half - d[1]) / d[1];
  out.check(gp < 0.01, "puncture halving");
  // Reported only: radii comparable to the grid spacing remove whole nodes.
  o.puncture_radius = 0.04;
  double const coarse = mesh_metric(f, o).raw_diameter;
  o.puncture_radius = 0.02;
  double const coarse_half = mesh_metric(f, o).raw_diameter;
  char buf[260];
  std::snprintf(buf, sizeof buf,
                "diam %.5f / %.5f / %.5f, gaps %.2f%% / %.2f%%, puncture halving %.3f%% (unasserted 0.04 -> 0.02: %.2f%%)",
                d[0], d[1], d[2], 100 * g1, 100 * g2, 100 * gp, 100 * std::abs(coarse_half - coarse) / coarse_half);
  out.detail << buf;
}

// 7. GH sanity.
void gh_suite(Outcome& out) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 12);
  auto random_space = [&] {
    int m = size(rng);
    Eigen::MatrixXd pts(m, 2);
    for (int i = 0; i < m; ++i) pts(i, 0) = n(rng), pts(i, 1) = n(rng);
    Eigen::MatrixXd dist(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dist(i, j) = (pts.row(i) - pts.row(j)).norm();
    return FiniteMetricSpace(dist);
  };
  FiniteMetricSpace self = random_space();
  out.check(gh_upper(self, self) == 0.0, "gh_upper(M, M) = 0");
  int ordered = 0;
  for (int k = 0; k < 100; ++k) {
    FiniteMetricSpace a = random_space(), b = random_space();
    bool ok = gh_lower(a, b) <= gh_upper(a, b, {50, static_cast<std::uint64_t>(k)});
    ordered += ok;
  }
  out.check(ordered == 100, "gh_lower <= gh_upper");
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.3, 0.3, 2.0;
  FiniteMetricSpace torus = flat_torus_space(FlatTorus(g), 12);
  FiniteMetricSpace point(Eigen::MatrixXd::Zero(1, 1));
  double const half = diameter(torus) / 2;
  out.check(std::abs(gh_lower(torus, point) - half) <= 1e-9 && std::abs(gh_upper(torus, point) - half) <= 1e-9,
            "torus vs point");
  out.detail << ordered << "/100 ordered pairs; torus vs point = diam/2 = " << half;
}

// 8. Quotient oracles.
void quotient_suite(Outcome& out) {
  FiniteMetricSpace sq = flat_torus_space(FlatTorus(Eigen::MatrixXd::Identity(2, 2)), 16);
  double const dsq = diameter(sq);
  out.check(std::abs(dsq - std::sqrt(0.5)) <= 1e-15, "square torus diameter");

  int const s = 64;
  FiniteMetricSpace circle = flat_torus_space(FlatTorus(Eigen::MatrixXd::Identity(1, 1)), s);
  FiniteMetricSpace folded = quotient_by_involution(circle, negation_permutation(1, s));
  double const gh = gh_upper(rescale_to_diameter_one(folded), segment_space(s / 2 + 1));
  out.check(std::abs(diameter(folded) - 0.5) <= 1e-15, "circle quotient diameter 1/2");
  out.check(gh <= 1.0 / s, "circle quotient vs segment");

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd r(4, 4);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = unit(rng);
  Eigen::MatrixXd gram = r.transpose() * r * 0.3 + Eigen::MatrixXd::Identity(4, 4) * 0.6;
  FlatTorus t(gram);
  std::uniform_int_distribution<std::size_t> idx16(0, 16 * 16 * 16 * 16 - 1);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    Eigen::VectorXd x = torus_grid_point(4, 16, idx16(rng)), y = torus_grid_point(4, 16, idx16(rng));
    double oracle = std::min(oracle::brute_torus_distance(gram, x, y, 5), oracle::brute_torus_distance(gram, x, -y, 5));
    worst = std::max(worst, std::abs(t.quotient_distance(x, y) - oracle));
  }
  // Full quotient space on a coarser 6^4 grid, against the same oracle.
  int const c = 6;
  auto sigma = negation_permutation(4, c);
  FiniteMetricSpace q = quotient_by_involution(flat_torus_space(t, c), sigma);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (i <= sigma[i]) reps.push_back(i);
  std::uniform_int_distribution<std::size_t> pick(0, reps.size() - 1);
  for (int k = 0; k < 500; ++k) {
    std::size_t a = pick(rng), b = pick(rng);
    Eigen::VectorXd x = torus_grid_point(4, c, reps[a]), y = torus_grid_point(4, c, reps[b]);
    double oracle = std::min(oracle::brute_torus_distance(gram, x, y, 5), oracle::brute_torus_distance(gram, x, -y, 5));
    worst = std::max(worst, std::abs(q(a, b) - oracle));
  }
  out.check(worst <= 1e-9, "4-torus quotient vs oracle");
  char buf[200];
  std::snprintf(buf, sizeof buf, "square diam %.15f, circle/segment GH %.1e, 4-torus max error %.1e", dsq, gh, worst);
  out.detail << buf;
}

// 9. Continuity probe.
void continuity_suite(Outcome& out) {
  PhiOptions o;
  o.mesh.resolution = 80;
  o.mesh.sample_grid = 10;
  auto constant = io::collapse_path_from_json(io::read_json_file(data("path_constant.json")));
  ProbeReport c = continuity_probe(constant, o);
  bool zeros = true;
  for (double d : c.distances) zeros = zeros && d == 0.0;
  for (double d : c.refined_distances) zeros = zeros && d == 0.0;
  out.check(zeros, "constant path distances are zero");

  WeierstrassFamily f = io::family_from_json(io::read_json_file(data("generic.json")));
  std::vector<CollapseInput> still(3, BoundaryLineInput{f, {}});
  ProbeReport cf = continuity_probe(still, o);
  bool fzeros = true;
  for (double d : cf.distances) fzeros = fzeros && d == 0.0;
  out.check(fzeros, "constant family path distances are zero");

  auto path = io::collapse_path_from_json(io::read_json_file(data("path_family.json")));
  ProbeReport r = continuity_probe(path, o);
  out.check(r.refinement_monotone, std::to_string(r.violations.size()) + " refinement violations");
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < r.distances.size(); ++k)
    if (r.distances[k] > 0)
      worst_ratio = std::max(worst_ratio, std::max(r.refined_distances[2 * k], r.refined_distances[2 * k + 1]) /
                                              r.distances[k]);
  char buf[200];
  std::snprintf(buf, sizeof buf, "constant paths exact zeros; %zu-step family path monotone, max half/full ratio %.3f",
                r.distances.size(), worst_ratio);
  out.detail << buf;
}

struct Criterion {
  int id;
  char const* name;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> const criteria{
      {1, "lattice suite", 10, lattice_suite},
      {2, "degeneration classifier", 1, degeneration_suite},
      {3, "fibration suite", 30, fibration_suite},
      {4, "period consistency", 60, period_suite},
      {5, "I1 loop monodromy", 30, loop_suite},
      {6, "metric convergence", 300, convergence_suite},
      {7, "GH sanity", 30, gh_suite},
      {8, "quotient oracles", 120, quotient_suite},
      {9, "continuity probe", 600, continuity_suite},
  };
  int failures = 0;
  for (auto const& c : criteria) {
    Outcome out;
    auto const start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (std::exception const& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) out.check(false, "time limit exceeded");
    failures += !out.pass;
    std::string text = out.detail.str();
    if (!out.pass) text += (text.empty() ? "" : " | ") + ("failed: " + out.failed);
    std::printf("%s criterion %d (%s): %s [%.2f s / %.0f s]\n", out.pass ? "PASS" : "FAIL", c.id, c.name, text.c_str(),
                secs, c.limit_seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
