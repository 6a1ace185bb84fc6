#include "k3c/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "k3c/error.hpp"
#include "k3c/parallel.hpp"

namespace k3c {

namespace {

std::string triple(std::size_t i, std::size_t j, std::size_t k) {
  return std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k);
}

// One-sided distances from each element of `from` to the sorted set `to`.
double directed_hausdorff(std::vector<double> const& from, std::vector<double> const& to) {
  double h = 0.0;
  for (double v : from) {
    auto it = std::lower_bound(to.begin(), to.end(), v);
    double best = std::numeric_limits<double>::infinity();
    if (it != to.end()) best = *it - v;
    if (it != to.begin()) best = std::min(best, v - *(it - 1));
    h = std::max(h, best);
  }
  return h;
}

double set_hausdorff(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<double> eccentricities(FiniteMetricSpace const& m) {
  std::vector<double> e(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) e[i] = m.dist().row(i).maxCoeff();
  return e;
}

// Local search over correspondences R = {(x, f x)} ∪ {(g y, y)}, driving
// down the largest per-pair distortion.
class CorrespondenceSearch {
 public:
  CorrespondenceSearch(FiniteMetricSpace const& a, FiniteMetricSpace const& b) : a_(a), b_(b) {}

  double run(std::vector<std::size_t>& f, std::vector<std::size_t>& g) const {
    std::size_t const na = a_.size(), nb = b_.size(), m = na + nb;
    std::vector<std::size_t> px(m), py(m);
    for (std::size_t x = 0; x < na; ++x) px[x] = x, py[x] = f[x];
    for (std::size_t y = 0; y < nb; ++y) px[na + y] = g[y], py[na + y] = y;

    auto cost_of = [&](std::size_t k, std::size_t xk, std::size_t yk) {
      double c = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        if (q == k) continue;
        c = std::max(c, std::abs(a_(xk, px[q]) - b_(yk, py[q])));
      }
      return c;
    };

    std::vector<double> cost(m);
    double current = 0.0;
    for (std::size_t iter = 0; iter < 10 * m + 10; ++iter) {
      current = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        cost[k] = cost_of(k, px[k], py[k]);
        current = std::max(current, cost[k]);
      }
      bool improved = false;
      for (std::size_t k = 0; k < m && !improved; ++k) {
        if (cost[k] < current) continue;
        bool const from_a = k < na;
        std::size_t const options = from_a ? nb : na;
        double best = cost[k];
        std::size_t best_c = from_a ? py[k] : px[k];
        for (std::size_t c = 0; c < options; ++c) {
          double v = from_a ? cost_of(k, px[k], c) : cost_of(k, c, py[k]);
          if (v < best) best = v, best_c = c;
        }
        if (best < cost[k]) {
          (from_a ? py[k] : px[k]) = best_c;
          improved = true;
        }
      }
      if (!improved) break;
    }
    current = 0.0;
    for (std::size_t k = 0; k < m; ++k) current = std::max(current, cost_of(k, px[k], py[k]));
    for (std::size_t x = 0; x < na; ++x) f[x] = py[x];
    for (std::size_t y = 0; y < nb; ++y) g[y] = px[na + y];
    return 0.5 * current;
  }

 private:
  FiniteMetricSpace const& a_;
  FiniteMetricSpace const& b_;
};

// Points ordered by (eccentricity, sorted distance row); rank in [0, 1].
std::vector<double> canonical_rank(FiniteMetricSpace const& m) {
  std::size_t n = m.size();
  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i].resize(n);
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = m(i, j);
    std::sort(rows[i].begin(), rows[i].end(), std::greater<>());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return rows[i] < rows[j]; });
  std::vector<double> rank(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) rank[order[p]] = n > 1 ? static_cast<double>(p) / (n - 1) : 0.0;
  return rank;
}

std::vector<std::size_t> nearest_rank_map(std::vector<double> const& from, std::vector<double> const& to) {
  std::vector<std::size_t> out(from.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < to.size(); ++j)
      if (std::abs(from[i] - to[j]) < best) best = std::abs(from[i] - to[j]), out[i] = j;
  }
  return out;
}

std::pair<std::size_t, std::size_t> diametral_pair(FiniteMetricSpace const& m) {
  Eigen::Index r = 0, c = 0;
  m.dist().maxCoeff(&r, &c);
  return {static_cast<std::size_t>(r), static_cast<std::size_t>(c)};
}

std::vector<std::size_t> profile_map(FiniteMetricSpace const& a, std::pair<std::size_t, std::size_t> pa,
                                     FiniteMetricSpace const& b, std::pair<std::size_t, std::size_t> pb) {
  std::vector<std::size_t> out(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < b.size(); ++y) {
      double v = std::max(std::abs(a(x, pa.first) - b(y, pb.first)), std::abs(a(x, pa.second) - b(y, pb.second)));
      if (v < best) best = v, out[x] = y;
    }
  }
  return out;
}

GhUpperResult directed_search(FiniteMetricSpace const& a, FiniteMetricSpace const& b, GhSearchOptions const& options) {
  struct Seed {
    std::vector<std::size_t> f, g;
  };
  std::vector<Seed> seeds;
  std::vector<double> ra = canonical_rank(a), rb = canonical_rank(b);
  seeds.push_back({nearest_rank_map(ra, rb), nearest_rank_map(rb, ra)});
  auto pa = diametral_pair(a), pb = diametral_pair(b);
  std::pair<std::size_t, std::size_t> pb_swapped{pb.second, pb.first};
  seeds.push_back({profile_map(a, pa, b, pb), profile_map(b, pb, a, pa)});
  seeds.push_back({profile_map(a, pa, b, pb_swapped), profile_map(b, pb_swapped, a, pa)});

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick_b(0, b.size() - 1), pick_a(0, a.size() - 1);
  for (int r = 0; r < options.restarts; ++r) {
    Seed s{std::vector<std::size_t>(a.size()), std::vector<std::size_t>(b.size())};
    for (auto& v : s.f) v = pick_b(rng);
    for (auto& v : s.g) v = pick_a(rng);
    seeds.push_back(std::move(s));
  }

  CorrespondenceSearch search(a, b);
  std::vector<double> values(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) { values[i] = search.run(seeds[i].f, seeds[i].g); });
  std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  return {values[best], seeds[best].f, seeds[best].g};
}

}  // namespace

void validate_metric(Eigen::MatrixXd const& d, double tolerance, bool check_triangle) {
  if (d.rows() != d.cols()) throw Error("not_a_metric", "distance matrix is not square");
  std::size_t const n = static_cast<std::size_t>(d.rows());
  for (std::size_t i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) throw Error("not_a_metric", "nonzero diagonal entry", triple(i, i, i));
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) throw Error("not_a_metric", "negative or non-finite entry", triple(i, j, j));
      if (d(i, j) != d(j, i)) throw Error("not_a_metric", "asymmetric entry", triple(i, j, j));
    }
  }
  if (!check_triangle) return;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d(i, j) > d(i, k) + d(k, j) + tolerance)
          throw Error("not_a_metric", "triangle inequality violated", triple(i, j, k));
}

FiniteMetricSpace::FiniteMetricSpace(Eigen::MatrixXd dist, std::vector<std::string> labels, bool check_triangle)
    : dist_(std::move(dist)), labels_(std::move(labels)) {
  validate_metric(dist_, kMetricTolerance, check_triangle);
  if (!labels_.empty() && labels_.size() != size())
    throw Error("invalid_labels", "label count does not match point count");
}

double diameter(FiniteMetricSpace const& m) {
  if (m.size() == 0) throw Error("empty_space", "diameter of an empty space");
  return m.dist().maxCoeff();
}

FiniteMetricSpace scaled(FiniteMetricSpace const& m, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error("invalid_argument", "scale factor must be positive");
  return FiniteMetricSpace(m.dist() * factor, m.labels(), false);
}

FiniteMetricSpace rescale_to_diameter_one(FiniteMetricSpace const& m) {
  if (m.size() < 2) throw Error("degenerate_diameter", "cannot rescale a space with fewer than two points");
  double d = diameter(m);
  if (!(d > 0.0)) throw Error("degenerate_diameter", "cannot rescale a space of zero diameter");
  Eigen::MatrixXd out = m.dist() / d;
  // Pin the maximal entries to exactly 1.
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (m.dist()(i, j) == d) out(i, j) = 1.0;
  return FiniteMetricSpace(std::move(out), m.labels(), false);
}

FiniteMetricSpace segment_space(int samples) {
  if (samples < 2) throw Error("invalid_argument", "segment needs at least two samples");
  Eigen::MatrixXd d(samples, samples);
  for (int i = 0; i < samples; ++i)
    for (int j = 0; j < samples; ++j) d(i, j) = static_cast<double>(std::abs(i - j)) / (samples - 1);
  return FiniteMetricSpace(std::move(d), {}, false);
}

FlatTorus::FlatTorus(Eigen::MatrixXd gram) : gram_(std::move(gram)) {
  if (gram_.rows() < 1 || gram_.rows() != gram_.cols() || gram_.rows() > 4)
    throw Error("invalid_gram", "torus gram must be square of size 1 to 4");
  if (!gram_.allFinite() || (gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw Error("invalid_gram", "torus gram must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_);
  double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 1e-12 * std::max(1.0, lmax))) throw Error("not_positive_definite", "torus gram is not positive definite");
  // A difference reduced to [-1/2, 1/2]^i has G-norm at most r0, so the
  // optimal translate λ satisfies |λ|_∞ <= r0 / sqrt(λ_min) + 1/2.
  double r0 = std::sqrt(lmax * rank() / 4.0);
  radius_ = static_cast<int>(std::ceil(r0 / std::sqrt(lmin) + 0.5));
}

double FlatTorus::norm_of_nearest(Eigen::VectorXd const& diff) const {
  int const n = rank();
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = diff[k] - std::round(diff[k]);
  int const side = 2 * radius_ + 1;
  int total = 1;
  for (int k = 0; k < n; ++k) total *= side;
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd w(n);
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int k = 0; k < n; ++k) {
      w[k] = v[k] + (c % side - radius_);
      c /= side;
    }
    best = std::min(best, w.dot(gram_ * w));
  }
  return std::sqrt(best);
}

double FlatTorus::distance(Eigen::VectorXd const& x, Eigen::VectorXd const& y) const {
  if (x.size() != rank() || y.size() != rank()) throw Error("dimension_mismatch", "point dimension differs from torus rank");
  return norm_of_nearest(x - y);
}

double FlatTorus::quotient_distance(Eigen::VectorXd const& x, Eigen::VectorXd const& y) const {
  if (x.size() != rank() || y.size() != rank()) throw Error("dimension_mismatch", "point dimension differs from torus rank");
  return std::min(norm_of_nearest(x - y), norm_of_nearest(x + y));
}

Eigen::VectorXd torus_grid_point(int rank, int s, std::size_t index) {
  Eigen::VectorXd p(rank);
  for (int k = rank - 1; k >= 0; --k) {
    p[k] = static_cast<double>(index % s) / s;
    index /= s;
  }
  return p;
}

FiniteMetricSpace flat_torus_space(FlatTorus const& t, int s) {
  if (s < 1) throw Error("invalid_argument", "samples per axis must be positive");
  int const r = t.rank();
  std::size_t n = 1;
  for (int k = 0; k < r; ++k) n *= static_cast<std::size_t>(s);
  // The metric is translation invariant, so it is tabulated by grid offset.
  std::vector<double> table(n);
  parallel_for(n, [&](std::size_t i) { table[i] = t.distance(torus_grid_point(r, s, i), Eigen::VectorXd::Zero(r)); });
  std::vector<std::vector<int>> digits(n, std::vector<int>(r));
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = i;
    for (int k = r - 1; k >= 0; --k) digits[i][k] = static_cast<int>(c % s), c /= s;
  }
  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t off = 0;
      for (int k = 0; k < r; ++k) off = off * s + static_cast<std::size_t>(((digits[i][k] - digits[j][k]) % s + s) % s);
      d(i, j) = table[off];
    }
  // Offsets o and -o give the same value by symmetry of the norm, but force
  // bitwise symmetry anyway.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(j, i) = d(i, j);
  return FiniteMetricSpace(std::move(d), {}, false);
}

std::vector<std::size_t> negation_permutation(int rank, int s) {
  std::size_t n = 1;
  for (int k = 0; k < rank; ++k) n *= static_cast<std::size_t>(s);
  std::vector<std::size_t> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = i, out = 0, place = 1;
    for (int k = 0; k < rank; ++k) {
      std::size_t dgt = c % s;
      c /= s;
      out += ((s - dgt) % s) * place;
      place *= s;
    }
    sigma[i] = out;
  }
  return sigma;
}

FiniteMetricSpace quotient_by_involution(FiniteMetricSpace const& m, std::vector<std::size_t> const& sigma) {
  std::size_t const n = m.size();
  if (sigma.size() != n) throw Error("not_involution", "permutation size differs from point count");
  for (std::size_t i = 0; i < n; ++i)
    if (sigma[i] >= n || sigma[sigma[i]] != i) throw Error("not_involution", "sigma is not an involution", std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(m(sigma[i], sigma[j]) - m(i, j)) > kMetricTolerance)
        throw Error("not_isometric", "sigma is not an isometry", triple(i, j, j));
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i)
    if (i <= sigma[i]) reps.push_back(i);
  Eigen::MatrixXd d(reps.size(), reps.size());
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b)
      d(a, b) = a == b ? 0.0 : std::min(m(reps[a], reps[b]), m(reps[a], sigma[reps[b]]));
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = a + 1; b < reps.size(); ++b) d(b, a) = d(a, b) = std::min(d(a, b), d(b, a));
  std::vector<std::string> labels;
  if (!m.labels().empty())
    for (std::size_t r : reps) labels.push_back(m.labels()[r]);
  return FiniteMetricSpace(std::move(d), std::move(labels), false);
}

double gh_lower(FiniteMetricSpace const& a, FiniteMetricSpace const& b) {
  if (a.size() == 0 || b.size() == 0) throw Error("empty_space", "GH bounds need nonempty spaces");
  // Any correspondence of distortion δ moves every distance value and every
  // eccentricity by at most δ.
  double bound = std::abs(diameter(a) - diameter(b));
  std::vector<double> va(a.dist().data(), a.dist().data() + a.dist().size());
  std::vector<double> vb(b.dist().data(), b.dist().data() + b.dist().size());
  bound = std::max(bound, set_hausdorff(std::move(va), std::move(vb)));
  bound = std::max(bound, set_hausdorff(eccentricities(a), eccentricities(b)));
  return 0.5 * bound;
}

double correspondence_distortion(FiniteMetricSpace const& a, FiniteMetricSpace const& b,
                                 std::vector<std::size_t> const& f, std::vector<std::size_t> const& g) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < f.size(); ++x) pairs.emplace_back(x, f[x]);
  for (std::size_t y = 0; y < g.size(); ++y) pairs.emplace_back(g[y], y);
  double worst = 0.0;
  for (auto const& [x1, y1] : pairs)
    for (auto const& [x2, y2] : pairs) worst = std::max(worst, std::abs(a(x1, x2) - b(y1, y2)));
  return 0.5 * worst;
}

GhUpperResult gh_upper_search(FiniteMetricSpace const& a, FiniteMetricSpace const& b, GhSearchOptions const& options) {
  if (a.size() == 0 || b.size() == 0) throw Error("empty_space", "GH bounds need nonempty spaces");
  GhUpperResult ab = directed_search(a, b, options);
  GhUpperResult ba = directed_search(b, a, options);
  if (ba.value < ab.value) return {ba.value, ba.backward, ba.forward};
  return ab;
}

double gh_upper(FiniteMetricSpace const& a, FiniteMetricSpace const& b, GhSearchOptions const& options) {
  return gh_upper_search(a, b, options).value;
}

double same_carrier_distance(FiniteMetricSpace const& a, FiniteMetricSpace const& b) {
  if (a.size() != b.size()) throw Error("carrier_mismatch", "spaces have different point counts");
  if (!a.labels().empty() && !b.labels().empty() && a.labels() != b.labels())
    throw Error("carrier_mismatch", "spaces have different carrier labels");
  if (a.size() == 0) return 0.0;
  return 0.5 * (a.dist() - b.dist()).cwiseAbs().maxCoeff();
}

}  // namespace k3c
