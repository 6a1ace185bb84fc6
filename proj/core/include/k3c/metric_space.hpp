#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace k3c {

inline constexpr double kMetricTolerance = 1e-9;

// Throws not_a_metric (with the offending index triple) unless `d` is a
// square, symmetric, nonnegative matrix with zero diagonal satisfying the
// triangle inequality up to `tolerance`. The triangle check is O(n^3).
void validate_metric(Eigen::MatrixXd const& d, double tolerance = kMetricTolerance, bool check_triangle = true);

class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  explicit FiniteMetricSpace(Eigen::MatrixXd dist, std::vector<std::string> labels = {}, bool check_triangle = true);

  std::size_t size() const { return static_cast<std::size_t>(dist_.rows()); }
  Eigen::MatrixXd const& dist() const { return dist_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
  std::vector<std::string> const& labels() const { return labels_; }

 private:
  Eigen::MatrixXd dist_;
  std::vector<std::string> labels_;
};

double diameter(FiniteMetricSpace const& m);
FiniteMetricSpace rescale_to_diameter_one(FiniteMetricSpace const& m);
FiniteMetricSpace scaled(FiniteMetricSpace const& m, double factor);

// Uniform samples {0, 1/(n-1), ..., 1} of the unit interval.
FiniteMetricSpace segment_space(int samples);

// R^i / Z^i with the metric x^T G x.
class FlatTorus {
 public:
  explicit FlatTorus(Eigen::MatrixXd gram);

  int rank() const { return static_cast<int>(gram_.rows()); }
  Eigen::MatrixXd const& gram() const { return gram_; }
  // Translates are searched over the box |λ|_∞ <= search_radius().
  int search_radius() const { return radius_; }

  double distance(Eigen::VectorXd const& x, Eigen::VectorXd const& y) const;
  // Distance in the quotient by x -> -x.
  double quotient_distance(Eigen::VectorXd const& x, Eigen::VectorXd const& y) const;

 private:
  double norm_of_nearest(Eigen::VectorXd const& v) const;

  Eigen::MatrixXd gram_;
  int radius_ = 0;
};

// Grid {k / s}^i in lexicographic order (last axis fastest).
FiniteMetricSpace flat_torus_space(FlatTorus const& t, int samples_per_axis);
Eigen::VectorXd torus_grid_point(int rank, int samples_per_axis, std::size_t index);
// Permutation of the grid induced by x -> -x.
std::vector<std::size_t> negation_permutation(int rank, int samples_per_axis);

// Orbit space of an isometric involution; orbit representatives are the
// smaller index of each pair, in increasing order.
FiniteMetricSpace quotient_by_involution(FiniteMetricSpace const& m, std::vector<std::size_t> const& sigma);

double gh_lower(FiniteMetricSpace const& a, FiniteMetricSpace const& b);

struct GhSearchOptions {
  int restarts = 200;
  std::uint64_t seed = 0;
};

struct GhUpperResult {
  double value = 0.0;
  // Correspondence as two maps: a -> b and b -> a.
  std::vector<std::size_t> forward;
  std::vector<std::size_t> backward;
};

GhUpperResult gh_upper_search(FiniteMetricSpace const& a, FiniteMetricSpace const& b, GhSearchOptions const& options = {});
double gh_upper(FiniteMetricSpace const& a, FiniteMetricSpace const& b, GhSearchOptions const& options = {});
// Half the distortion of the correspondence given by the two maps.
double correspondence_distortion(FiniteMetricSpace const& a, FiniteMetricSpace const& b,
                                 std::vector<std::size_t> const& forward, std::vector<std::size_t> const& backward);

// Half the sup-norm of the entrywise difference on a shared carrier.
double same_carrier_distance(FiniteMetricSpace const& a, FiniteMetricSpace const& b);

}  // namespace k3c
