#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "k3c/exact.hpp"
#include "k3c/mesh.hpp"
#include "k3c/metric_space.hpp"
#include "k3c/weierstrass.hpp"

namespace k3c {

enum class CollapseVariant { BoundaryLine, BoundaryPoint, KummerInterior, DeepStratumTorus };
std::string to_string(CollapseVariant v);
CollapseVariant parse_collapse_variant(std::string const& name);

// Lattice data [e, v] of a boundary line. Stored and echoed, not checked
// against the family.
struct LineMetadata {
  IntVector e;
  IntVector v;
};

struct BoundaryLineInput {
  WeierstrassFamily family;
  std::optional<LineMetadata> metadata;
};
struct BoundaryPointInput {};
struct KummerInput {
  FlatTorus torus;  // rank 4
};
struct DeepStratumInput {
  FlatTorus torus;  // rank 1, 2 or 3
};

using CollapseInput = std::variant<BoundaryLineInput, BoundaryPointInput, KummerInput, DeepStratumInput>;

CollapseVariant variant_of(CollapseInput const& in);

struct PhiOptions {
  MeshOptions mesh;
  // 0 picks the largest s with s^rank <= 4096, capped by mesh.resolution.
  int torus_samples = 0;
};

int torus_samples_for(int rank, PhiOptions const& options);

// Diameter-one metric space attached to the input.
FiniteMetricSpace phi(CollapseInput const& in, PhiOptions const& options = {});

// Inserts the midpoint between consecutive path points (coefficientwise for
// families, gramwise for tori).
std::vector<CollapseInput> refine_path(std::vector<CollapseInput> const& path);

struct ProbeReport {
  std::vector<double> distances;          // consecutive same-carrier distances
  std::vector<double> refined_distances;  // same, on the refined path
  std::vector<std::size_t> violations;    // coarse steps whose halves exceed them
  bool refinement_monotone = true;
};

inline constexpr double kRefinementSlack = 1e-12;

std::vector<double> continuity_distances(std::vector<FiniteMetricSpace> const& values);
// Each refined half-step must not exceed its coarse step (+ kRefinementSlack).
std::vector<std::size_t> refinement_violations(std::vector<double> const& coarse, std::vector<double> const& refined);
ProbeReport continuity_probe(std::vector<CollapseInput> const& path, PhiOptions const& options = {});

// A_t = a z^4 + t(1 + z^8), B_t = b z^6 + t(1 + z^12): at t = 0 the
// discriminant concentrates at 0 and ∞.
WeierstrassFamily type2_family(GaussRational const& a, GaussRational const& b, Rational const& t);

struct Type2Sample {
  Rational t;
  double raw_diameter = 0.0;
  double gh_lower = 0.0;
  double gh_upper = 0.0;
};

// Exploratory: GH bounds between Φ(t) and the unit segment.
std::vector<Type2Sample> type2_limit_probe(GaussRational const& a, GaussRational const& b,
                                           std::vector<Rational> const& ts, PhiOptions const& options,
                                           int segment_samples, GhSearchOptions const& gh = {});

}  // namespace k3c
