#include "k3c/collapse_map.hpp"

#include <cmath>

#include "k3c/error.hpp"
#include "k3c/parallel.hpp"

namespace k3c {

namespace {

FiniteMetricSpace torus_quotient(FlatTorus const& t, PhiOptions const& options) {
  int const s = torus_samples_for(t.rank(), options);
  FiniteMetricSpace grid = flat_torus_space(t, s);
  return rescale_to_diameter_one(quotient_by_involution(grid, negation_permutation(t.rank(), s)));
}

FlatTorus midpoint(FlatTorus const& a, FlatTorus const& b) {
  if (a.rank() != b.rank()) throw Error("incompatible_grids", "torus path changes rank");
  return FlatTorus(0.5 * (a.gram() + b.gram()));
}

}  // namespace

std::string to_string(CollapseVariant v) {
  switch (v) {
    case CollapseVariant::BoundaryLine: return "boundary_line";
    case CollapseVariant::BoundaryPoint: return "boundary_point";
    case CollapseVariant::KummerInterior: return "kummer_interior";
    case CollapseVariant::DeepStratumTorus: return "deep_stratum_torus";
  }
  return "?";
}

CollapseVariant parse_collapse_variant(std::string const& name) {
  for (auto v : {CollapseVariant::BoundaryLine, CollapseVariant::BoundaryPoint, CollapseVariant::KummerInterior,
                 CollapseVariant::DeepStratumTorus})
    if (to_string(v) == name) return v;
  throw Error("invalid_variant", "unknown collapse variant '" + name + "'");
}

CollapseVariant variant_of(CollapseInput const& in) { return static_cast<CollapseVariant>(in.index()); }

int torus_samples_for(int rank, PhiOptions const& options) {
  if (options.torus_samples > 0) return options.torus_samples;
  int s = 1;
  while (std::pow(s + 1, rank) <= 4096.0) ++s;
  return std::max(2, std::min(s, options.mesh.resolution));
}

FiniteMetricSpace phi(CollapseInput const& in, PhiOptions const& options) {
  return std::visit(
      [&](auto const& payload) -> FiniteMetricSpace {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, BoundaryLineInput>) {
          return mesh_metric(payload.family, options.mesh).space;
        } else if constexpr (std::is_same_v<T, BoundaryPointInput>) {
          return segment_space(options.mesh.resolution);
        } else if constexpr (std::is_same_v<T, KummerInput>) {
          if (payload.torus.rank() != 4) throw Error("invalid_payload", "kummer_interior needs a rank-4 torus");
          return torus_quotient(payload.torus, options);
        } else {
          if (payload.torus.rank() > 3) throw Error("invalid_payload", "deep_stratum_torus needs rank 1, 2 or 3");
          return torus_quotient(payload.torus, options);
        }
      },
      in);
}

std::vector<CollapseInput> refine_path(std::vector<CollapseInput> const& path) {
  std::vector<CollapseInput> out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    out.push_back(path[k]);
    if (k + 1 == path.size()) break;
    CollapseInput const& next = path[k + 1];
    if (path[k].index() != next.index()) throw Error("incompatible_path", "path mixes collapse variants", std::to_string(k));
    std::visit(
        [&](auto const& a) {
          using T = std::decay_t<decltype(a)>;
          T const& b = std::get<T>(next);
          if constexpr (std::is_same_v<T, BoundaryLineInput>) {
            out.push_back(BoundaryLineInput{interpolate(a.family, b.family, Rational(1, 2)), a.metadata});
          } else if constexpr (std::is_same_v<T, BoundaryPointInput>) {
            out.push_back(BoundaryPointInput{});
          } else {
            out.push_back(T{midpoint(a.torus, b.torus)});
          }
        },
        path[k]);
  }
  return out;
}

std::vector<double> continuity_distances(std::vector<FiniteMetricSpace> const& values) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    try {
      out.push_back(same_carrier_distance(values[k], values[k + 1]));
    } catch (Error const& e) {
      throw Error("incompatible_grids", e.what(), "step " + std::to_string(k));
    }
  }
  return out;
}

std::vector<std::size_t> refinement_violations(std::vector<double> const& coarse, std::vector<double> const& refined) {
  if (refined.size() != 2 * coarse.size()) throw Error("internal", "refined path does not halve every step");
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < coarse.size(); ++k)
    if (refined[2 * k] > coarse[k] + kRefinementSlack || refined[2 * k + 1] > coarse[k] + kRefinementSlack)
      bad.push_back(k);
  return bad;
}

ProbeReport continuity_probe(std::vector<CollapseInput> const& path, PhiOptions const& options) {
  if (path.size() < 2) throw Error("invalid_path", "continuity probe needs at least two path points");
  for (std::size_t k = 1; k < path.size(); ++k)
    if (path[k].index() != path[0].index())
      throw Error("incompatible_path", "path mixes collapse variants", std::to_string(k));

  std::vector<CollapseInput> refined = refine_path(path);
  std::vector<FiniteMetricSpace> values(refined.size());
  parallel_for(refined.size(), [&](std::size_t i) { values[i] = phi(refined[i], options); });

  std::vector<FiniteMetricSpace> coarse;
  for (std::size_t i = 0; i < values.size(); i += 2) coarse.push_back(values[i]);

  ProbeReport report;
  report.distances = continuity_distances(coarse);
  report.refined_distances = continuity_distances(values);
  report.violations = refinement_violations(report.distances, report.refined_distances);
  report.refinement_monotone = report.violations.empty();
  return report;
}

WeierstrassFamily type2_family(GaussRational const& a, GaussRational const& b, Rational const& t) {
  GaussRational gt(t);
  std::vector<GaussRational> ca(9, GaussRational(0)), cb(13, GaussRational(0));
  ca[0] = gt, ca[4] = a, ca[8] = gt;
  cb[0] = gt, cb[6] = b, cb[12] = gt;
  return WeierstrassFamily(ExactPolynomial(std::move(ca)), ExactPolynomial(std::move(cb)));
}

std::vector<Type2Sample> type2_limit_probe(GaussRational const& a, GaussRational const& b,
                                           std::vector<Rational> const& ts, PhiOptions const& options,
                                           int segment_samples, GhSearchOptions const& gh) {
  if ((GaussRational(4) * a * a * a + GaussRational(27) * b * b).is_zero())
    throw Error("degenerate_family", "4a^3 + 27b^2 must be nonzero for the type II probe family");
  FiniteMetricSpace segment = segment_space(segment_samples);
  std::vector<Type2Sample> out;
  for (Rational const& t : ts) {
    if (t <= 0) throw Error("invalid_argument", "probe parameters must be positive");
    TropicalK3Mesh mesh = mesh_metric(type2_family(a, b, t), options.mesh);
    Type2Sample s;
    s.t = t;
    s.raw_diameter = mesh.raw_diameter;
    s.gh_lower = gh_lower(mesh.space, segment);
    s.gh_upper = gh_upper(mesh.space, segment, gh);
    out.push_back(s);
  }
  return out;
}

}  // namespace k3c
