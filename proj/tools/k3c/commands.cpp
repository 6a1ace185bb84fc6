#include "commands.hpp"

#include <sstream>

#include "k3c/collapse_map.hpp"
#include "k3c/mesh.hpp"
#include "k3c/period_domain.hpp"

namespace k3c::cli {

using io::Json;

namespace {

Json signature_json(Signature const& s) {
  Json j = Json::object();
  j["positive"] = s.positive;
  j["negative"] = s.negative;
  return j;
}

Json columns_json(IntMatrix const& m) {
  Json out = Json::array();
  for (std::size_t k = 0; k < m.cols(); ++k) out.push_back(io::to_json(m.column(k)));
  return out;
}

Json invariants_json(BoundaryInvariants const& inv) {
  Json j = Json::object();
  j["divisibility"] = io::to_json(inv.divisibility);
  j["discriminant_class"] = io::to_json(inv.discriminant_class);
  j["class_order"] = io::to_json(inv.class_order);
  j["class_norm_mod_2"] = io::to_json(inv.class_norm_mod_2);
  return j;
}

Json descriptor_json(BoundaryStratumDescriptor const& d) {
  Json j = Json::object();
  j["kind"] = to_string(d.kind);
  j["generators"] = columns_json(d.generators);
  j["change_of_basis"] = io::to_json(d.change_of_basis);
  if (d.quotient_lattice) j["quotient"] = io::to_json(*d.quotient_lattice);
  if (d.quotient_signature) j["quotient_signature"] = signature_json(*d.quotient_signature);
  if (d.invariants) j["invariants"] = invariants_json(*d.invariants);
  return j;
}

Json order_json(int ord) { return ord == kInfiniteOrder ? Json("inf") : Json(ord); }

PhiOptions phi_options(MeshFlags const& flags, RunConfig const& cfg) {
  PhiOptions o;
  o.mesh.resolution = flags.resolution;
  o.mesh.puncture_radius = flags.puncture;
  o.mesh.sample_grid = flags.grid;
  o.mesh.fibers.cluster_tolerance = tolerance(cfg, "cluster", o.mesh.fibers.cluster_tolerance);
  o.mesh.periods.j_tolerance = tolerance(cfg, "j", o.mesh.periods.j_tolerance);
  o.torus_samples = flags.samples;
  return o;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

bool known_tolerance(std::string const& name) { return name == "cluster" || name == "j"; }

double tolerance(RunConfig const& cfg, std::string const& name, double fallback) {
  auto it = cfg.tolerances.find(name);
  return it == cfg.tolerances.end() ? fallback : it->second;
}

Result lattice_signature(std::string const& lattice_file) {
  Lattice l = io::lattice_from_json(io::read_json_file(lattice_file));
  Signature s = signature(l);
  Json j = signature_json(s);
  j["rank"] = l.rank();
  j["determinant"] = io::to_json(lattice_determinant(l));
  return {j, "signature (" + std::to_string(s.positive) + ", " + std::to_string(s.negative) + "), rank " +
                 std::to_string(l.rank())};
}

Result lattice_quotient(std::string const& lattice_file, std::string const& vector_file) {
  Lattice l = io::lattice_from_json(io::read_json_file(lattice_file));
  // The vector may be given inline, e.g. --iso '[1,0,0,...]'.
  Json vj = !vector_file.empty() && (vector_file.front() == '[' || vector_file.front() == '{')
                ? io::parse_json(vector_file, "--iso")
                : io::read_json_file(vector_file);
  LatticeVector e = io::int_vector_from_json(vj.is_object() ? vj.value("vector", Json()) : vj, "$.vector");
  IsotropicQuotient q = quotient_by_isotropic(l, e);
  Signature s = signature(q.quotient());
  Json j = Json::object();
  j["isotropic_vector"] = io::to_json(e);
  j["quotient"] = io::to_json(q.quotient());
  j["signature"] = signature_json(s);
  j["adapted_basis"] = columns_json(q.adapted_basis());
  j["invariants"] = invariants_json(boundary_invariants(l, e));
  return {j, "e-perp/e has rank " + std::to_string(q.quotient().rank()) + ", signature (" +
                 std::to_string(s.positive) + ", " + std::to_string(s.negative) + ")"};
}

Result lattice_classify(std::string const& lattice_file, std::string const& subspace_file) {
  Lattice l = io::lattice_from_json(io::read_json_file(lattice_file));
  RationalSubspace s = io::subspace_from_json(io::read_json_file(subspace_file));
  BoundaryStratumDescriptor d = classify_boundary(l, s);
  return {descriptor_json(d), "isotropic " + to_string(d.kind)};
}

Result degenerate_classify(std::string const& monodromy_file, std::optional<std::string> const& lattice_file) {
  Json tj = io::read_json_file(monodromy_file);
  IntMatrix t = io::int_matrix_from_json(tj.is_object() ? tj.value("T", Json()) : tj, "$.T");
  std::optional<Lattice> lattice;
  IntMatrix form;
  if (lattice_file) {
    lattice = io::lattice_from_json(io::read_json_file(*lattice_file));
    form = lattice->gram();
  } else if (tj.is_object() && tj.contains("gram")) {
    lattice = Lattice(io::int_matrix_from_json(tj["gram"], "$.gram"));
    form = lattice->gram();
  } else if (tj.is_object() && tj.contains("form")) {
    form = io::int_matrix_from_json(tj["form"], "$.form");
  } else if (t.rows() == 22) {
    lattice = build_k3_lattice();
    form = lattice->gram();
  } else {
    throw Error("missing_form", "monodromy needs a lattice (--lattice, \"gram\" or \"form\")", monodromy_file);
  }
  MonodromyData m = monodromy_log(t, form);
  DegenerationType type = classify_degeneration(m);
  Json j = Json::object();
  j["type"] = to_string(type);
  j["unipotency_index"] = m.unipotency_index;
  j["log"] = io::to_json(m.log);
  if (type != DegenerationType::TypeI && lattice) j["stratum"] = descriptor_json(limit_boundary_stratum(m, *lattice));
  return {j, "degeneration " + to_string(type)};
}

Result fibration_analyze(std::string const& family_file, RunConfig const& cfg) {
  WeierstrassFamily f = io::family_from_json(io::read_json_file(family_file));
  DiscriminantInfo disc = discriminant(f);
  FiberSearchOptions opts;
  opts.cluster_tolerance = tolerance(cfg, "cluster", opts.cluster_tolerance);
  std::vector<SingularFiber> fibers = singular_fibers(f, opts);
  Json dj = Json::object();
  dj["affine_degree"] = disc.affine_degree;
  dj["order_at_infinity"] = disc.order_at_infinity;
  Json fl = Json::array();
  for (auto const& s : fibers) {
    Json fj = Json::object();
    fj["location"] = s.at_infinity() ? Json("infinity") : io::to_json(s.location);
    fj["orders"] = Json::array({order_json(s.ord_a), order_json(s.ord_b), order_json(s.ord_delta)});
    fj["kodaira"] = s.type.name();
    fj["euler"] = s.euler_number();
    fl.push_back(std::move(fj));
  }
  Json j = Json::object();
  j["discriminant"] = std::move(dj);
  j["fibers"] = std::move(fl);
  j["fiber_count"] = fibers.size();
  j["euler_sum"] = euler_sum(fibers);
  return {j, std::to_string(fibers.size()) + " singular fibers, Euler sum " + std::to_string(euler_sum(fibers))};
}

Result fibration_mesh(std::string const& family_file, MeshFlags const& flags, RunConfig const& cfg) {
  WeierstrassFamily f = io::family_from_json(io::read_json_file(family_file));
  TropicalK3Mesh mesh = mesh_metric(f, phi_options(flags, cfg).mesh);
  Json meta = Json::object();
  meta["raw_diameter"] = mesh.raw_diameter;
  meta["normalized"] = mesh.normalized;
  meta["resolution"] = flags.resolution;
  meta["puncture_radius"] = flags.puncture;
  meta["sample_grid"] = flags.grid;
  meta["nodes"] = mesh.node_count;
  meta["edges"] = mesh.edge_count;
  Json charts = Json::array(), coords = Json::array(), dens = Json::array(), snapped = Json::array();
  for (std::size_t i = 0; i < mesh.space.size(); ++i) {
    charts.push_back(to_string(mesh.charts[i]));
    coords.push_back(io::to_json(mesh.coordinates[i]));
    dens.push_back(mesh.density[i]);
    snapped.push_back(static_cast<bool>(mesh.snapped[i]));
  }
  meta["charts"] = std::move(charts);
  meta["coordinates"] = std::move(coords);
  meta["density"] = std::move(dens);
  meta["snapped"] = std::move(snapped);
  Json punct = Json::array();
  for (auto const& s : mesh.punctures) punct.push_back(s.at_infinity() ? Json("infinity") : io::to_json(s.location));
  meta["punctures"] = std::move(punct);
  return {io::to_json(mesh.space, std::move(meta)),
          std::to_string(mesh.space.size()) + " carrier points, raw diameter " + fmt(mesh.raw_diameter)};
}

Result torus(std::string const& gram_file, int samples, bool mod_minus_one) {
  FlatTorus t = io::torus_from_json(io::read_json_file(gram_file));
  FiniteMetricSpace m = flat_torus_space(t, samples);
  if (mod_minus_one) m = quotient_by_involution(m, negation_permutation(t.rank(), samples));
  double diam = diameter(m);
  Json meta = Json::object();
  meta["rank"] = t.rank();
  meta["samples"] = samples;
  meta["mod_minus_one"] = mod_minus_one;
  meta["diameter"] = diam;
  return {io::to_json(m, std::move(meta)), std::to_string(m.size()) + " points, diameter " + fmt(diam)};
}

Result gh(std::string const& a_file, std::string const& b_file, int iters, RunConfig const& cfg) {
  FiniteMetricSpace a = io::metric_from_json(io::read_json_file(a_file));
  FiniteMetricSpace b = io::metric_from_json(io::read_json_file(b_file));
  GhSearchOptions opts;
  opts.restarts = iters;
  opts.seed = cfg.seed;
  double lo = gh_lower(a, b), up = gh_upper(a, b, opts);
  Json j = Json::object();
  j["lower"] = lo;
  j["upper"] = up;
  return {j, "GH in [" + fmt(lo) + ", " + fmt(up) + "]"};
}

Result collapse_phi(std::string const& input_file, MeshFlags const& flags, RunConfig const& cfg) {
  Json ij = io::read_json_file(input_file);
  CollapseInput in = io::collapse_input_from_json(ij);
  FiniteMetricSpace m = phi(in, phi_options(flags, cfg));
  Json meta = Json::object();
  meta["variant"] = to_string(variant_of(in));
  if (auto const* line = std::get_if<BoundaryLineInput>(&in); line && line->metadata) {
    Json md = Json::object();
    md["e"] = io::to_json(line->metadata->e);
    md["v"] = io::to_json(line->metadata->v);
    meta["metadata"] = std::move(md);
  }
  return {io::to_json(m, std::move(meta)), to_string(variant_of(in)) + ": " + std::to_string(m.size()) + " points"};
}

Result collapse_probe(std::string const& path_file, MeshFlags const& flags, RunConfig const& cfg) {
  std::vector<CollapseInput> path = io::collapse_path_from_json(io::read_json_file(path_file));
  ProbeReport r = continuity_probe(path, phi_options(flags, cfg));
  Json refinement = Json::object();
  refinement["distances"] = r.refined_distances;
  refinement["monotone"] = r.refinement_monotone;
  refinement["violations"] = r.violations;
  Json j = Json::object();
  j["steps"] = r.distances.size();
  j["distances"] = r.distances;
  j["refinement"] = std::move(refinement);
  return {j, std::to_string(r.distances.size()) + " steps, refinement " +
                 (r.refinement_monotone ? "monotone" : "NOT monotone")};
}

Result collapse_type2(std::string const& input_file, MeshFlags const& flags, int iters, RunConfig const& cfg) {
  Json ij = io::read_json_file(input_file);
  if (!ij.is_object() || !ij.contains("a") || !ij.contains("b") || !ij.contains("t"))
    throw Error("invalid_input", "type II probe input needs \"a\", \"b\" and \"t\"", input_file);
  GaussRational a = io::complex_from_json(ij["a"], "$.a");
  GaussRational b = io::complex_from_json(ij["b"], "$.b");
  std::vector<Rational> ts = io::rational_vector_from_json(ij["t"], "$.t");
  int segment = ij.contains("segment_samples") ? static_cast<int>(io::integer_from_json(ij["segment_samples"], "$.segment_samples")) : 33;
  GhSearchOptions gopts;
  gopts.restarts = iters;
  gopts.seed = cfg.seed;
  std::vector<Type2Sample> rows = type2_limit_probe(a, b, ts, phi_options(flags, cfg), segment, gopts);
  Json out = Json::array();
  for (auto const& s : rows) {
    Json r = Json::object();
    r["t"] = io::to_json(s.t);
    r["raw_diameter"] = s.raw_diameter;
    r["gh_lower"] = s.gh_lower;
    r["gh_upper"] = s.gh_upper;
    out.push_back(std::move(r));
  }
  Json j = Json::object();
  j["exploratory"] = true;
  j["samples"] = std::move(out);
  return {j, std::to_string(rows.size()) + " type II probe samples (exploratory)"};
}

}  // namespace k3c::cli
