#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using k3c::Error;
using k3c::cli::Result;
using k3c::cli::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

int fail(Error const& e, int code) {
  std::cout << k3c::io::dump(k3c::io::error_to_json(e));
  std::cerr << "k3c: " << e.code() << ": " << e.what();
  if (!e.location().empty()) std::cerr << " [" << e.location() << "]";
  std::cerr << "\n";
  return code;
}

// Pulls --tol.<name> <value> / --tol.<name>=<value> out of argv, since the
// set of names is open-ended.
std::vector<std::string> extract_tolerances(std::vector<std::string> args, RunConfig& cfg) {
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string const& a = args[i];
    if (a.rfind("--tol.", 0) != 0) {
      rest.push_back(a);
      continue;
    }
    std::string name = a.substr(6), value;
    if (auto eq = name.find('='); eq != std::string::npos) {
      value = name.substr(eq + 1);
      name = name.substr(0, eq);
    } else if (i + 1 < args.size()) {
      value = args[++i];
    } else {
      throw Error("usage", "missing value for --tol." + name, a);
    }
    if (!k3c::cli::known_tolerance(name)) throw Error("usage", "unknown tolerance '" + name + "'", a);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (std::exception const&) {
      throw Error("usage", "tolerance value is not a number", a);
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("usage", "tolerances must be positive", a);
    cfg.tolerances[name] = v;
  }
  return rest;
}

void emit(Result const& r, RunConfig const& cfg) {
  std::string text = k3c::io::dump(r.json);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw Error("io_error", "cannot write output file", cfg.out);
    f << text;
    if (!f) throw Error("io_error", "failed writing output file", cfg.out);
  }
  std::cerr << r.summary << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::vector<std::string> args;
  try {
    args = extract_tolerances(std::vector<std::string>(argv + 1, argv + argc), cfg);
  } catch (Error const& e) {
    return fail(e, kExitUsage);
  }

  CLI::App app{"k3c: K3 lattices, degenerations, elliptic fibrations and collapse metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "Write JSON output to this file instead of stdout");
  app.add_option("--seed", cfg.seed, "Seed for randomized searches");

  k3c::cli::MeshFlags mesh;
  auto add_mesh_flags = [&](CLI::App* sub) {
    sub->add_option("--res", mesh.resolution, "Mesh resolution (fine cells per axis)")->check(CLI::Range(2, 4000));
    sub->add_option("--puncture", mesh.puncture, "Puncture disk radius")->check(CLI::PositiveNumber);
    sub->add_option("--grid", mesh.grid, "Carrier grid cells per axis (divides --res)")->check(CLI::Range(1, 4000));
  };

  std::string file_a, file_b;
  std::string lattice_opt;
  int iters = 200;
  int samples = 32;
  bool mod_minus_one = false;
  std::function<Result()> action;

  auto* lattice = app.add_subcommand("lattice", "Lattice arithmetic")->require_subcommand(1);
  auto* sig = lattice->add_subcommand("signature", "Signature, rank and determinant of a lattice");
  sig->add_option("lattice,--lattice", file_a, "Lattice JSON")->required();
  sig->callback([&] { action = [&] { return k3c::cli::lattice_signature(file_a); }; });
  auto* quo = lattice->add_subcommand("quotient", "Quotient e-perp/e by a primitive isotropic vector");
  quo->add_option("lattice,--lattice", file_a, "Lattice JSON")->required();
  quo->add_option("vector,--iso", file_b, "Vector JSON file or inline array")->required();
  quo->callback([&] { action = [&] { return k3c::cli::lattice_quotient(file_a, file_b); }; });
  auto* cls = lattice->add_subcommand("classify", "Classify an isotropic rational subspace");
  cls->add_option("lattice,--lattice", file_a, "Lattice JSON")->required();
  cls->add_option("subspace,--subspace", file_b, "Subspace JSON")->required();
  cls->callback([&] { action = [&] { return k3c::cli::lattice_classify(file_a, file_b); }; });

  auto* degen = app.add_subcommand("degenerate", "Degeneration type from monodromy")->require_subcommand(1);
  auto* dcls = degen->add_subcommand("classify", "Classify a monodromy matrix");
  dcls->add_option("monodromy,--monodromy", file_a, "Monodromy JSON {\"T\": ...}")->required();
  dcls->add_option("--lattice", lattice_opt, "Lattice JSON preserved by T");
  dcls->callback([&] {
    action = [&] {
      return k3c::cli::degenerate_classify(file_a, lattice_opt.empty() ? std::nullopt : std::optional(lattice_opt));
    };
  });

  auto* fib = app.add_subcommand("fibration", "Weierstrass elliptic fibrations")->require_subcommand(1);
  auto* ana = fib->add_subcommand("analyze", "Singular fibers and Euler sum");
  ana->add_option("family", file_a, "Family JSON")->required();
  ana->callback([&] { action = [&] { return k3c::cli::fibration_analyze(file_a, cfg); }; });
  auto* msh = fib->add_subcommand("mesh", "Metric mesh on the base sphere");
  msh->add_option("family", file_a, "Family JSON")->required();
  add_mesh_flags(msh);
  msh->callback([&] { action = [&] { return k3c::cli::fibration_mesh(file_a, mesh, cfg); }; });

  auto* tor = app.add_subcommand("torus", "Sampled flat torus metric");
  tor->add_option("--gram", file_a, "Gram JSON")->required();
  tor->add_option("--samples", samples, "Samples per axis")->check(CLI::Range(1, 4096));
  tor->add_flag("--mod-minus-one", mod_minus_one, "Quotient by x -> -x");
  tor->callback([&] { action = [&] { return k3c::cli::torus(file_a, samples, mod_minus_one); }; });

  auto* ghc = app.add_subcommand("gh", "Gromov-Hausdorff bounds between two metric spaces");
  ghc->add_option("a", file_a, "Metric space JSON")->required();
  ghc->add_option("b", file_b, "Metric space JSON")->required();
  ghc->add_option("--iters", iters, "Random restarts for the upper bound")->check(CLI::Range(0, 1000000));
  ghc->callback([&] { action = [&] { return k3c::cli::gh(file_a, file_b, iters, cfg); }; });

  auto* col = app.add_subcommand("collapse", "Collapse map and continuity probes")->require_subcommand(1);
  auto* cphi = col->add_subcommand("phi", "Metric space attached to a collapse input");
  cphi->add_option("--input", file_a, "Collapse input JSON")->required();
  add_mesh_flags(cphi);
  cphi->add_option("--samples", mesh.samples, "Torus samples per axis (0: automatic)")->check(CLI::Range(0, 4096));
  cphi->callback([&] { action = [&] { return k3c::cli::collapse_phi(file_a, mesh, cfg); }; });
  auto* cprobe = col->add_subcommand("probe", "Continuity probe along a path");
  cprobe->add_option("--path", file_a, "Path JSON")->required();
  add_mesh_flags(cprobe);
  cprobe->add_option("--samples", mesh.samples, "Torus samples per axis (0: automatic)")->check(CLI::Range(0, 4096));
  cprobe->callback([&] { action = [&] { return k3c::cli::collapse_probe(file_a, mesh, cfg); }; });
  auto* ctype2 = col->add_subcommand("type2", "Exploratory GH probe towards the segment");
  ctype2->add_option("--input", file_a, "Probe JSON {\"a\", \"b\", \"t\"}")->required();
  add_mesh_flags(ctype2);
  ctype2->add_option("--iters", iters, "Random restarts for the upper bound")->check(CLI::Range(0, 1000000));
  ctype2->callback([&] { action = [&] { return k3c::cli::collapse_type2(file_a, mesh, iters, cfg); }; });

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    return fail(Error("usage", e.what(), e.get_name()), kExitUsage);
  }

  try {
    if (!action) return fail(Error("usage", "no command given"), kExitUsage);
    emit(action(), cfg);
    return kExitOk;
  } catch (Error const& e) {
    return fail(e, kExitDomain);
  } catch (std::exception const& e) {
    return fail(Error("internal", e.what()), kExitDomain);
  }
}
