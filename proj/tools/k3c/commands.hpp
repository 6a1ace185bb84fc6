#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "k3c/io.hpp"

namespace k3c::cli {

struct RunConfig {
  std::string out;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;  // from --tol.<name>
};

// Names accepted by --tol.<name>.
bool known_tolerance(std::string const& name);
double tolerance(RunConfig const& cfg, std::string const& name, double fallback);

struct Result {
  io::Json json;
  std::string summary;  // one line for stderr
};

struct MeshFlags {
  int resolution = 100;
  double puncture = 1e-3;
  int grid = 10;
  int samples = 0;
};

Result lattice_signature(std::string const& lattice_file);
Result lattice_quotient(std::string const& lattice_file, std::string const& vector_file);
Result lattice_classify(std::string const& lattice_file, std::string const& subspace_file);
Result degenerate_classify(std::string const& monodromy_file, std::optional<std::string> const& lattice_file);
Result fibration_analyze(std::string const& family_file, RunConfig const& cfg);
Result fibration_mesh(std::string const& family_file, MeshFlags const& flags, RunConfig const& cfg);
Result torus(std::string const& gram_file, int samples, bool mod_minus_one);
Result gh(std::string const& a_file, std::string const& b_file, int iters, RunConfig const& cfg);
Result collapse_phi(std::string const& input_file, MeshFlags const& flags, RunConfig const& cfg);
Result collapse_probe(std::string const& path_file, MeshFlags const& flags, RunConfig const& cfg);
Result collapse_type2(std::string const& input_file, MeshFlags const& flags, int iters, RunConfig const& cfg);

}  // namespace k3c::cli
