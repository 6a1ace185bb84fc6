#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "k3c/metric_space.hpp"
#include "k3c/weierstrass.hpp"

namespace k3c {

struct MeshOptions {
  int resolution = 100;  // fine grid cells per axis on [-2, 2] in each chart
  double puncture_radius = 1e-3;
  int sample_grid = 10;  // carrier grid cells per axis; must divide resolution
  FiberSearchOptions fibers;
  PeriodOptions periods;
};

// The sphere is covered by the disks |z| <= 2 and |w| <= 2 (w = 1/z), glued
// over the annulus 1/2 <= |z| <= 2. Distances are shortest paths for the
// length element sqrt(ρ)|dz|, reported on a coarse carrier grid: |z| <= 1 in
// the affine chart and |w| < 1 in the chart at infinity.
struct TropicalK3Mesh {
  FiniteMetricSpace space;  // carrier distances, rescaled to diameter 1
  std::vector<Chart> charts;
  std::vector<Complex> coordinates;
  std::vector<double> density;  // ρ in the carrier's own chart
  std::vector<bool> snapped;    // carrier moved off a puncture disk
  std::vector<SingularFiber> punctures;
  double raw_diameter = 0.0;
  bool normalized = true;
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
};

TropicalK3Mesh mesh_metric(WeierstrassFamily const& f, MeshOptions const& options = {});

}  // namespace k3c
