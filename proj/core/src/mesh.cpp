#include "k3c/mesh.hpp"

#include <cmath>
#include <limits>
#include <queue>

#include "k3c/error.hpp"
#include "k3c/parallel.hpp"

namespace k3c {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Offset {
  int a, b;
  double length;  // in units of the grid spacing
};

// 32 neighbours: (1,0), (1,1), (2,1), (3,1), (3,2) under the symmetries of
// the square. Keeps the worst-case direction error of the graph metric
// near 1%.
std::vector<Offset> stencil() {
  std::vector<Offset> out;
  int const base[5][2] = {{1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}};
  for (auto const& ab : base) {
    for (int swap = 0; swap < 2; ++swap) {
      int a = swap ? ab[1] : ab[0], b = swap ? ab[0] : ab[1];
      if (swap && a == b) continue;
      for (int sa : {1, -1})
        for (int sb : {1, -1}) {
          if ((a == 0 && sa < 0) || (b == 0 && sb < 0)) continue;
          out.push_back({sa * a, sb * b, std::hypot(a, b)});
        }
    }
  }
  return out;
}

double segment_distance(Complex p, Complex q, Complex c) {
  Complex d = q - p;
  double len2 = std::norm(d);
  double t = len2 > 0.0 ? std::clamp(((c - p) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(p + t * d - c);
}

bool crosses(std::vector<Complex> const& punctures, Complex p, Complex q, double r) {
  for (Complex c : punctures)
    if (segment_distance(p, q, c) < r) return true;
  return false;
}

struct Link {
  std::size_t to;
  double weight;
};

}  // namespace

TropicalK3Mesh mesh_metric(WeierstrassFamily const& f, MeshOptions const& options) {
  int const res = options.resolution;
  double const radius = options.puncture_radius;
  if (res < 2) throw Error("invalid_argument", "mesh resolution must be at least 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("invalid_argument", "puncture radius must be positive");
  if (options.sample_grid < 1 || res % options.sample_grid != 0)
    throw Error("incompatible_grid", "sample grid must divide the mesh resolution");

  std::vector<SingularFiber> fibers = singular_fibers(f, options.fibers);
  DensityField field(f, fibers, 1e-12, options.periods);

  std::size_t const side = static_cast<std::size_t>(res) + 1;
  std::size_t const half = 2 * static_cast<std::size_t>(res) + 1;
  double const h = 4.0 / res;
  auto half_coord = [&](std::size_t i2, std::size_t j2) {
    return Complex(-2.0 + static_cast<double>(i2) * h / 2.0, -2.0 + static_cast<double>(j2) * h / 2.0);
  };
  Chart const charts[2] = {Chart::Affine, Chart::Infinity};

  // sqrt(ρ) on the half-spacing grid, NaN outside the disk or in a puncture.
  std::vector<double> root[2];
  for (auto& r : root) r.assign(half * half, std::numeric_limits<double>::quiet_NaN());
  parallel_for(2 * half, [&](std::size_t row) {
    int const c = static_cast<int>(row / half);
    std::size_t const i2 = row % half;
    for (std::size_t j2 = 0; j2 < half; ++j2) {
      Complex z = half_coord(i2, j2);
      if (std::abs(z) > 2.0 + 1e-12) continue;
      if (field.distance_to_puncture(charts[c], z) < radius) continue;
      double rho = field.density(charts[c], z);
      if (!(rho > 0.0)) throw Error("nonpositive_density", "metric density is not positive", to_string(charts[c]));
      root[c][i2 * half + j2] = std::sqrt(rho);
    }
  });

  auto node_id = [&](int c, std::size_t i, std::size_t j) { return static_cast<std::size_t>(c) * side * side + i * side + j; };
  auto node_root = [&](int c, std::size_t i, std::size_t j) { return root[c][(2 * i) * half + 2 * j]; };
  std::size_t const nodes = 2 * side * side;
  std::vector<char> live(nodes, 0);
  std::size_t live_count = 0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < side; ++i)
      for (std::size_t j = 0; j < side; ++j)
        if (!std::isnan(node_root(c, i, j))) live[node_id(c, i, j)] = 1, ++live_count;

  std::vector<Offset> const offsets = stencil();
  std::size_t const deg = offsets.size();
  std::vector<double> weight(nodes * deg, kInf);
  parallel_for(2 * side, [&](std::size_t row) {
    int const c = static_cast<int>(row / side);
    std::size_t const i = row % side;
    std::vector<Complex> const& punct = field.punctures(charts[c]);
    for (std::size_t j = 0; j < side; ++j) {
      std::size_t const id = node_id(c, i, j);
      if (!live[id]) continue;
      Complex const p = half_coord(2 * i, 2 * j);
      for (std::size_t o = 0; o < deg; ++o) {
        long const ni = static_cast<long>(i) + offsets[o].a, nj = static_cast<long>(j) + offsets[o].b;
        if (ni < 0 || nj < 0 || ni >= static_cast<long>(side) || nj >= static_cast<long>(side)) continue;
        if (!live[node_id(c, ni, nj)]) continue;
        Complex const q = half_coord(2 * ni, 2 * nj);
        if (crosses(punct, p, q, radius)) continue;
        double const sp = node_root(c, i, j), sq = node_root(c, ni, nj);
        double const sm = root[c][(2 * i + offsets[o].a) * half + (2 * j + offsets[o].b)];
        // Simpson's rule; sp + sq keeps the weight symmetric in the endpoints.
        weight[id * deg + o] = h * offsets[o].length * ((sp + sq) + 4.0 * sm) / 6.0;
      }
    }
  });

  // Chart gluing: each affine node in the overlap links to the corners of
  // the chart-at-infinity cell containing 1/z.
  std::vector<std::vector<Link>> links(nodes);
  std::size_t link_count = 0;
  std::vector<Complex> const& wpunct = field.punctures(Chart::Infinity);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      std::size_t const id = node_id(0, i, j);
      if (!live[id]) continue;
      Complex const z = half_coord(2 * i, 2 * j);
      double const az = std::abs(z);
      if (az < 0.5 || az > 2.0) continue;
      Complex const w = 1.0 / z;
      // sqrt(ρ_w) at w = 1/z from the affine value: ρ_w = ρ_z |z|^4.
      double const sw = node_root(0, i, j) * az * az;
      double const u = (w.real() + 2.0) / h, v = (w.imag() + 2.0) / h;
      long const u0 = static_cast<long>(std::floor(u)), v0 = static_cast<long>(std::floor(v));
      for (long du = 0; du < 2; ++du)
        for (long dv = 0; dv < 2; ++dv) {
          long const wi = u0 + du, wj = v0 + dv;
          if (wi < 0 || wj < 0 || wi >= static_cast<long>(side) || wj >= static_cast<long>(side)) continue;
          std::size_t const wid = node_id(1, wi, wj);
          if (!live[wid]) continue;
          Complex const q = half_coord(2 * wi, 2 * wj);
          if (crosses(wpunct, w, q, radius)) continue;
          double const len = std::abs(q - w) * (sw + node_root(1, wi, wj)) / 2.0;
          links[id].push_back({wid, len});
          links[wid].push_back({id, len});
          ++link_count;
        }
    }

  auto dijkstra = [&](std::size_t source) {
    std::vector<double> dist(nodes, kInf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      std::size_t const c = u / (side * side), rem = u % (side * side);
      long const i = static_cast<long>(rem / side), j = static_cast<long>(rem % side);
      for (std::size_t o = 0; o < deg; ++o) {
        double const wt = weight[u * deg + o];
        if (wt == kInf) continue;
        std::size_t const v = c * side * side + static_cast<std::size_t>(i + offsets[o].a) * side + (j + offsets[o].b);
        if (d + wt < dist[v]) dist[v] = d + wt, heap.push({dist[v], v});
      }
      for (Link const& l : links[u])
        if (d + l.weight < dist[l.to]) dist[l.to] = d + l.weight, heap.push({dist[l.to], l.to});
    }
    return dist;
  };

  // Carrier points on the coarse grid, snapped off puncture disks.
  TropicalK3Mesh mesh;
  std::vector<std::size_t> carrier;
  std::vector<std::string> labels;
  std::size_t const step = static_cast<std::size_t>(res / options.sample_grid);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < side; i += step)
      for (std::size_t j = 0; j < side; j += step) {
        Complex const z = half_coord(2 * i, 2 * j);
        bool const inside = c == 0 ? std::abs(z) <= 1.0 + 1e-12 : std::abs(z) < 1.0 - 1e-12;
        if (!inside) continue;
        std::size_t id = node_id(c, i, j);
        bool moved = false;
        if (!live[id]) {
          double best = kInf;
          for (std::size_t a = 0; a < side; ++a)
            for (std::size_t b = 0; b < side; ++b) {
              std::size_t cand = node_id(c, a, b);
              double d = std::abs(half_coord(2 * a, 2 * b) - z);
              if (live[cand] && d < best) best = d, id = cand;
            }
          if (best == kInf) throw Error("disconnected_mesh", "no live node available for a carrier point");
          moved = true;
        }
        std::size_t const rem = id % (side * side);
        carrier.push_back(id);
        labels.push_back(std::string(c == 0 ? "z:" : "w:") + std::to_string(i / step) + "," + std::to_string(j / step));
        mesh.charts.push_back(charts[c]);
        mesh.coordinates.push_back(half_coord(2 * (rem / side), 2 * (rem % side)));
        double const s = node_root(c, rem / side, rem % side);
        mesh.density.push_back(s * s);
        mesh.snapped.push_back(moved);
      }

  std::size_t const n = carrier.size();
  Eigen::MatrixXd raw(n, n);
  std::size_t reached = 0;
  parallel_for(n, [&](std::size_t a) {
    std::vector<double> dist = dijkstra(carrier[a]);
    for (std::size_t b = 0; b < n; ++b) raw(a, b) = dist[carrier[b]];
    if (a == 0) {
      std::size_t count = 0;
      for (std::size_t v = 0; v < nodes; ++v) count += live[v] && dist[v] < kInf;
      reached = count;
    }
  });
  if (reached != live_count)
    throw Error("disconnected_mesh", "mesh graph is disconnected (punctures too large?)",
                std::to_string(live_count - reached) + " unreachable nodes");

  for (std::size_t a = 0; a < n; ++a) {
    raw(a, a) = 0.0;
    for (std::size_t b = a + 1; b < n; ++b) raw(a, b) = raw(b, a) = std::min(raw(a, b), raw(b, a));
  }
  FiniteMetricSpace unscaled(std::move(raw), labels, true);
  mesh.raw_diameter = diameter(unscaled);
  mesh.space = rescale_to_diameter_one(unscaled);
  mesh.punctures = std::move(fibers);
  mesh.node_count = live_count;
  std::size_t half_edges = 0;
  for (double w : weight) half_edges += w < kInf;
  mesh.edge_count = half_edges / 2 + link_count;
  return mesh;
}

}  // namespace k3c
