#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "georbf/geodesic.hpp"
#include "georbf/interp.hpp"
#include "georbf/mesh.hpp"

namespace georbf::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline RingSpec random_ring_spec(std::mt19937_64& gen, std::size_t max_vertices) {
  RingSpec spec;
  spec.major_radius = uniform(gen, 0.8, 1.5);
  spec.section_side = uniform(gen, 0.15, 0.4);
  spec.slit_angle = uniform(gen, 0.05, 0.6);
  spec.kind = (gen() & 1) ? ElementKind::Tet : ElementKind::Hex;
  for (;;) {
    spec.n_theta = 3 + gen() % 24;
    spec.n_section = 1 + gen() % 3;
    if ((spec.n_theta + 1) * (spec.n_section + 1) * (spec.n_section + 1) <= max_vertices) break;
  }
  return spec;
}

/// Uniform random point inside a random element (barycentric sample for
/// tets, trilinear for hexes).
inline Vec3 random_point_in_mesh(const Mesh& mesh, std::mt19937_64& gen) {
  const std::size_t e = gen() % mesh.num_elements();
  const auto el = mesh.element(e);
  if (mesh.kind == ElementKind::Tet) {
    double w[4] = {uniform(gen, 0, 1), uniform(gen, 0, 1), uniform(gen, 0, 1), uniform(gen, 0, 1)};
    const double sum = w[0] + w[1] + w[2] + w[3];
    Vec3 p;
    for (int k = 0; k < 4; ++k) p += (w[k] / sum) * mesh.vertices[el[k]];
    return p;
  }
  const double a = uniform(gen, 0, 1), b = uniform(gen, 0, 1), c = uniform(gen, 0, 1);
  const double wa[2] = {1 - a, a}, wb[2] = {1 - b, b}, wc[2] = {1 - c, c};
  // VTK hex corner order: (i,j,k) bits per corner.
  const int bits[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                          {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  Vec3 p;
  for (int k = 0; k < 8; ++k)
    p += (wa[bits[k][0]] * wb[bits[k][1]] * wc[bits[k][2]]) * mesh.vertices[el[k]];
  return p;
}

/// All-pairs shortest paths over the geodesic graph, O(n^3).
inline std::vector<std::vector<double>> floyd_warshall(const GeodesicGraph& g) {
  const std::size_t n = g.num_vertices();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (std::size_t v = 0; v < n; ++v)
    for (std::uint32_t k = g.adj_offsets[v]; k < g.adj_offsets[v + 1]; ++k)
      d[v][g.adj_vertex[k]] = std::min(d[v][g.adj_vertex[k]], g.adj_length[k]);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == inf) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    }
  return d;
}

struct DenseEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;
  friend bool operator==(const DenseEntry&, const DenseEntry&) = default;
};

/// Brute-force operator entries: evaluates the thresholded kernel for every
/// (row, column) pair with no spatial pruning at all. Fresh Dijkstra states
/// throughout; nonzero entries only, ordered by (column, row).
inline std::vector<DenseEntry> dense_assembly(std::span<const Vec3> rows,
                                              std::span<const Vec3> src,
                                              std::span<const double> radii,
                                              const GeodesicGraph* graph,
                                              const KernelParams& kernel, double h_ref_max) {
  std::vector<DenseEntry> out;
  const ThresholdConfig cfg{kernel.curvature_coeff, h_ref_max};
  std::unique_ptr<DijkstraState> state;
  if (graph) state = std::make_unique<DijkstraState>(*graph);
  for (std::uint32_t j = 0; j < src.size(); ++j) {
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
      double d;
      if (kernel.use_geodesic) {
        d = thresholded_distance(*graph, *state, src[j], rows[i], radii[j], cfg);
      } else {
        d = distance(src[j], rows[i]);
      }
      const double value = wendland(d, radii[j]);
      if (value > 0.0) out.push_back({i, j, value});
    }
  }
  return out;
}

inline std::vector<DenseEntry> csr_entries_by_column(const SparseMatrix& a) {
  std::vector<DenseEntry> out;
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      out.push_back({static_cast<std::uint32_t>(r), a.col[k], a.val[k]});
  std::sort(out.begin(), out.end(), [](const DenseEntry& x, const DenseEntry& y) {
    return x.col < y.col || (x.col == y.col && x.row < y.row);
  });
  return out;
}

/// Two parallel thin slabs joined at one end (a folded sheet): structured
/// hex grid over the bounding box with the cells inside the gap notch
/// removed, so the layers are geodesically far apart except around the fold.
/// The sheet extends along x in [0, length + fold], y in [0, width]; layer A
/// occupies z in [0, t], layer B z in [t + gap, 2t + gap], the fold fills
/// the notch for x > length.
struct FoldedSheetSpec {
  double length = 2.0;
  double width = 0.5;
  double thickness = 0.1;
  double gap = 0.06;
  std::size_t nx = 30;       // cells along the slab
  std::size_t ny = 7;        // cells across the width
  std::size_t nz_layer = 2;  // cells through each layer
  std::size_t nz_gap = 1;    // cells through the gap (kept only in the fold)
  std::size_t nx_fold = 3;   // cells of the fold region
  ElementKind kind = ElementKind::Tet;
};

inline Mesh generate_folded_sheet(const FoldedSheetSpec& s) {
  const std::size_t nx = s.nx + s.nx_fold;
  const std::size_t ny = s.ny;
  const std::size_t nz = 2 * s.nz_layer + s.nz_gap;
  const double dx = (s.length + s.length * static_cast<double>(s.nx_fold) / static_cast<double>(s.nx)) /
                    static_cast<double>(nx);
  const double dy = s.width / static_cast<double>(ny);
  std::vector<double> zs;  // grid planes along z
  for (std::size_t k = 0; k <= s.nz_layer; ++k)
    zs.push_back(s.thickness * static_cast<double>(k) / static_cast<double>(s.nz_layer));
  for (std::size_t k = 1; k <= s.nz_gap; ++k)
    zs.push_back(s.thickness + s.gap * static_cast<double>(k) / static_cast<double>(s.nz_gap));
  for (std::size_t k = 1; k <= s.nz_layer; ++k)
    zs.push_back(s.thickness + s.gap +
                 s.thickness * static_cast<double>(k) / static_cast<double>(s.nz_layer));

  const auto in_notch = [&](std::size_t i, std::size_t k) {
    return i < s.nx && k >= s.nz_layer && k < s.nz_layer + s.nz_gap;
  };

  // Full grid vertices, then drop the unused ones.
  const std::size_t stride_k = 1;
  const std::size_t stride_j = nz + 1;
  const std::size_t stride_i = (ny + 1) * (nz + 1);
  std::vector<std::int64_t> remap((nx + 1) * stride_i, -1);
  Mesh mesh;
  mesh.kind = s.kind;
  std::vector<std::uint32_t> cells;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t k = 0; k < nz; ++k) {
        if (in_notch(i, k)) continue;
        const std::size_t base = i * stride_i + j * stride_j + k * stride_k;
        const std::size_t corner[8] = {base,
                                       base + stride_i,
                                       base + stride_i + stride_j,
                                       base + stride_j,
                                       base + stride_k,
                                       base + stride_i + stride_k,
                                       base + stride_i + stride_j + stride_k,
                                       base + stride_j + stride_k};
        for (std::size_t c : corner)
          if (remap[c] < 0) {
            remap[c] = static_cast<std::int64_t>(mesh.vertices.size());
            const std::size_t gi = c / stride_i;
            const std::size_t gj = (c % stride_i) / stride_j;
            const std::size_t gk = c % stride_j;
            mesh.vertices.push_back({static_cast<double>(gi) * dx, static_cast<double>(gj) * dy,
                                     zs[gk]});
          }
        std::uint32_t local[8];
        for (int c = 0; c < 8; ++c) local[c] = static_cast<std::uint32_t>(remap[corner[c]]);
        if (s.kind == ElementKind::Hex) {
          cells.insert(cells.end(), local, local + 8);
        } else {
          constexpr int split[6][4] = {{0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6},
                                       {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6}};
          for (const auto& tet : split)
            for (int c : tet) cells.push_back(local[c]);
        }
      }
  mesh.connectivity = std::move(cells);
  return mesh;
}

}  // namespace georbf::testing
