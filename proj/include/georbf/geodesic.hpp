#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "georbf/mesh.hpp"
#include "georbf/spatial.hpp"
#include "georbf/vec3.hpp"

namespace georbf {

/// Undirected shortest-path graph over the vertices of a reference mesh.
/// Two vertices are adjacent iff they share an element, which realizes
/// travel along edges and element diagonals; the edge weight is the
/// Euclidean distance between the endpoints.
///
/// Immutable after construction and shareable across threads. When the graph
/// is a restriction to a vertex subset (see dist.hpp), missing_edge_floor[v]
/// holds the length of the shortest absent edge at v, used to detect that a
/// truncated search would have needed a vertex outside the subset.
struct GeodesicGraph {
  std::vector<Vec3> coords;
  std::vector<std::uint32_t> adj_offsets;  // size num_vertices + 1
  std::vector<std::uint32_t> adj_vertex;
  std::vector<double> adj_length;
  PointIndex vertex_index;
  std::vector<double> missing_edge_floor;  // empty for a full graph

  std::size_t num_vertices() const { return coords.size(); }
  void finalize_index() { vertex_index = PointIndex(coords); }
};

GeodesicGraph build_graph(const Mesh& reference_mesh);

/// Parameters of the thresholded Euclidean distance. beta may be +inf,
/// which disables the high-curvature branch. h_max is the maximum element
/// diameter of the reference mesh.
struct ThresholdConfig {
  double beta = 0.5;
  double h_max = 0.0;
};

/// Single-source truncated Dijkstra state, reusable across queries with the
/// same source (the open/closed sets and tentative distances persist and the
/// search resumes where it stopped). Single-owner: one instance per worker.
class DijkstraState {
 public:
  explicit DijkstraState(const GeodesicGraph& graph);

  /// Rebinds the state to a new source, discarding previous progress.
  /// A no-op when the source is unchanged.
  void set_source(std::uint32_t source);
  std::uint32_t source() const { return source_; }

  /// Distance oracle with early exit: returns the exact shortest-path
  /// distance g when g <= r_threshold and +inf otherwise. The result is a
  /// pure function of (graph, source, target, r_threshold) regardless of
  /// how far previous queries advanced the search; rank- and thread-count
  /// invariance of the assembled matrices rests on that. Skips the search
  /// entirely when the straight-line distance already exceeds r_threshold.
  double vertex_distance(std::uint32_t target, double r_threshold);

 private:
  void advance(std::uint32_t target, double r_threshold);

  const GeodesicGraph* graph_;
  std::uint32_t source_ = std::numeric_limits<std::uint32_t>::max();
  std::vector<double> dist_;
  std::vector<std::uint32_t> stamp_;  // epoch per vertex; stale entries are unreached
  std::vector<std::uint8_t> settled_;
  std::uint32_t epoch_ = 0;
  // Min-heap with lazy deletion.
  std::priority_queue<std::pair<double, std::uint32_t>, std::vector<std::pair<double, std::uint32_t>>,
                      std::greater<>>
      open_;

  bool reached(std::uint32_t v) const { return stamp_[v] == epoch_; }
};

/// Discrete geodesic distance between arbitrary points: snap each to the
/// nearest graph vertex (smallest id on ties), then vertex_distance. The
/// state is rebound to the snapped source.
double point_distance(const GeodesicGraph& graph, DijkstraState& state, const Vec3& x,
                      const Vec3& y, double r_threshold);

/// Thresholded Euclidean distance:
///   +inf                 if g > R
///   g                    if beta*h_max + |x-y| < g <= R
///   |x-y|                if g <= beta*h_max + |x-y|
/// where g is the discrete geodesic distance between x and y.
double thresholded_distance(const GeodesicGraph& graph, DijkstraState& state, const Vec3& x,
                            const Vec3& y, double r, const ThresholdConfig& cfg);

}  // namespace georbf
