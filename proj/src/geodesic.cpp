#include "georbf/geodesic.hpp"

#include <algorithm>

#include "georbf/error.hpp"

namespace georbf {

GeodesicGraph build_graph(const Mesh& mesh) {
  if (mesh.num_vertices() == 0) throw EmptyInputError("build_graph: empty mesh");
  const std::size_t n = mesh.num_vertices();

  // Directed pair list (both directions), then dedupe per vertex.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  const std::size_t npe = nodes_per_element(mesh.kind);
  pairs.reserve(mesh.num_elements() * npe * (npe - 1));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    for (std::size_t a = 0; a < el.size(); ++a)
      for (std::size_t b = a + 1; b < el.size(); ++b) {
        pairs.emplace_back(el[a], el[b]);
        pairs.emplace_back(el[b], el[a]);
      }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  GeodesicGraph g;
  g.coords = mesh.vertices;
  g.adj_offsets.assign(n + 1, 0);
  for (const auto& [u, v] : pairs) {
    (void)v;
    ++g.adj_offsets[u + 1];
  }
  for (std::size_t v = 0; v < n; ++v) g.adj_offsets[v + 1] += g.adj_offsets[v];
  g.adj_vertex.resize(pairs.size());
  g.adj_length.resize(pairs.size());
  std::size_t k = 0;
  for (const auto& [u, v] : pairs) {
    (void)u;
    g.adj_vertex[k] = v;
    g.adj_length[k] = distance(g.coords[pairs[k].first], g.coords[v]);
    ++k;
  }
  g.finalize_index();
  return g;
}

DijkstraState::DijkstraState(const GeodesicGraph& graph)
    : graph_(&graph),
      dist_(graph.num_vertices(), 0.0),
      stamp_(graph.num_vertices(), 0),
      settled_(graph.num_vertices(), 0) {}

void DijkstraState::set_source(std::uint32_t source) {
  if (source >= graph_->num_vertices())
    throw ParameterError("Dijkstra source vertex out of range");
  if (source == source_ && epoch_ != 0) return;
  source_ = source;
  ++epoch_;
  if (epoch_ == 0) {  // stamp wrap-around: flush everything
    std::fill(stamp_.begin(), stamp_.end(), 0u);
    epoch_ = 1;
  }
  open_ = decltype(open_)();
  dist_[source] = 0.0;
  stamp_[source] = epoch_;
  settled_[source] = 0;
  open_.emplace(0.0, source);
}

void DijkstraState::advance(std::uint32_t target, double r_threshold) {
  const bool halo = !graph_->missing_edge_floor.empty();
  while (!open_.empty()) {
    const auto [d, v] = open_.top();
    if (reached(v) && settled_[v]) {  // stale heap entry
      open_.pop();
      continue;
    }
    if (d > r_threshold) return;  // everything left is beyond the horizon
    open_.pop();
    settled_[v] = 1;
    if (halo && d + graph_->missing_edge_floor[v] <= r_threshold)
      throw InternalError("truncated Dijkstra needs a vertex outside the halo");
    for (std::uint32_t k = graph_->adj_offsets[v]; k < graph_->adj_offsets[v + 1]; ++k) {
      const std::uint32_t w = graph_->adj_vertex[k];
      const double cand = d + graph_->adj_length[k];
      if (!reached(w)) {
        stamp_[w] = epoch_;
        settled_[w] = 0;
        dist_[w] = cand;
        open_.emplace(cand, w);
      } else if (!settled_[w] && cand < dist_[w]) {
        dist_[w] = cand;
        open_.emplace(cand, w);
      }
    }
    if (v == target) return;
  }
}

double DijkstraState::vertex_distance(std::uint32_t target, double r_threshold) {
  if (source_ == std::numeric_limits<std::uint32_t>::max())
    throw ParameterError("Dijkstra state has no source");
  if (target >= graph_->num_vertices())
    throw ParameterError("Dijkstra target vertex out of range");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Straight-line lower bound: skip the search when it already exceeds the
  // threshold.
  if (distance(graph_->coords[source_], graph_->coords[target]) > r_threshold) return inf;
  if (!(reached(target) && settled_[target])) advance(target, r_threshold);
  if (reached(target) && settled_[target] && dist_[target] <= r_threshold) return dist_[target];
  // Not certified within the threshold (including targets settled earlier at
  // a larger distance): report +inf so the result does not depend on query
  // history.
  return inf;
}

double point_distance(const GeodesicGraph& graph, DijkstraState& state, const Vec3& x,
                      const Vec3& y, double r_threshold) {
  const std::uint32_t sx = graph.vertex_index.nearest(x);
  const std::uint32_t sy = graph.vertex_index.nearest(y);
  state.set_source(sx);
  return state.vertex_distance(sy, r_threshold);
}

double thresholded_distance(const GeodesicGraph& graph, DijkstraState& state, const Vec3& x,
                            const Vec3& y, double r, const ThresholdConfig& cfg) {
  const double euclid = distance(x, y);
  const double g = point_distance(graph, state, x, y, r);
  if (g > r) return std::numeric_limits<double>::infinity();
  if (cfg.beta * cfg.h_max + euclid < g) return g;
  return euclid;
}

}  // namespace georbf
