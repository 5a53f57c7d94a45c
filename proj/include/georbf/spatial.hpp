#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "georbf/error.hpp"
#include "georbf/vec3.hpp"

namespace georbf {

/// Bulk-loaded (sort-tile-recursive) R-tree over a fixed point set.
/// Node capacity 16; the structure is deterministic for a given input.
/// Immutable after construction, safe for concurrent queries.
class PointIndex {
 public:
  PointIndex() = default;
  explicit PointIndex(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  const Vec3& point(std::size_t id) const { return points_[id]; }
  std::span<const Vec3> points() const { return points_; }

  /// Ids of all points inside the box (closed intervals). Appends to out in
  /// deterministic traversal order; no duplicates.
  void query_box(const Aabb& box, std::vector<std::uint32_t>& out) const;
  std::vector<std::uint32_t> query_box(const Aabb& box) const;

  /// Id of the point closest to the query; ties broken by smallest id.
  std::uint32_t nearest(const Vec3& query) const;

  /// Distance from center to its m-th nearest neighbor under `metric`,
  /// considering only points with metric value <= r_cap; returns r_cap when
  /// fewer than m such points exist. Candidates are gathered with a box
  /// query of half-width box_halfwidth (default r_cap) and ranked through a
  /// size-m max-heap. A metric returning +inf excludes the candidate.
  /// exclude_id (if >= 0) is skipped.
  template <class Metric>
  double mth_nearest_distance(const Vec3& center, std::size_t m, double r_cap, Metric&& metric,
                              double box_halfwidth = -1.0, std::int64_t exclude_id = -1) const {
    check_mth_args(m, r_cap);
    const double hw = box_halfwidth < 0.0 ? r_cap : box_halfwidth;
    std::vector<std::uint32_t> cand;
    query_box(Aabb::around(center, hw), cand);
    std::vector<double> heap;
    heap.reserve(m);
    for (std::uint32_t id : cand) {
      if (exclude_id >= 0 && id == static_cast<std::uint32_t>(exclude_id)) continue;
      const double d = metric(id);
      if (!(d <= r_cap)) continue;
      heap_offer(heap, m, d);
    }
    return heap.size() == m ? heap.front() : r_cap;
  }

  /// Same contract as mth_nearest_distance, accelerated by a cheap lower
  /// bound lb(id) <= metric(id) and an incrementally grown candidate box.
  /// Requires metric(id) >= distance(center, point(id)) - lb_slack, which
  /// makes the early-termination certificate exact: the returned value is
  /// identical to the plain single-box algorithm.
  template <class Metric, class LowerBound>
  double mth_nearest_distance_lb(const Vec3& center, std::size_t m, double r_cap, Metric&& metric,
                                 LowerBound&& lb, double lb_slack, double box_halfwidth_max,
                                 std::int64_t exclude_id = -1) const {
    check_mth_args(m, r_cap);
    const double hw_max = box_halfwidth_max < 0.0 ? r_cap : box_halfwidth_max;
    double hw = hw_max / 8.0;
    std::vector<std::uint32_t> cand;
    std::vector<double> heap;
    heap.reserve(m);
    for (;;) {
      cand.clear();
      heap.clear();
      query_box(Aabb::around(center, hw), cand);
      for (std::uint32_t id : cand) {
        if (exclude_id >= 0 && id == static_cast<std::uint32_t>(exclude_id)) continue;
        if (heap.size() == m && lb(id) >= heap.front()) continue;
        const double d = metric(id);
        if (!(d <= r_cap)) continue;
        heap_offer(heap, m, d);
      }
      // Any point outside the box is farther than hw in Euclidean distance,
      // hence its metric exceeds hw - lb_slack; once the running m-th value
      // is below that, growing the box cannot change the result.
      if ((heap.size() == m && heap.front() <= hw - lb_slack) || hw >= hw_max) break;
      hw = std::min(2.0 * hw, hw_max);
    }
    return heap.size() == m ? heap.front() : r_cap;
  }

 private:
  struct Node {
    Aabb box;
    std::uint32_t first = 0;  // leaf: offset into ids_; internal: first child node
    std::uint32_t count = 0;
    bool leaf = true;
  };

  static void check_mth_args(std::size_t m, double r_cap) {
    if (m == 0) throw ParameterError("mth_nearest_distance: m must be >= 1");
    if (!(r_cap > 0.0)) throw ParameterError("mth_nearest_distance: r_cap must be > 0");
  }

  // Size-m max-heap of the smallest values seen so far.
  static void heap_offer(std::vector<double>& heap, std::size_t m, double d);

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> ids_;  // leaf-order permutation of point ids
  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
};

}  // namespace georbf
