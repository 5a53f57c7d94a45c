#include "georbf/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace georbf {

namespace {

constexpr std::uint32_t kNodeCapacity = 16;

Aabb box_of(std::span<const Vec3> pts, std::span<const std::uint32_t> ids) {
  Aabb b = Aabb::empty();
  for (std::uint32_t id : ids) b.include(pts[id]);
  return b;
}

}  // namespace

PointIndex::PointIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  const std::size_t n = points_.size();
  if (n == 0) return;
  ids_.resize(n);
  std::iota(ids_.begin(), ids_.end(), 0u);

  // Sort-tile-recursive: tile along x, then y, then z into leaves of at most
  // kNodeCapacity points. Ties broken by id for a deterministic layout.
  const std::size_t n_leaves = (n + kNodeCapacity - 1) / kNodeCapacity;
  const std::size_t s = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(n_leaves))));
  const auto by = [this](int axis) {
    return [this, axis](std::uint32_t a, std::uint32_t b) {
      const double ca = axis == 0 ? points_[a].x : axis == 1 ? points_[a].y : points_[a].z;
      const double cb = axis == 0 ? points_[b].x : axis == 1 ? points_[b].y : points_[b].z;
      return ca < cb || (ca == cb && a < b);
    };
  };
  std::sort(ids_.begin(), ids_.end(), by(0));
  const std::size_t slab_x = (n + s - 1) / s;
  for (std::size_t x0 = 0; x0 < n; x0 += slab_x) {
    const std::size_t x1 = std::min(n, x0 + slab_x);
    std::sort(ids_.begin() + x0, ids_.begin() + x1, by(1));
    const std::size_t slab_y = (x1 - x0 + s - 1) / s;
    for (std::size_t y0 = x0; y0 < x1; y0 += slab_y) {
      const std::size_t y1 = std::min(x1, y0 + slab_y);
      std::sort(ids_.begin() + y0, ids_.begin() + y1, by(2));
    }
  }

  // Leaf level.
  std::vector<std::uint32_t> level;
  for (std::size_t off = 0; off < n; off += kNodeCapacity) {
    const std::uint32_t count = static_cast<std::uint32_t>(std::min<std::size_t>(kNodeCapacity, n - off));
    Node leaf;
    leaf.leaf = true;
    leaf.first = static_cast<std::uint32_t>(off);
    leaf.count = count;
    leaf.box = box_of(points_, {ids_.data() + off, count});
    level.push_back(static_cast<std::uint32_t>(nodes_.size()));
    nodes_.push_back(leaf);
  }
  // Group consecutive nodes (already spatially ordered by the tiling) into
  // parents until a single root remains.
  while (level.size() > 1) {
    std::vector<std::uint32_t> next;
    for (std::size_t off = 0; off < level.size(); off += kNodeCapacity) {
      const std::uint32_t count =
          static_cast<std::uint32_t>(std::min<std::size_t>(kNodeCapacity, level.size() - off));
      Node inner;
      inner.leaf = false;
      inner.first = level[off];
      inner.count = count;
      inner.box = Aabb::empty();
      for (std::uint32_t c = 0; c < count; ++c) inner.box.include(nodes_[level[off + c]].box);
      next.push_back(static_cast<std::uint32_t>(nodes_.size()));
      nodes_.push_back(inner);
    }
    level = std::move(next);
  }
  root_ = level.front();
}

void PointIndex::query_box(const Aabb& box, std::vector<std::uint32_t>& out) const {
  if (nodes_.empty()) return;
  std::vector<std::uint32_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (!node.box.intersects(box)) continue;
    if (node.leaf) {
      for (std::uint32_t k = 0; k < node.count; ++k) {
        const std::uint32_t id = ids_[node.first + k];
        if (box.contains(points_[id])) out.push_back(id);
      }
    } else {
      for (std::uint32_t c = 0; c < node.count; ++c) stack.push_back(node.first + c);
    }
  }
}

std::vector<std::uint32_t> PointIndex::query_box(const Aabb& box) const {
  std::vector<std::uint32_t> out;
  query_box(box, out);
  return out;
}

std::uint32_t PointIndex::nearest(const Vec3& query) const {
  if (points_.empty()) throw EmptyInputError("nearest: empty point index");
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_id = 0;
  // Depth-first with box-distance pruning; the (distance, id) tie rule makes
  // the result independent of traversal order.
  std::vector<std::uint32_t> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.box.squared_distance_to(query) > best_d2) continue;
    if (node.leaf) {
      for (std::uint32_t k = 0; k < node.count; ++k) {
        const std::uint32_t id = ids_[node.first + k];
        const double d2 = squared_distance(points_[id], query);
        if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
          best_d2 = d2;
          best_id = id;
        }
      }
    } else {
      // Visit nearer children first so pruning kicks in early (the stack pops
      // from the back, so push farthest first).
      std::pair<double, std::uint32_t> order[kNodeCapacity];
      for (std::uint32_t c = 0; c < node.count; ++c) {
        const std::uint32_t child = node.first + c;
        order[c] = {nodes_[child].box.squared_distance_to(query), child};
      }
      std::sort(order, order + node.count, std::greater<>{});
      for (std::uint32_t c = 0; c < node.count; ++c) stack.push_back(order[c].second);
    }
  }
  return best_id;
}

void PointIndex::heap_offer(std::vector<double>& heap, std::size_t m, double d) {
  if (heap.size() < m) {
    heap.push_back(d);
    std::push_heap(heap.begin(), heap.end());
  } else if (d < heap.front()) {
    std::pop_heap(heap.begin(), heap.end());
    heap.back() = d;
    std::push_heap(heap.begin(), heap.end());
  }
}

}  // namespace georbf
