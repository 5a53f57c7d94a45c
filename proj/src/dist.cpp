#include "georbf/dist.hpp"

#include <algorithm>
#include <cstring>

#include "georbf/error.hpp"

namespace georbf {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

double get_f64(const std::uint8_t* p) {
  const std::uint64_t bits = get_u64(p);
  double v;
  std::memcpy(&v, &bits, sizeof(v));
  return v;
}

std::uint64_t morton_code(const Vec3& p, const Aabb& bounds) {
  constexpr std::uint64_t kBits = 21;
  constexpr double kMax = static_cast<double>((1u << kBits) - 1);
  const auto quantize = [&](double v, double lo, double hi) -> std::uint64_t {
    const double extent = hi - lo;
    double t = extent > 0.0 ? (v - lo) / extent : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return static_cast<std::uint64_t>(t * kMax);
  };
  const std::uint64_t qx = quantize(p.x, bounds.lo.x, bounds.hi.x);
  const std::uint64_t qy = quantize(p.y, bounds.lo.y, bounds.hi.y);
  const std::uint64_t qz = quantize(p.z, bounds.lo.z, bounds.hi.z);
  std::uint64_t code = 0;
  for (std::uint64_t b = 0; b < kBits; ++b) {
    code |= ((qx >> b) & 1u) << (3 * b);
    code |= ((qy >> b) & 1u) << (3 * b + 1);
    code |= ((qz >> b) & 1u) << (3 * b + 2);
  }
  return code;
}

std::vector<std::vector<std::uint64_t>> split_contiguous(std::span<const std::uint64_t> order,
                                                         std::size_t n_ranks) {
  const std::size_t n = order.size();
  std::vector<std::vector<std::uint64_t>> out(n_ranks);
  for (std::size_t r = 0; r < n_ranks; ++r) {
    const std::size_t begin = r * n / n_ranks;
    const std::size_t end = (r + 1) * n / n_ranks;
    out[r].assign(order.begin() + begin, order.begin() + end);
    std::sort(out[r].begin(), out[r].end());
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::uint64_t>> partition_points(std::span<const Vec3> points,
                                                         std::size_t n_ranks,
                                                         PartitionScheme scheme) {
  if (n_ranks < 1) throw ParameterError("partition_points: n_ranks must be >= 1");
  if (n_ranks > points.size())
    throw ParameterError("partition_points: n_ranks (" + std::to_string(n_ranks) +
                         ") exceeds point count (" + std::to_string(points.size()) + ")");
  std::vector<std::uint64_t> order(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) order[i] = i;
  if (scheme == PartitionScheme::Morton) {
    Aabb bounds = Aabb::empty();
    for (const Vec3& p : points) bounds.include(p);
    std::vector<std::uint64_t> codes(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) codes[i] = morton_code(points[i], bounds);
    std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
      return codes[a] < codes[b] || (codes[a] == codes[b] && a < b);
    });
  }
  return split_contiguous(order, n_ranks);
}

CoarseRep coarse_representation(std::span<const Vec3> owned_points, std::size_t max_boxes) {
  if (owned_points.empty()) throw EmptyInputError("coarse_representation: empty point set");
  if (max_boxes < 1) throw ParameterError("coarse_representation: max_boxes must be >= 1");

  struct Bucket {
    Aabb box;
    std::vector<std::uint32_t> members;
  };
  const auto tight = [&](const std::vector<std::uint32_t>& members) {
    Aabb b = Aabb::empty();
    for (std::uint32_t i : members) b.include(owned_points[i]);
    return b;
  };

  std::vector<Bucket> buckets(1);
  buckets[0].members.resize(owned_points.size());
  for (std::size_t i = 0; i < owned_points.size(); ++i)
    buckets[0].members[i] = static_cast<std::uint32_t>(i);
  buckets[0].box = tight(buckets[0].members);

  while (buckets.size() < max_boxes) {
    // Split the most populated box (ties: lowest index) at the midpoint of
    // its longest axis.
    std::size_t pick = 0;
    for (std::size_t b = 1; b < buckets.size(); ++b)
      if (buckets[b].members.size() > buckets[pick].members.size()) pick = b;
    if (buckets[pick].members.size() <= 1) break;
    const Aabb& box = buckets[pick].box;
    const double ex = box.hi.x - box.lo.x;
    const double ey = box.hi.y - box.lo.y;
    const double ez = box.hi.z - box.lo.z;
    int axis = 0;
    if (ey > ex && ey >= ez) axis = 1;
    else if (ez > ex && ez > ey) axis = 2;
    const double mid = axis == 0 ? 0.5 * (box.lo.x + box.hi.x)
                     : axis == 1 ? 0.5 * (box.lo.y + box.hi.y)
                                 : 0.5 * (box.lo.z + box.hi.z);
    std::vector<std::uint32_t> left, right;
    for (std::uint32_t i : buckets[pick].members) {
      const double c = axis == 0 ? owned_points[i].x : axis == 1 ? owned_points[i].y : owned_points[i].z;
      (c <= mid ? left : right).push_back(i);
    }
    if (left.empty() || right.empty()) {
      // Degenerate (all points on one side of the midpoint): nothing to gain.
      break;
    }
    buckets[pick].members = std::move(left);
    buckets[pick].box = tight(buckets[pick].members);
    Bucket other;
    other.members = std::move(right);
    other.box = tight(other.members);
    buckets.push_back(std::move(other));
  }

  CoarseRep rep;
  rep.boxes.reserve(buckets.size());
  for (const Bucket& b : buckets) rep.boxes.push_back(b.box);
  return rep;
}

std::vector<std::uint8_t> encode_point_batch(std::span<const PointRecord> records) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + records.size() * 32);
  put_u64(out, records.size());
  for (const PointRecord& r : records) {
    put_u64(out, r.gid);
    put_f64(out, r.p.x);
    put_f64(out, r.p.y);
    put_f64(out, r.p.z);
  }
  return out;
}

std::vector<PointRecord> decode_point_batch(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8) throw FormatError("point batch shorter than its length prefix");
  const std::uint64_t n = get_u64(bytes.data());
  if (bytes.size() != 8 + n * 32) throw FormatError("point batch length mismatch");
  std::vector<PointRecord> out(n);
  const std::uint8_t* p = bytes.data() + 8;
  for (std::uint64_t i = 0; i < n; ++i, p += 32) {
    out[i].gid = get_u64(p);
    out[i].p = {get_f64(p + 8), get_f64(p + 16), get_f64(p + 24)};
  }
  return out;
}

RankSpace::RankSpace(std::vector<Vec3> src_points, std::vector<Vec3> dst_points,
                     std::size_t n_ranks, PartitionScheme scheme,
                     std::size_t mailbox_capacity_bytes)
    : n_ranks_(n_ranks),
      src_points_(std::move(src_points)),
      dst_points_(std::move(dst_points)),
      mailbox_(n_ranks * n_ranks),
      mailbox_bytes_(n_ranks * n_ranks, 0),
      mailbox_capacity_(mailbox_capacity_bytes),
      stats_(n_ranks) {
  owned_src_ = partition_points(src_points_, n_ranks, scheme);
  // An absent destination side is allowed; every rank then owns nothing.
  owned_dst_ = dst_points_.empty() ? std::vector<std::vector<std::uint64_t>>(n_ranks)
                                   : partition_points(dst_points_, n_ranks, scheme);
}

void RankSpace::send(std::size_t from, std::size_t to, std::vector<std::uint8_t> message) {
  if (from >= n_ranks_ || to >= n_ranks_) throw ParameterError("send: rank out of range");
  if (from == to) throw ParameterError("send: self messages bypass the mailbox");
  const std::size_t slot = from * n_ranks_ + to;
  if (mailbox_bytes_[slot] + message.size() > mailbox_capacity_)
    throw CommError("mailbox " + std::to_string(from) + "->" + std::to_string(to) +
                    " exceeds its capacity");
  mailbox_bytes_[slot] += message.size();
  stats_[from].bytes_sent += message.size();
  stats_[to].bytes_received += message.size();
  mailbox_[slot].push_back(std::move(message));
}

std::vector<std::vector<std::uint8_t>> RankSpace::drain(std::size_t from, std::size_t to) {
  const std::size_t slot = from * n_ranks_ + to;
  mailbox_bytes_[slot] = 0;
  return std::exchange(mailbox_[slot], {});
}

std::uint64_t RankSpace::total_points_sent() const {
  std::uint64_t total = 0;
  for (const CommStats& s : stats_) total += s.points_sent;
  return total;
}

std::uint64_t RankSpace::total_points_received() const {
  std::uint64_t total = 0;
  for (const CommStats& s : stats_) total += s.points_received;
  return total;
}

namespace {

// One side (src or dst) of the exchange; stats are attributed by the caller.
void exchange_side(RankSpace& space, std::span<const CoarseRep> reps, double inflation,
                   bool src_side, std::vector<std::vector<PointRecord>>& merged,
                   std::vector<CommStats>& stats) {
  const std::size_t n_ranks = space.n_ranks();
  const auto points = src_side ? space.src_points() : space.dst_points();
  const auto owned = [&](std::size_t r) {
    return src_side ? space.owned_src(r) : space.owned_dst(r);
  };

  // Send phase.
  for (std::size_t sender = 0; sender < n_ranks; ++sender) {
    for (std::size_t receiver = 0; receiver < n_ranks; ++receiver) {
      if (receiver == sender) continue;
      std::vector<PointRecord> batch;
      for (std::uint64_t gid : owned(sender))
        if (reps[receiver].covers_inflated(points[gid], inflation))
          batch.push_back({gid, points[gid]});
      if (batch.empty()) continue;
      stats[sender].points_sent += batch.size();
      space.send(sender, receiver, encode_point_batch(batch));
    }
  }

  // Receive phase (a barrier separates the two in a real runtime).
  merged.assign(n_ranks, {});
  for (std::size_t receiver = 0; receiver < n_ranks; ++receiver) {
    auto& y = merged[receiver];
    for (std::uint64_t gid : owned(receiver)) y.push_back({gid, points[gid]});
    for (std::size_t sender = 0; sender < n_ranks; ++sender) {
      if (sender == receiver) continue;
      for (const auto& message : space.drain(sender, receiver)) {
        const auto batch = decode_point_batch(message);
        stats[receiver].points_received += batch.size();
        y.insert(y.end(), batch.begin(), batch.end());
      }
    }
    std::sort(y.begin(), y.end(),
              [](const PointRecord& a, const PointRecord& b) { return a.gid < b.gid; });
    y.erase(std::unique(y.begin(), y.end(),
                        [](const PointRecord& a, const PointRecord& b) { return a.gid == b.gid; }),
            y.end());
  }
}

}  // namespace

ExchangeResult exchange_points(RankSpace& space, std::span<const CoarseRep> src_reps,
                               double inflation) {
  if (src_reps.size() != space.n_ranks())
    throw ParameterError("exchange_points: need one coarse representation per rank");
  ExchangeResult result;
  std::vector<CommStats> stats(space.n_ranks());
  exchange_side(space, src_reps, inflation, true, result.y_src, stats);
  exchange_side(space, src_reps, inflation, false, result.y_dst, stats);
  for (std::size_t r = 0; r < space.n_ranks(); ++r)
    space.record_points(r, stats[r].points_sent, stats[r].points_received);
  return result;
}

HaloGraph build_halo(const GeodesicGraph& full, std::span<const Vec3> owned_points, double radius) {
  HaloGraph halo;
  std::vector<std::uint32_t> verts;
  for (const Vec3& p : owned_points) full.vertex_index.query_box(Aabb::around(p, radius), verts);
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  halo.global_vertex = std::move(verts);

  const auto local_of = [&](std::uint32_t gv) -> std::int64_t {
    const auto it = std::lower_bound(halo.global_vertex.begin(), halo.global_vertex.end(), gv);
    if (it == halo.global_vertex.end() || *it != gv) return -1;
    return it - halo.global_vertex.begin();
  };

  GeodesicGraph& g = halo.graph;
  const std::size_t n = halo.global_vertex.size();
  g.coords.resize(n);
  for (std::size_t v = 0; v < n; ++v) g.coords[v] = full.coords[halo.global_vertex[v]];
  g.adj_offsets.assign(n + 1, 0);
  g.missing_edge_floor.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t gv = halo.global_vertex[v];
    for (std::uint32_t k = full.adj_offsets[gv]; k < full.adj_offsets[gv + 1]; ++k)
      if (local_of(full.adj_vertex[k]) >= 0) ++g.adj_offsets[v + 1];
  }
  for (std::size_t v = 0; v < n; ++v) g.adj_offsets[v + 1] += g.adj_offsets[v];
  g.adj_vertex.resize(g.adj_offsets[n]);
  g.adj_length.resize(g.adj_offsets[n]);
  std::size_t cursor = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::uint32_t gv = halo.global_vertex[v];
    for (std::uint32_t k = full.adj_offsets[gv]; k < full.adj_offsets[gv + 1]; ++k) {
      const std::int64_t lw = local_of(full.adj_vertex[k]);
      if (lw >= 0) {
        g.adj_vertex[cursor] = static_cast<std::uint32_t>(lw);
        g.adj_length[cursor] = full.adj_length[k];
        ++cursor;
      } else {
        g.missing_edge_floor[v] = std::min(g.missing_edge_floor[v], full.adj_length[k]);
      }
    }
  }
  g.finalize_index();
  return halo;
}

InterpolationOperator distributed_assemble(RankSpace& space, const GeodesicGraph* graph,
                                           const AssemblyConfig& config, DistributedReport* report,
                                           std::size_t coarse_boxes) {
  const std::size_t n_ranks = space.n_ranks();
  const KernelParams& kernel = config.kernel;
  if (kernel.use_geodesic && graph == nullptr)
    throw ParameterError("distributed_assemble: geodesic mode needs a reference graph");

  // The support radius never exceeds radius_scale * radius_cap; every slack
  // below derives from that bound, not from radius_cap alone.
  const double max_radius = kernel.radius_scale * kernel.radius_cap;
  const double exchange_inflation = max_radius + 2.0 * config.pruning_slack;
  const double halo_radius = max_radius + 4.0 * config.pruning_slack;

  std::vector<CoarseRep> reps;
  reps.reserve(n_ranks);
  std::vector<std::vector<Vec3>> owned_src_coords(n_ranks);
  for (std::size_t r = 0; r < n_ranks; ++r) {
    auto& coords = owned_src_coords[r];
    coords.reserve(space.owned_src(r).size());
    for (std::uint64_t gid : space.owned_src(r)) coords.push_back(space.src_points()[gid]);
    reps.push_back(coarse_representation(coords, coarse_boxes));
  }

  const ExchangeResult exchange = exchange_points(space, reps, exchange_inflation);

  std::vector<detail::ColumnData> columns(space.src_points().size());
  std::size_t halo_total = 0;

  for (std::size_t rank = 0; rank < n_ranks; ++rank) {
    const auto& y_src = exchange.y_src[rank];
    const auto& y_dst = exchange.y_dst[rank];

    std::vector<Vec3> src_coords(y_src.size()), dst_coords(y_dst.size());
    std::vector<std::uint64_t> src_gids(y_src.size()), dst_gids(y_dst.size());
    for (std::size_t i = 0; i < y_src.size(); ++i) {
      src_coords[i] = y_src[i].p;
      src_gids[i] = y_src[i].gid;
    }
    for (std::size_t i = 0; i < y_dst.size(); ++i) {
      dst_coords[i] = y_dst[i].p;
      dst_gids[i] = y_dst[i].gid;
    }
    const PointIndex src_tree{src_coords};
    const PointIndex dst_tree{dst_coords};

    HaloGraph halo;
    const GeodesicGraph* rank_graph = nullptr;
    std::vector<std::uint32_t> src_snaps, dst_snaps;
    std::unique_ptr<DijkstraState> state;
    if (kernel.use_geodesic) {
      halo = build_halo(*graph, owned_src_coords[rank], halo_radius);
      halo_total += halo.graph.num_vertices();
      rank_graph = &halo.graph;
      src_snaps.resize(src_coords.size());
      for (std::size_t i = 0; i < src_coords.size(); ++i)
        src_snaps[i] = rank_graph->vertex_index.nearest(src_coords[i]);
      dst_snaps.resize(dst_coords.size());
      for (std::size_t i = 0; i < dst_coords.size(); ++i)
        dst_snaps[i] = rank_graph->vertex_index.nearest(dst_coords[i]);
      state = std::make_unique<DijkstraState>(*rank_graph);
    }

    const detail::PointTable src_table{src_coords, src_gids, &src_tree, src_snaps};
    const detail::PointTable dst_table{dst_coords, dst_gids, &dst_tree, dst_snaps};

    detail::ColumnScratch scratch;
    for (std::uint64_t gid : space.owned_src(rank)) {
      // Owned points are present exactly once in the deduplicated table.
      const auto it = std::lower_bound(src_gids.begin(), src_gids.end(), gid);
      const std::size_t self_local = static_cast<std::size_t>(it - src_gids.begin());
      detail::ColumnData& column = columns[gid];
      column.radius = detail::column_radius(src_table, self_local, rank_graph, state.get(), kernel,
                                            config.pruning_slack, scratch);
      if (state) state->set_source(src_snaps[self_local]);
      detail::column_entries(src_table, src_coords[self_local], column.radius, rank_graph,
                             state.get(), kernel, config.h_ref_max, config.pruning_slack, scratch,
                             column.int_entries);
      if (!dst_coords.empty())
        detail::column_entries(dst_table, src_coords[self_local], column.radius, rank_graph,
                               state.get(), kernel, config.h_ref_max, config.pruning_slack,
                               scratch, column.eval_entries);
    }
  }

  if (report) {
    report->comm.assign(space.n_ranks(), {});
    for (std::size_t r = 0; r < n_ranks; ++r) report->comm[r] = space.stats(r);
    report->halo_vertices_total = halo_total;
  }

  return assemble_from_columns(
      std::vector<Vec3>(space.src_points().begin(), space.src_points().end()),
      std::vector<Vec3>(space.dst_points().begin(), space.dst_points().end()), std::move(columns),
      config, nullptr);
}

}  // namespace georbf
