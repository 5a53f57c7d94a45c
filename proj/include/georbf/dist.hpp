#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "georbf/geodesic.hpp"
#include "georbf/interp.hpp"
#include "georbf/vec3.hpp"

namespace georbf {

enum class PartitionScheme { Block, Morton };

/// Disjoint covering partition of [0, n_points) over n_ranks. Block gives
/// contiguous id ranges; Morton splits the Z-order curve into contiguous
/// runs. Throws ParameterError when n_ranks exceeds the point count.
std::vector<std::vector<std::uint64_t>> partition_points(std::span<const Vec3> points,
                                                         std::size_t n_ranks,
                                                         PartitionScheme scheme);

/// Union of axis-aligned boxes covering one rank's owned points, built by
/// repeatedly halving the most populated box along its longest axis and
/// re-tightening; empty halves are discarded.
struct CoarseRep {
  std::vector<Aabb> boxes;
  bool covers(const Vec3& p) const {
    for (const Aabb& b : boxes)
      if (b.contains(p)) return true;
    return false;
  }
  bool covers_inflated(const Vec3& p, double inflation) const {
    for (const Aabb& b : boxes)
      if (b.inflated(inflation).contains(p)) return true;
    return false;
  }
};

CoarseRep coarse_representation(std::span<const Vec3> owned_points, std::size_t max_boxes);

struct CommStats {
  std::uint64_t points_sent = 0;
  std::uint64_t points_received = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
};

/// A point travelling between ranks: global id plus coordinates.
struct PointRecord {
  std::uint64_t gid = 0;
  Vec3 p;
  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

/// Wire format: u64 record count, then per record u64 global id and three
/// f64 coordinates, all little-endian.
std::vector<std::uint8_t> encode_point_batch(std::span<const PointRecord> records);
std::vector<PointRecord> decode_point_batch(std::span<const std::uint8_t> bytes);

/// Simulated distributed universe: per-rank owned source/destination point
/// id sets over shared global arrays, plus reliable per-sender-FIFO
/// mailboxes as the only inter-rank channel.
class RankSpace {
 public:
  RankSpace(std::vector<Vec3> src_points, std::vector<Vec3> dst_points, std::size_t n_ranks,
            PartitionScheme scheme,
            std::size_t mailbox_capacity_bytes = std::size_t(1) << 32);

  std::size_t n_ranks() const { return n_ranks_; }
  std::span<const Vec3> src_points() const { return src_points_; }
  std::span<const Vec3> dst_points() const { return dst_points_; }
  std::span<const std::uint64_t> owned_src(std::size_t rank) const { return owned_src_[rank]; }
  std::span<const std::uint64_t> owned_dst(std::size_t rank) const { return owned_dst_[rank]; }

  void send(std::size_t from, std::size_t to, std::vector<std::uint8_t> message);
  /// All pending messages from `from` to `to`, in sending order.
  std::vector<std::vector<std::uint8_t>> drain(std::size_t from, std::size_t to);

  const CommStats& stats(std::size_t rank) const { return stats_[rank]; }
  void record_points(std::size_t rank, std::uint64_t sent, std::uint64_t received) {
    stats_[rank].points_sent += sent;
    stats_[rank].points_received += received;
  }
  std::uint64_t total_points_sent() const;
  std::uint64_t total_points_received() const;

 private:
  std::size_t n_ranks_;
  std::vector<Vec3> src_points_;
  std::vector<Vec3> dst_points_;
  std::vector<std::vector<std::uint64_t>> owned_src_;
  std::vector<std::vector<std::uint64_t>> owned_dst_;
  std::vector<std::vector<std::vector<std::uint8_t>>> mailbox_;  // [from * n + to]
  std::vector<std::size_t> mailbox_bytes_;
  std::size_t mailbox_capacity_;
  std::vector<CommStats> stats_;
};

struct ExchangeResult {
  // Per rank, merged own + received records, deduplicated, sorted by gid.
  std::vector<std::vector<PointRecord>> y_src;
  std::vector<std::vector<PointRecord>> y_dst;
};

/// Coarse-rep point exchange: every rank p sends rank r the owned points
/// falling inside r's representation inflated by `inflation` (covering the
/// largest possible support radius plus snap slack), then each rank merges
/// what it received with what it owns.
ExchangeResult exchange_points(RankSpace& space, std::span<const CoarseRep> src_reps,
                               double inflation);

/// Restriction of the geodesic graph to the vertices within `radius` (in the
/// max norm) of any owned point. Edges to vertices outside the subset are
/// recorded in missing_edge_floor so a too-tight halo is detected instead of
/// silently changing distances. Vertices keep their global order.
struct HaloGraph {
  GeodesicGraph graph;
  std::vector<std::uint32_t> global_vertex;  // sorted, local id -> global id
};

HaloGraph build_halo(const GeodesicGraph& full, std::span<const Vec3> owned_points, double radius);

struct DistributedReport {
  std::vector<CommStats> comm;
  std::size_t halo_vertices_total = 0;
};

/// Runs the full rank-parallel assembly protocol (coarse reps, point
/// exchange, per-rank halo graphs, per-rank column assembly) and gathers the
/// result. The operator is bit-identical to serial assemble() on the same
/// global inputs for every rank count and partition scheme.
InterpolationOperator distributed_assemble(RankSpace& space, const GeodesicGraph* graph,
                                           const AssemblyConfig& config,
                                           DistributedReport* report = nullptr,
                                           std::size_t coarse_boxes = 8);

}  // namespace georbf
