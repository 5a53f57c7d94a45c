#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "georbf/geodesic.hpp"
#include "georbf/solver.hpp"
#include "georbf/spatial.hpp"

namespace georbf {

/// phi(t, r) = max(1 - t/r, 0)^4 * (1 + 4 t/r). Compactly supported,
/// C2-continuous, with phi(0, r) = 1 and phi(t, r) = 0 for t >= r
/// (t = +inf included). Throws ParameterError for r <= 0.
double wendland(double t, double r);

struct KernelParams {
  std::size_t neighbor_count = 4;  // which nearest neighbor sets the support radius
  double radius_scale = 2.0;       // magnification of that distance
  double radius_cap = 0.0;         // neighbor-search saturation distance (required, > 0)
  double curvature_coeff = 0.5;    // beta in the thresholded distance; +inf disables
  bool use_geodesic = true;        // false: plain Euclidean distances everywhere
};

struct AssemblyConfig {
  KernelParams kernel;
  double h_ref_max = 0.0;      // max element diameter of the geodesic reference mesh
  double pruning_slack = 0.0;  // snap slack for candidate boxes (max element diameter)
  SolverOptions solver;
  unsigned threads = 1;
};

struct AssemblyTimings {
  double setup = 0.0;    // trees + vertex snapping
  double radii = 0.0;
  double entries = 0.0;
  double precond = 0.0;
  double rescale = 0.0;
  double assembly_total() const { return setup + radii + entries + precond; }
};

/// Scalar field samples bound to the identity of the point set they live on.
struct FieldVector {
  std::vector<double> values;
  std::uint64_t point_set_tag = 0;
};

struct EvalTimings {
  double solve = 0.0;  // coefficient solve
  double apply = 0.0;  // evaluation product and rescaling
};

std::uint64_t point_set_tag(std::span<const Vec3> points);

namespace detail {

/// One side of the assembly: points with their global ids, a spatial index,
/// and (when a geodesic graph is active) the nearest graph vertex per point.
struct PointTable {
  std::span<const Vec3> points;
  std::span<const std::uint64_t> gids;
  const PointIndex* tree = nullptr;
  std::span<const std::uint32_t> snaps;
};

struct ColumnScratch {
  std::vector<std::uint32_t> cand;
  std::vector<double> sx, sy, sz;   // gathered candidate coordinates
  std::vector<double> euclid;
  std::vector<std::uint32_t> keep;
  std::vector<double> dvals;
  std::vector<double> phi;
};

/// Support radius for the column anchored at src.points[self_local]:
/// radius_scale times the distance to the neighbor_count-th nearest source
/// point (excluding the anchor, metric distances saturated at radius_cap).
double column_radius(const PointTable& src, std::size_t self_local, const GeodesicGraph* graph,
                     DijkstraState* state, const KernelParams& kernel, double pruning_slack,
                     ColumnScratch& scratch);

/// Appends the nonzero kernel entries (global row id, value) of one column
/// against `table`. `state` must be bound to the anchor's snap vertex.
void column_entries(const PointTable& table, const Vec3& anchor, double radius,
                    const GeodesicGraph* graph, DijkstraState* state, const KernelParams& kernel,
                    double h_ref_max, double pruning_slack, ColumnScratch& scratch,
                    std::vector<std::pair<std::uint32_t, double>>& out);

struct ColumnData {
  double radius = 0.0;
  std::vector<std::pair<std::uint32_t, double>> int_entries;
  std::vector<std::pair<std::uint32_t, double>> eval_entries;
};

}  // namespace detail

/// Rescaled-localized RBF transfer operator: per-source support radii, the
/// interpolation and evaluation kernel matrices, the factorized
/// preconditioner and the rescaling denominator (interpolant of the
/// constant-one function on the destination points).
class InterpolationOperator {
 public:
  std::size_t num_src() const { return src_points_.size(); }
  std::size_t num_dst() const { return dst_points_.size(); }
  std::span<const Vec3> src_points() const { return src_points_; }
  std::span<const Vec3> dst_points() const { return dst_points_; }
  std::span<const double> radii() const { return radii_; }
  const SparseMatrix& phi_int() const { return phi_int_; }
  const SparseMatrix& phi_eval() const { return phi_eval_; }
  std::span<const double> rescale_denominator() const { return rescale_denominator_; }
  std::uint64_t src_tag() const { return src_tag_; }
  std::uint64_t dst_tag() const { return dst_tag_; }
  bool used_ilu() const { return used_ilu_; }

  /// Solves the interpolation system for the coefficients and evaluates the
  /// rescaled interpolant on the destination points.
  FieldVector evaluate(const FieldVector& f_src, SolveReport* report = nullptr,
                       EvalTimings* timings = nullptr) const;

  /// Component-wise evaluation reusing the factorized operator.
  std::vector<FieldVector> evaluate_many(std::span<const FieldVector> fields,
                                         std::vector<SolveReport>* reports = nullptr) const;

  /// Bitwise comparison of radii, matrices and rescaling data.
  bool identical_to(const InterpolationOperator& other) const;

  friend InterpolationOperator assemble_from_columns(std::vector<Vec3> src, std::vector<Vec3> dst,
                                                     std::vector<detail::ColumnData>&& columns,
                                                     const AssemblyConfig& config,
                                                     AssemblyTimings* timings);

 private:
  std::vector<Vec3> src_points_;
  std::vector<Vec3> dst_points_;
  std::vector<double> radii_;
  SparseMatrix phi_int_;
  SparseMatrix phi_eval_;
  std::vector<double> rescale_denominator_;
  std::unique_ptr<Preconditioner> precond_;
  SolverOptions solver_;
  std::uint64_t src_tag_ = 0;
  std::uint64_t dst_tag_ = 0;
  bool used_ilu_ = false;
};

/// Serial/threaded assembly (the simulated distributed path lives in
/// dist.hpp and produces bit-identical operators). `graph` is required when
/// kernel.use_geodesic is set and must cover the finer of the two meshes.
/// The result is identical for any thread count.
InterpolationOperator assemble(std::span<const Vec3> src_points, std::span<const Vec3> dst_points,
                               const GeodesicGraph* graph, const AssemblyConfig& config,
                               AssemblyTimings* timings = nullptr);

/// Builds the operator from per-column data; shared by the serial and
/// rank-simulated paths so both produce the same bits.
InterpolationOperator assemble_from_columns(std::vector<Vec3> src, std::vector<Vec3> dst,
                                            std::vector<detail::ColumnData>&& columns,
                                            const AssemblyConfig& config, AssemblyTimings* timings);

/// Per-source-point support radii (the standalone form of the radii pass).
std::vector<double> compute_radii(std::span<const Vec3> src_points, const GeodesicGraph* graph,
                                  const KernelParams& kernel, double pruning_slack);

/// Relative L-infinity error: max |f - exact| / max |exact|.
double linf_error(const FieldVector& f, std::span<const double> exact);

}  // namespace georbf
