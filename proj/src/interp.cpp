#include "georbf/interp.hpp"

#include <atomic>
#include <mutex>
#include <chrono>
#include <cmath>
#include <cstring>
#include <thread>

#include "georbf/error.hpp"
#include "georbf/kernels.hpp"

namespace georbf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void validate_kernel(const KernelParams& kernel) {
  if (kernel.neighbor_count < 1) throw ParameterError("neighbor_count must be >= 1");
  if (!(kernel.radius_scale >= 1.0)) throw ParameterError("radius_scale must be >= 1");
  if (!(kernel.radius_cap > 0.0)) throw ParameterError("radius_cap must be > 0");
  if (!(kernel.curvature_coeff > 0.0)) throw ParameterError("curvature_coeff must be > 0 (or +inf)");
}

// Chunked work distribution; per-column results land in preallocated slots,
// so the outcome does not depend on the number of workers. make_worker() is
// invoked once per worker thread and returns the chunk callback, giving each
// worker its own scratch and Dijkstra state.
template <class MakeWorker>
void parallel_columns(std::size_t n, unsigned threads, MakeWorker&& make_worker) {
  constexpr std::size_t kChunk = 64;
  if (threads <= 1 || n < 2 * kChunk) {
    auto fn = make_worker();
    fn(0, n);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto run = [&] {
    try {
      auto fn = make_worker();
      for (;;) {
        const std::size_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
        if (begin >= n) return;
        fn(begin, std::min(n, begin + kChunk));
      }
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::uint32_t> snap_points(std::span<const Vec3> points, const GeodesicGraph& graph,
                                       unsigned threads) {
  std::vector<std::uint32_t> snaps(points.size());
  parallel_columns(points.size(), threads, [&] {
    return [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) snaps[i] = graph.vertex_index.nearest(points[i]);
    };
  });
  return snaps;
}

std::vector<std::uint64_t> identity_gids(std::size_t n) {
  std::vector<std::uint64_t> gids(n);
  for (std::size_t i = 0; i < n; ++i) gids[i] = i;
  return gids;
}

}  // namespace

double wendland(double t, double r) {
  if (!(r > 0.0)) throw ParameterError("wendland: support radius must be > 0");
  if (!(t >= 0.0)) throw ParameterError("wendland: distance must be >= 0");
  double out;
  kernels::active().wendland(&t, r, &out, 1);
  return out;
}

std::uint64_t point_set_tag(std::span<const Vec3> points) {
  // FNV-1a over the raw coordinates.
  std::uint64_t h = 1469598103934665603ull;
  const unsigned char* bytes = reinterpret_cast<const unsigned char*>(points.data());
  const std::size_t n = points.size() * sizeof(Vec3);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  h ^= points.size();
  return h;
}

namespace detail {

double column_radius(const PointTable& src, std::size_t self_local, const GeodesicGraph* graph,
                     DijkstraState* state, const KernelParams& kernel, double pruning_slack,
                     ColumnScratch& scratch) {
  (void)scratch;
  const Vec3 anchor = src.points[self_local];
  const double r_cap = kernel.radius_cap;
  double d_m;
  if (kernel.use_geodesic) {
    const double slack2 = 2.0 * pruning_slack;
    state->set_source(src.snaps[self_local]);
    const Vec3 source_coord = graph->coords[src.snaps[self_local]];
    const auto metric = [&](std::uint32_t id) {
      // Candidates beyond r_cap + 2*slack cannot be within r_cap in the
      // geodesic metric; dropping them here also keeps every queried snap
      // well inside a rank's halo.
      if (distance(src.points[id], anchor) > r_cap + slack2)
        return std::numeric_limits<double>::infinity();
      return state->vertex_distance(src.snaps[id], r_cap);
    };
    const auto lower_bound = [&](std::uint32_t id) {
      return distance(graph->coords[src.snaps[id]], source_coord);
    };
    d_m = src.tree->mth_nearest_distance_lb(anchor, kernel.neighbor_count, r_cap, metric,
                                            lower_bound, slack2, r_cap + slack2,
                                            static_cast<std::int64_t>(self_local));
  } else {
    const auto metric = [&](std::uint32_t id) { return distance(src.points[id], anchor); };
    d_m = src.tree->mth_nearest_distance_lb(anchor, kernel.neighbor_count, r_cap, metric, metric,
                                            0.0, r_cap, static_cast<std::int64_t>(self_local));
  }
  if (!(d_m > 0.0))
    throw NumericalError("support radius degenerates to zero (coincident source points with "
                         "neighbor_count too small)");
  return kernel.radius_scale * d_m;
}

void column_entries(const PointTable& table, const Vec3& anchor, double radius,
                    const GeodesicGraph* graph, DijkstraState* state, const KernelParams& kernel,
                    double h_ref_max, double pruning_slack, ColumnScratch& scratch,
                    std::vector<std::pair<std::uint32_t, double>>& out) {
  (void)graph;
  const auto& ops = kernels::active();
  const double reach = radius + 2.0 * pruning_slack;
  scratch.cand.clear();
  table.tree->query_box(Aabb::around(anchor, reach), scratch.cand);
  const std::size_t nc = scratch.cand.size();
  if (nc == 0) return;

  scratch.sx.resize(nc);
  scratch.sy.resize(nc);
  scratch.sz.resize(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const Vec3& p = table.points[scratch.cand[k]];
    scratch.sx[k] = p.x;
    scratch.sy[k] = p.y;
    scratch.sz[k] = p.z;
  }
  scratch.euclid.resize(nc);
  ops.point_distance(scratch.sx.data(), scratch.sy.data(), scratch.sz.data(), anchor.x, anchor.y,
                     anchor.z, scratch.euclid.data(), nc);

  // Nonzero entries satisfy |x - y| < radius + 2*slack, so this filter is
  // lossless; it also bounds how far snapped queries can roam.
  scratch.keep.clear();
  scratch.dvals.clear();
  for (std::size_t k = 0; k < nc; ++k) {
    const double euclid = scratch.euclid[k];
    if (euclid > reach) continue;
    double d;
    if (kernel.use_geodesic) {
      const double g = state->vertex_distance(table.snaps[scratch.cand[k]], radius);
      if (g > radius)
        d = std::numeric_limits<double>::infinity();
      else if (kernel.curvature_coeff * h_ref_max + euclid < g)
        d = g;
      else
        d = euclid;
    } else {
      d = euclid;
    }
    scratch.keep.push_back(scratch.cand[k]);
    scratch.dvals.push_back(d);
  }

  scratch.phi.resize(scratch.dvals.size());
  ops.wendland(scratch.dvals.data(), radius, scratch.phi.data(), scratch.dvals.size());
  for (std::size_t k = 0; k < scratch.keep.size(); ++k)
    if (scratch.phi[k] > 0.0)
      out.emplace_back(static_cast<std::uint32_t>(table.gids[scratch.keep[k]]), scratch.phi[k]);
}

}  // namespace detail

InterpolationOperator assemble_from_columns(std::vector<Vec3> src, std::vector<Vec3> dst,
                                            std::vector<detail::ColumnData>&& columns,
                                            const AssemblyConfig& config, AssemblyTimings* timings) {
  InterpolationOperator op;
  op.src_points_ = std::move(src);
  op.dst_points_ = std::move(dst);
  op.src_tag_ = point_set_tag(op.src_points_);
  op.dst_tag_ = point_set_tag(op.dst_points_);
  op.solver_ = config.solver;

  const std::size_t n_src = op.src_points_.size();
  op.radii_.resize(n_src);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> int_cols(n_src), eval_cols(n_src);
  for (std::size_t j = 0; j < n_src; ++j) {
    op.radii_[j] = columns[j].radius;
    int_cols[j] = std::move(columns[j].int_entries);
    eval_cols[j] = std::move(columns[j].eval_entries);
  }
  op.phi_int_ = csr_from_columns(n_src, n_src, int_cols);
  op.phi_eval_ = csr_from_columns(op.dst_points_.size(), n_src, eval_cols);

  auto t0 = Clock::now();
  try {
    op.precond_ = std::make_unique<Ilu0>(Ilu0::factorize(op.phi_int_));
    op.used_ilu_ = true;
  } catch (const FactorizationError&) {
    op.precond_ = std::make_unique<JacobiPrecond>(op.phi_int_);
    op.used_ilu_ = false;
  }
  if (timings) timings->precond = seconds_since(t0);

  // One extra solve with right-hand side 1 caches the rescaling denominator,
  // so later field evaluations pay a single solve each.
  t0 = Clock::now();
  std::vector<double> ones(n_src, 1.0);
  std::vector<double> gamma(n_src);
  const SolveReport report = gmres(op.phi_int_, ones, *op.precond_, gamma, op.solver_);
  if (!report.converged)
    throw SolveError("rescaling solve did not converge", report.iterations,
                     report.relative_residual);
  op.rescale_denominator_ = matvec(op.phi_eval_, gamma);
  if (timings) timings->rescale = seconds_since(t0);
  return op;
}

InterpolationOperator assemble(std::span<const Vec3> src_points, std::span<const Vec3> dst_points,
                               const GeodesicGraph* graph, const AssemblyConfig& config,
                               AssemblyTimings* timings) {
  validate_kernel(config.kernel);
  if (src_points.empty()) throw EmptyInputError("assemble: empty source point set");
  if (config.kernel.use_geodesic && graph == nullptr)
    throw ParameterError("assemble: geodesic mode needs a reference graph");

  auto t0 = Clock::now();
  const PointIndex src_tree{std::vector<Vec3>(src_points.begin(), src_points.end())};
  const PointIndex dst_tree{std::vector<Vec3>(dst_points.begin(), dst_points.end())};
  std::vector<std::uint32_t> src_snaps, dst_snaps;
  if (config.kernel.use_geodesic) {
    src_snaps = snap_points(src_points, *graph, config.threads);
    dst_snaps = snap_points(dst_points, *graph, config.threads);
  }
  const std::vector<std::uint64_t> src_gids = identity_gids(src_points.size());
  const std::vector<std::uint64_t> dst_gids = identity_gids(dst_points.size());
  const detail::PointTable src{src_points, src_gids, &src_tree, src_snaps};
  const detail::PointTable dst{dst_points, dst_gids, &dst_tree, dst_snaps};
  if (timings) timings->setup = seconds_since(t0);

  const std::size_t n_src = src_points.size();
  std::vector<detail::ColumnData> columns(n_src);

  const bool geodesic = config.kernel.use_geodesic;

  t0 = Clock::now();
  parallel_columns(n_src, config.threads, [&] {
    auto state = geodesic ? std::make_shared<DijkstraState>(*graph) : nullptr;
    auto scratch = std::make_shared<detail::ColumnScratch>();
    return [&, state, scratch](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j)
        columns[j].radius = detail::column_radius(src, j, graph, state.get(), config.kernel,
                                                  config.pruning_slack, *scratch);
    };
  });
  if (timings) timings->radii = seconds_since(t0);

  t0 = Clock::now();
  parallel_columns(n_src, config.threads, [&] {
    auto state = geodesic ? std::make_shared<DijkstraState>(*graph) : nullptr;
    auto scratch = std::make_shared<detail::ColumnScratch>();
    return [&, state, scratch](std::size_t begin, std::size_t end) {
      for (std::size_t j = begin; j < end; ++j) {
        if (state) state->set_source(src_snaps[j]);
        detail::column_entries(src, src_points[j], columns[j].radius, graph, state.get(),
                               config.kernel, config.h_ref_max, config.pruning_slack, *scratch,
                               columns[j].int_entries);
        if (!dst_points.empty())
          detail::column_entries(dst, src_points[j], columns[j].radius, graph, state.get(),
                                 config.kernel, config.h_ref_max, config.pruning_slack, *scratch,
                                 columns[j].eval_entries);
      }
    };
  });
  if (timings) timings->entries = seconds_since(t0);

  return assemble_from_columns(std::vector<Vec3>(src_points.begin(), src_points.end()),
                               std::vector<Vec3>(dst_points.begin(), dst_points.end()),
                               std::move(columns), config, timings);
}

std::vector<double> compute_radii(std::span<const Vec3> src_points, const GeodesicGraph* graph,
                                  const KernelParams& kernel, double pruning_slack) {
  validate_kernel(kernel);
  if (src_points.empty()) throw EmptyInputError("compute_radii: empty source point set");
  if (kernel.use_geodesic && graph == nullptr)
    throw ParameterError("compute_radii: geodesic mode needs a reference graph");
  const PointIndex tree{std::vector<Vec3>(src_points.begin(), src_points.end())};
  std::vector<std::uint32_t> snaps;
  if (kernel.use_geodesic) snaps = snap_points(src_points, *graph, 1);
  const std::vector<std::uint64_t> gids = identity_gids(src_points.size());
  const detail::PointTable src{src_points, gids, &tree, snaps};

  std::vector<double> radii(src_points.size());
  std::unique_ptr<DijkstraState> state;
  if (kernel.use_geodesic) state = std::make_unique<DijkstraState>(*graph);
  detail::ColumnScratch scratch;
  for (std::size_t j = 0; j < src_points.size(); ++j)
    radii[j] = detail::column_radius(src, j, graph, state.get(), kernel, pruning_slack, scratch);
  return radii;
}

FieldVector InterpolationOperator::evaluate(const FieldVector& f_src, SolveReport* report,
                                            EvalTimings* timings) const {
  if (f_src.values.size() != num_src() || f_src.point_set_tag != src_tag_)
    throw ParameterError("evaluate: field is not bound to this operator's source points");
  std::vector<std::size_t> uncovered;
  for (std::size_t i = 0; i < rescale_denominator_.size(); ++i)
    if (std::abs(rescale_denominator_[i]) < 1e-12) uncovered.push_back(i);
  if (!uncovered.empty()) throw UncoveredPointsError(std::move(uncovered));

  auto t0 = Clock::now();
  std::vector<double> gamma(num_src());
  const SolveReport rep = gmres(phi_int_, f_src.values, *precond_, gamma, solver_);
  if (timings) timings->solve += seconds_since(t0);
  if (report) *report = rep;
  if (!rep.converged)
    throw SolveError("interpolation solve did not converge", rep.iterations,
                     rep.relative_residual);
  t0 = Clock::now();
  FieldVector out;
  out.values = matvec(phi_eval_, gamma);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] /= rescale_denominator_[i];
  out.point_set_tag = dst_tag_;
  if (timings) timings->apply += seconds_since(t0);
  return out;
}

std::vector<FieldVector> InterpolationOperator::evaluate_many(
    std::span<const FieldVector> fields, std::vector<SolveReport>* reports) const {
  std::vector<FieldVector> out;
  out.reserve(fields.size());
  if (reports) reports->resize(fields.size());
  for (std::size_t c = 0; c < fields.size(); ++c)
    out.push_back(evaluate(fields[c], reports ? &(*reports)[c] : nullptr));
  return out;
}

bool InterpolationOperator::identical_to(const InterpolationOperator& other) const {
  return radii_ == other.radii_ && phi_int_ == other.phi_int_ && phi_eval_ == other.phi_eval_ &&
         rescale_denominator_ == other.rescale_denominator_;
}

double linf_error(const FieldVector& f, std::span<const double> exact) {
  if (f.values.size() != exact.size()) throw ShapeError("linf_error: length mismatch");
  double max_err = 0.0;
  double max_exact = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    max_err = std::max(max_err, std::abs(f.values[i] - exact[i]));
    max_exact = std::max(max_exact, std::abs(exact[i]));
  }
  if (max_exact == 0.0) throw NumericalError("linf_error: exact values are identically zero");
  return max_err / max_exact;
}

}  // namespace georbf
