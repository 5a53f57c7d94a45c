#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "georbf/fields.hpp"
#include "georbf/interp.hpp"
#include "support.hpp"

using namespace georbf;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RingSetup {
  Mesh src_mesh, dst_mesh;
  std::vector<Vec3> src, dst;
  GeodesicGraph graph;
  AssemblyConfig config;
};

RingSetup make_ring_setup(std::size_t src_n_theta, std::size_t src_n_section,
                          std::size_t dst_n_theta, std::size_t dst_n_section,
                          bool geodesic = true) {
  RingSetup s;
  RingSpec src_spec;
  src_spec.n_theta = src_n_theta;
  src_spec.n_section = src_n_section;
  src_spec.kind = ElementKind::Tet;
  s.src_mesh = generate_ring(src_spec);
  RingSpec dst_spec;
  dst_spec.n_theta = dst_n_theta;
  dst_spec.n_section = dst_n_section;
  dst_spec.kind = ElementKind::Hex;
  s.dst_mesh = generate_ring(dst_spec);
  s.src = sample_points(s.src_mesh, SampleMode::Vertices);
  s.dst = sample_points(s.dst_mesh, SampleMode::Vertices);
  const MeshMetrics src_m = compute_metrics(s.src_mesh);
  const MeshMetrics dst_m = compute_metrics(s.dst_mesh);
  const Mesh& reference = src_m.h_max <= dst_m.h_max ? s.src_mesh : s.dst_mesh;
  s.graph = build_graph(reference);
  s.config.kernel.use_geodesic = geodesic;
  s.config.kernel.radius_cap = 10.0 * src_m.h_avg;
  s.config.h_ref_max = std::min(src_m.h_max, dst_m.h_max);
  s.config.pruning_slack = src_m.h_max;
  return s;
}

FieldVector make_field(std::span<const Vec3> pts, const FieldSpec& spec) {
  return {field_values(spec, pts), point_set_tag(pts)};
}

}  // namespace

TEST_CASE("compute_radii: collinear example and saturation") {
  // Collinear points, Euclidean metric: r at the end point is alpha times
  // the distance to its nearest other point.
  const std::vector<Vec3> pts = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  KernelParams kernel;
  kernel.neighbor_count = 1;
  kernel.radius_scale = 2.0;
  kernel.radius_cap = 100.0;
  kernel.use_geodesic = false;
  const auto radii = compute_radii(pts, nullptr, kernel, 0.0);
  CHECK(radii[0] == doctest::Approx(2.0));
  CHECK(radii[1] == doctest::Approx(2.0));
  CHECK(radii[3] == doctest::Approx(2.0));

  kernel.neighbor_count = 10;  // more than the point count: saturates
  kernel.radius_cap = 10.0;
  kernel.radius_scale = 1.0;
  for (double r : compute_radii(pts, nullptr, kernel, 0.0)) CHECK(r == 10.0);
}

TEST_CASE("compute_radii: geodesic radii against a full-sort oracle") {
  RingSpec spec;
  spec.n_theta = 32;
  spec.n_section = 2;
  spec.slit_angle = 0.3;
  spec.kind = ElementKind::Tet;
  const Mesh mesh = generate_ring(spec);
  const GeodesicGraph graph = build_graph(mesh);
  const MeshMetrics metrics = compute_metrics(mesh);
  const auto pts = sample_points(mesh, SampleMode::Vertices);

  KernelParams kernel;
  kernel.neighbor_count = 6;
  kernel.radius_scale = 2.0;
  kernel.radius_cap = 10.0 * metrics.h_avg;
  const auto geo_radii = compute_radii(pts, &graph, kernel, metrics.h_max);

  KernelParams euclid = kernel;
  euclid.use_geodesic = false;
  const auto euclid_radii = compute_radii(pts, nullptr, euclid, metrics.h_max);

  // Full-sort oracle for both metrics.
  const auto oracle = testing::floyd_warshall(graph);
  std::vector<std::uint32_t> snaps(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) snaps[i] = graph.vertex_index.nearest(pts[i]);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    std::vector<double> geo_d, euc_d;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i == j) continue;
      const double g = oracle[snaps[j]][snaps[i]];
      if (g <= kernel.radius_cap) geo_d.push_back(g);
      const double e = distance(pts[i], pts[j]);
      if (e <= kernel.radius_cap) euc_d.push_back(e);
    }
    std::sort(geo_d.begin(), geo_d.end());
    std::sort(euc_d.begin(), euc_d.end());
    const double want_geo =
        geo_d.size() >= 6 ? kernel.radius_scale * geo_d[5] : kernel.radius_scale * kernel.radius_cap;
    const double want_euc =
        euc_d.size() >= 6 ? kernel.radius_scale * euc_d[5] : kernel.radius_scale * kernel.radius_cap;
    CHECK(geo_radii[j] == doctest::Approx(want_geo).epsilon(1e-12));
    CHECK(euclid_radii[j] == doctest::Approx(want_euc).epsilon(1e-12));
    CHECK(geo_radii[j] > 0.0);
    CHECK(geo_radii[j] <= kernel.radius_scale * kernel.radius_cap);
    // Near the slit the geodesic neighborhood is sparser, so geodesic radii
    // can only grow.
    CHECK(geo_radii[j] >= euclid_radii[j] - 1e-12);
  }
}

TEST_CASE("assemble: single source point") {
  const std::vector<Vec3> src = {{0, 0, 0}};
  const std::vector<Vec3> dst = {{0.1, 0, 0}, {0.3, 0.1, 0}};
  AssemblyConfig config;
  config.kernel.use_geodesic = false;
  config.kernel.neighbor_count = 1;
  config.kernel.radius_cap = 1.0;
  const InterpolationOperator op = assemble(src, dst, nullptr, config);
  REQUIRE(op.phi_int().nnz() == 1);
  CHECK(op.phi_int().val[0] == 1.0);
  // Saturated radius: 2 * 1.0.
  CHECK(op.radii()[0] == 2.0);
  CHECK(op.phi_eval().nnz() == 2);
  CHECK(op.phi_eval().val[0] == wendland(distance(dst[0], src[0]), 2.0));
}

TEST_CASE("assemble: sparse assembly equals the dense unpruned oracle") {
  auto gen = testing::rng(72);
  for (int trial = 0; trial < 6; ++trial) {
    RingSpec spec = testing::random_ring_spec(gen, 260);
    const Mesh mesh = generate_ring(spec);
    const GeodesicGraph graph = build_graph(mesh);
    const MeshMetrics metrics = compute_metrics(mesh);
    const std::size_t n_src = 80 + gen() % 120;
    const std::size_t n_dst = 60 + gen() % 100;
    // Distinct snap vertices: random points denser than the reference mesh
    // would give zero geodesic neighbor distances, which the radius
    // definition rejects for small neighbor counts.
    std::vector<Vec3> src;
    std::vector<bool> used(mesh.num_vertices(), false);
    for (int attempts = 0; src.size() < n_src && attempts < 4000; ++attempts) {
      const Vec3 p = testing::random_point_in_mesh(mesh, gen);
      const std::uint32_t snap = graph.vertex_index.nearest(p);
      if (used[snap]) continue;
      used[snap] = true;
      src.push_back(p);
    }
    std::vector<Vec3> dst(n_dst);
    for (auto& p : dst) p = testing::random_point_in_mesh(mesh, gen);

    AssemblyConfig config;
    config.kernel.neighbor_count = 1 + gen() % 6;
    config.kernel.radius_scale = (gen() & 1) ? 1.0 : 2.0;
    config.kernel.radius_cap = (0.5 + 0.5 * testing::uniform(gen, 0, 1)) * 10.0 * metrics.h_avg;
    config.kernel.curvature_coeff = (gen() % 3 == 0) ? kInf : 0.5;
    config.kernel.use_geodesic = (gen() % 4 != 0);
    config.h_ref_max = metrics.h_max;
    config.pruning_slack = metrics.h_max;

    const GeodesicGraph* graph_ptr = config.kernel.use_geodesic ? &graph : nullptr;
    const InterpolationOperator op = assemble(src, dst, graph_ptr, config);

    const auto dense_int = testing::dense_assembly(src, src, op.radii(), graph_ptr, config.kernel,
                                                   config.h_ref_max);
    const auto dense_eval = testing::dense_assembly(dst, src, op.radii(), graph_ptr, config.kernel,
                                                    config.h_ref_max);
    CHECK(testing::csr_entries_by_column(op.phi_int()) == dense_int);
    CHECK(testing::csr_entries_by_column(op.phi_eval()) == dense_eval);

    // Structural invariants: unit diagonal, entries in (0, 1].
    for (double r : op.radii()) CHECK(r > 0.0);
    const SparseMatrix& a = op.phi_int();
    for (std::size_t r = 0; r < a.rows; ++r) {
      bool diag = false;
      for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
        CHECK(a.val[k] > 0.0);
        CHECK(a.val[k] <= 1.0);
        if (a.col[k] == r) {
          diag = true;
          CHECK(a.val[k] == 1.0);
        }
      }
      CHECK(diag);
    }
  }
}

TEST_CASE("assemble: thread count does not change a single bit") {
  RingSetup s = make_ring_setup(24, 2, 20, 2);
  const InterpolationOperator serial = assemble(s.src, s.dst, &s.graph, s.config);
  for (unsigned threads : {2u, 4u, 7u}) {
    AssemblyConfig config = s.config;
    config.threads = threads;
    const InterpolationOperator parallel = assemble(s.src, s.dst, &s.graph, config);
    CHECK(parallel.identical_to(serial));
  }
}

TEST_CASE("evaluate: constant reproduction and interpolation constraints") {
  RingSetup s = make_ring_setup(20, 1, 24, 2);
  const InterpolationOperator op = assemble(s.src, s.dst, &s.graph, s.config);

  FieldSpec constant;
  constant.kind = FieldSpec::Kind::Constant;
  constant.constant = 3.7;
  const FieldVector f_dst = op.evaluate(make_field(s.src, constant));
  for (double v : f_dst.values) CHECK(v == doctest::Approx(3.7).epsilon(1e-9));

  // Destination points equal to source points reproduce the data.
  const InterpolationOperator self = assemble(s.src, s.src, &s.graph, s.config);
  FieldSpec smooth;
  smooth.kind = FieldSpec::Kind::Linear;
  smooth.linear = {0.3, -1.0, 0.25, 0.8};
  const FieldVector f_src = make_field(s.src, smooth);
  const FieldVector f_self = self.evaluate(f_src);
  for (std::size_t i = 0; i < f_src.values.size(); ++i)
    CHECK(f_self.values[i] == doctest::Approx(f_src.values[i]).epsilon(1e-8));
}

TEST_CASE("evaluate: linearity and component-wise evaluation") {
  RingSetup s = make_ring_setup(16, 1, 12, 1);
  const InterpolationOperator op = assemble(s.src, s.dst, &s.graph, s.config);
  FieldSpec fa;
  fa.kind = FieldSpec::Kind::Linear;
  fa.linear = {1.0, 0.0, -2.0, 0.1};
  FieldSpec fb;
  fb.kind = FieldSpec::Kind::Atan2ZN;
  const FieldVector a = make_field(s.src, fa);
  const FieldVector b = make_field(s.src, fb);
  FieldVector combo{std::vector<double>(a.values.size()), a.point_set_tag};
  for (std::size_t i = 0; i < a.values.size(); ++i)
    combo.values[i] = 2.0 * a.values[i] - 0.5 * b.values[i];

  const std::vector<FieldVector> fields = {a, b, combo, a, a};
  const auto outs = op.evaluate_many(fields);
  REQUIRE(outs.size() == 5);
  CHECK(outs[3].values == outs[0].values);
  CHECK(outs[4].values == outs[0].values);
  for (std::size_t i = 0; i < outs[2].values.size(); ++i)
    CHECK(outs[2].values[i] ==
          doctest::Approx(2.0 * outs[0].values[i] - 0.5 * outs[1].values[i]).epsilon(1e-7));
}

TEST_CASE("assemble: slit decoupling in the interpolation matrix") {
  RingSpec spec;
  spec.n_theta = 40;
  spec.n_section = 2;
  spec.slit_angle = 0.1;
  spec.kind = ElementKind::Tet;
  const Mesh mesh = generate_ring(spec);
  const GeodesicGraph graph = build_graph(mesh);
  const MeshMetrics metrics = compute_metrics(mesh);
  const auto src = sample_points(mesh, SampleMode::Vertices);

  AssemblyConfig config;
  config.kernel.radius_cap = 10.0 * metrics.h_avg;
  config.h_ref_max = metrics.h_max;
  config.pruning_slack = metrics.h_max;
  const InterpolationOperator op = assemble(src, {}, &graph, config);

  // Pairs straddling the slit: Euclidean distance below the column radius
  // but geodesic distance around the whole ring.
  DijkstraState state(graph);
  std::size_t checked = 0;
  for (std::size_t j = 0; j < src.size(); ++j) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (distance(src[i], src[j]) >= op.radii()[j]) continue;
      const double g = point_distance(graph, state, src[j], src[i], kInf);
      if (g <= op.radii()[j]) continue;
      ++checked;
      const SparseMatrix& a = op.phi_int();
      for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        CHECK(a.col[k] != j);  // structurally zero
    }
  }
  CHECK(checked > 0);  // the configuration really exercises the slit
}

TEST_CASE("assemble: geodesic-off reduces to plain Euclidean RBF entries") {
  RingSetup s = make_ring_setup(18, 1, 14, 1, /*geodesic=*/false);
  const InterpolationOperator op = assemble(s.src, s.dst, nullptr, s.config);
  const SparseMatrix& a = op.phi_int();
  for (std::size_t r = 0; r < a.rows; ++r)
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
      CHECK(a.val[k] == wendland(distance(s.src[r], s.src[a.col[k]]), op.radii()[a.col[k]]));
}

TEST_CASE("evaluate: uncovered destination points are reported") {
  const std::vector<Vec3> src = {{0, 0, 0}, {0.5, 0, 0}, {0, 0.5, 0}, {0.5, 0.5, 0}};
  const std::vector<Vec3> dst = {{0.2, 0.2, 0}, {50, 50, 50}};
  AssemblyConfig config;
  config.kernel.use_geodesic = false;
  config.kernel.neighbor_count = 1;
  config.kernel.radius_cap = 2.0;
  const InterpolationOperator op = assemble(src, dst, nullptr, config);
  FieldVector ones{std::vector<double>(4, 1.0), point_set_tag(src)};
  try {
    op.evaluate(ones);
    FAIL("expected UncoveredPointsError");
  } catch (const UncoveredPointsError& e) {
    REQUIRE(e.ids().size() == 1);
    CHECK(e.ids()[0] == 1);
  }
}

TEST_CASE("evaluate: field bound to the wrong point set is rejected") {
  RingSetup s = make_ring_setup(16, 1, 12, 1);
  const InterpolationOperator op = assemble(s.src, s.dst, &s.graph, s.config);
  FieldVector wrong{std::vector<double>(s.src.size(), 1.0), 12345u};
  CHECK_THROWS_AS(op.evaluate(wrong), ParameterError);
}

TEST_CASE("linf_error") {
  FieldVector f{{1.0, 2.2}, 0};
  CHECK(linf_error(f, std::vector<double>{1.0, 2.0}) == doctest::Approx(0.1));
  FieldVector same{{1.0, 2.0}, 0};
  CHECK(linf_error(same, std::vector<double>{1.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(linf_error(same, std::vector<double>{0.0, 0.0}), NumericalError);
  CHECK_THROWS_AS(linf_error(same, std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("assemble: parameter validation") {
  AssemblyConfig config;
  config.kernel.radius_cap = 0.0;
  CHECK_THROWS_AS(assemble(std::vector<Vec3>{{0, 0, 0}}, {}, nullptr, config), ParameterError);
  config.kernel.radius_cap = 1.0;
  config.kernel.use_geodesic = false;
  CHECK_THROWS_AS(assemble(std::vector<Vec3>{}, {}, nullptr, config), EmptyInputError);
  config.kernel.use_geodesic = true;
  CHECK_THROWS_AS(assemble(std::vector<Vec3>{{0, 0, 0}}, {}, nullptr, config), ParameterError);
}

TEST_CASE("assemble: duplicate source points fail loudly when the radius degenerates") {
  const std::vector<Vec3> src = {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}};
  AssemblyConfig config;
  config.kernel.use_geodesic = false;
  config.kernel.neighbor_count = 1;
  config.kernel.radius_cap = 5.0;
  CHECK_THROWS_AS(assemble(src, {}, nullptr, config), NumericalError);
}
