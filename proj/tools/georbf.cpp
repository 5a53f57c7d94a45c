// georbf: rescaled-localized RBF field transfer between non-matching meshes
// with geodesic-distance thresholding. Subcommands: genmesh, interpolate,
// convergence, bench.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "georbf/dist.hpp"
#include "georbf/error.hpp"
#include "georbf/fields.hpp"
#include "georbf/interp.hpp"
#include "georbf/mesh_io.hpp"

namespace {

using namespace georbf;
using Clock = std::chrono::steady_clock;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double parse_beta(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ParameterError("invalid --beta value '" + text + "'");
  }
}

unsigned thread_count(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GEORBF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

struct MeshBundle {
  Mesh mesh;
  MeshMetrics metrics;
};

MeshBundle load_mesh(const std::string& path) {
  MeshBundle b;
  b.mesh = read_mesh(path, detect_mesh_format(path));
  b.metrics = compute_metrics(b.mesh);
  return b;
}

SampleMode parse_sample(const std::string& text) {
  if (text == "vertices") return SampleMode::Vertices;
  if (text == "barycenters") return SampleMode::Barycenters;
  throw ParameterError("invalid sample mode '" + text + "' (vertices|barycenters)");
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed on " + path);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// genmesh

struct GenmeshOptions {
  RingSpec ring;
  std::string element = "tet";
  std::string format = "native";
  std::string output;
};

int run_genmesh(const GenmeshOptions& opt) {
  RingSpec spec = opt.ring;
  spec.kind = opt.element == "hex" ? ElementKind::Hex : ElementKind::Tet;
  const Mesh mesh = generate_ring(spec);
  const MeshMetrics m = compute_metrics(mesh);
  write_mesh(mesh, opt.output,
             opt.format == "vtk" ? MeshFormat::VtkLegacyAscii : MeshFormat::Native);
  std::cout << "mesh: " << mesh.num_vertices() << " vertices, " << mesh.num_elements() << " "
            << (spec.kind == ElementKind::Hex ? "hex" : "tet") << " elements\n";
  std::cout << "h_min " << format_double(m.h_min) << "  h_avg " << format_double(m.h_avg)
            << "  h_max " << format_double(m.h_max) << "\n";
  std::cout << "wrote " << opt.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// interpolate

struct InterpolateOptions {
  std::string src_path;
  std::string dst_path;
  std::string field = "atan2zn";
  std::string geodesic = "on";
  std::size_t neighbor_count = 4;
  double alpha = 2.0;
  std::string beta = "0.5";
  double r_max_factor = 10.0;
  double tol = 1e-10;
  std::optional<unsigned> threads;
  std::string src_sample = "vertices";
  std::string dst_sample = "vertices";
  std::string output;
  std::string vtk_output;
};

struct Pipeline {
  std::vector<Vec3> src;
  std::vector<Vec3> dst;
  std::optional<GeodesicGraph> graph;
  AssemblyConfig config;
  double graph_seconds = 0.0;
};

Pipeline build_pipeline(const MeshBundle& src, const MeshBundle& dst, bool geodesic,
                        std::size_t neighbor_count, double alpha, double beta,
                        double r_max_factor, double tol, unsigned threads,
                        SampleMode src_mode = SampleMode::Vertices,
                        SampleMode dst_mode = SampleMode::Vertices) {
  Pipeline p;
  p.src = sample_points(src.mesh, src_mode);
  p.dst = sample_points(dst.mesh, dst_mode);
  p.config.kernel.neighbor_count = neighbor_count;
  p.config.kernel.radius_scale = alpha;
  p.config.kernel.curvature_coeff = beta;
  p.config.kernel.radius_cap = r_max_factor * src.metrics.h_avg;
  p.config.kernel.use_geodesic = geodesic;
  p.config.pruning_slack = src.metrics.h_max;
  p.config.solver.tol = tol;
  p.config.threads = threads;
  if (geodesic) {
    // The discrete geodesic distance lives on the finer of the two meshes.
    const bool src_finer = src.metrics.h_max <= dst.metrics.h_max;
    const Mesh& reference = src_finer ? src.mesh : dst.mesh;
    p.config.h_ref_max = src_finer ? src.metrics.h_max : dst.metrics.h_max;
    const auto t0 = Clock::now();
    p.graph = build_graph(reference);
    p.graph_seconds = seconds_since(t0);
  } else {
    p.config.h_ref_max = src.metrics.h_max;
  }
  return p;
}

int run_interpolate(const InterpolateOptions& opt) {
  if (opt.geodesic != "on" && opt.geodesic != "off")
    throw ParameterError("--geodesic takes on|off");
  const MeshBundle src = load_mesh(opt.src_path);
  const MeshBundle dst = load_mesh(opt.dst_path);
  const FieldSpec field = parse_field_spec(opt.field);
  const unsigned threads = thread_count(opt.threads);

  Pipeline p = build_pipeline(src, dst, opt.geodesic == "on", opt.neighbor_count, opt.alpha,
                              parse_beta(opt.beta), opt.r_max_factor, opt.tol, threads,
                              parse_sample(opt.src_sample), parse_sample(opt.dst_sample));

  AssemblyTimings at;
  const InterpolationOperator op =
      assemble(p.src, p.dst, p.graph ? &*p.graph : nullptr, p.config, &at);

  const FieldVector f_src{field_values(field, p.src), point_set_tag(p.src)};
  SolveReport report;
  EvalTimings et;
  const FieldVector f_dst = op.evaluate(f_src, &report, &et);

  std::cout << "src: " << p.src.size() << " points (" << opt.src_path << ")\n";
  std::cout << "dst: " << p.dst.size() << " points (" << opt.dst_path << ")\n";
  std::cout << "geodesic: " << opt.geodesic << "  M " << opt.neighbor_count << "  alpha "
            << opt.alpha << "  beta " << opt.beta << "  r_max "
            << format_double(p.config.kernel.radius_cap) << "\n";
  std::cout << "phi_int nnz " << op.phi_int().nnz() << "  phi_eval nnz " << op.phi_eval().nnz()
            << "  preconditioner " << (op.used_ilu() ? "ilu0" : "jacobi") << "\n";
  std::cout << "solve iterations " << report.iterations << "  relative residual "
            << format_double(report.relative_residual) << "\n";
  if (has_closed_form(field)) {
    const std::vector<double> exact = field_values(field, p.dst);
    std::cout << "e_inf " << format_double(linf_error(f_dst, exact)) << "\n";
  }
  std::cout << "timings[s]: graph " << format_fixed(p.graph_seconds) << "  radii "
            << format_fixed(at.radii) << "  assembly "
            << format_fixed(at.setup + at.entries + at.precond + at.rescale) << "  solve "
            << format_fixed(et.solve) << "  evaluate " << format_fixed(et.apply) << "\n";

  if (!opt.output.empty()) {
    write_point_csv(p.dst, f_dst.values, opt.output);
    std::cout << "wrote " << opt.output << "\n";
  }
  if (!opt.vtk_output.empty()) {
    const bool on_vertices = parse_sample(opt.dst_sample) == SampleMode::Vertices;
    write_vtk_with_field(dst.mesh, opt.vtk_output, "interpolated", f_dst.values, on_vertices);
    std::cout << "wrote " << opt.vtk_output << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceOptions {
  std::size_t levels = 4;
  std::size_t base_n_theta = 16;
  double major_radius = 1.0;
  double section_side = 0.36;
  double slit_angle = 0.15;
  std::size_t dst_n_theta = 96;
  std::size_t dst_n_section = 6;
  std::size_t neighbor_count = 4;
  double alpha = 2.0;
  std::string beta = "0.5";
  double r_max_factor = 10.0;
  double tol = 1e-10;
  std::optional<unsigned> threads;
  std::string output;
};

struct ConvergenceRow {
  std::size_t level;
  double h_max_src;
  double e_inf_geo;
  double e_inf_euclid;
};

double fit_slope(std::span<const ConvergenceRow> rows) {
  // Least-squares slope of log(e_geo) against log(h_max_src).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(r.h_max_src);
    const double y = std::log(r.e_inf_geo);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<ConvergenceRow> run_convergence_study(const ConvergenceOptions& opt,
                                                  std::string* failure) {
  const unsigned threads = thread_count(opt.threads);
  const double beta = parse_beta(opt.beta);
  RingSpec dst_spec;
  dst_spec.major_radius = opt.major_radius;
  dst_spec.section_side = opt.section_side;
  dst_spec.slit_angle = opt.slit_angle;
  dst_spec.n_theta = opt.dst_n_theta;
  dst_spec.n_section = opt.dst_n_section;
  dst_spec.kind = ElementKind::Hex;
  MeshBundle dst;
  dst.mesh = generate_ring(dst_spec);
  dst.metrics = compute_metrics(dst.mesh);
  const FieldSpec field = parse_field_spec("atan2zn");

  std::vector<ConvergenceRow> rows;
  for (std::size_t level = 0; level < opt.levels; ++level) {
    try {
      RingSpec src_spec;
      src_spec.major_radius = opt.major_radius;
      src_spec.section_side = opt.section_side;
      src_spec.slit_angle = opt.slit_angle;
      src_spec.n_theta = opt.base_n_theta << level;
      src_spec.n_section = std::max<std::size_t>(1, src_spec.n_theta / opt.base_n_theta);
      src_spec.kind = ElementKind::Tet;
      MeshBundle src;
      src.mesh = generate_ring(src_spec);
      src.metrics = compute_metrics(src.mesh);

      ConvergenceRow row;
      row.level = level + 1;
      row.h_max_src = src.metrics.h_max;
      for (const bool geodesic : {true, false}) {
        Pipeline p = build_pipeline(src, dst, geodesic, opt.neighbor_count, opt.alpha, beta,
                                    opt.r_max_factor, opt.tol, threads);
        const InterpolationOperator op =
            assemble(p.src, p.dst, p.graph ? &*p.graph : nullptr, p.config);
        const FieldVector f_src{field_values(field, p.src), point_set_tag(p.src)};
        const FieldVector f_dst = op.evaluate(f_src);
        const double err = linf_error(f_dst, field_values(field, p.dst));
        (geodesic ? row.e_inf_geo : row.e_inf_euclid) = err;
      }
      rows.push_back(row);
      std::cout << "level " << row.level << "  h_max_src " << format_double(row.h_max_src)
                << "  e_inf_geo " << format_double(row.e_inf_geo) << "  e_inf_euclid "
                << format_double(row.e_inf_euclid) << "\n";
    } catch (const std::exception& e) {
      if (failure) *failure = e.what();
      break;
    }
  }
  return rows;
}

std::string convergence_csv(std::span<const ConvergenceRow> rows, double slope) {
  std::string csv = "level,h_max_src,e_inf_geo,e_inf_euclid,slope\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.level) + ',' + format_double(r.h_max_src) + ',' +
           format_double(r.e_inf_geo) + ',' + format_double(r.e_inf_euclid) + ',' +
           format_double(slope) + '\n';
  }
  return csv;
}

int run_convergence(const ConvergenceOptions& opt) {
  if (opt.levels < 3) throw ParameterError("--levels must be >= 3");
  std::string failure;
  const auto rows = run_convergence_study(opt, &failure);
  const double slope = rows.size() >= 2 ? fit_slope(rows) : 0.0;
  if (!rows.empty()) std::cout << "slope(log e_inf_geo vs log h_max_src) = " << slope << "\n";
  if (!opt.output.empty()) {
    write_text(opt.output, convergence_csv(rows, slope));
    std::cout << "wrote " << opt.output << "\n";
  }
  if (!failure.empty()) {
    std::cerr << "error: level " << (rows.size() + 1) << " failed: " << failure << "\n";
    return kExitNumerical;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  double major_radius = 1.0;
  double section_side = 0.36;
  double slit_angle = 0.15;
  std::size_t n_theta = 128;
  std::size_t n_section = 8;
  std::size_t dst_n_theta = 96;
  std::size_t dst_n_section = 4;
  std::vector<unsigned> threads = {1};
  std::vector<std::size_t> ranks;
  std::size_t neighbor_count = 4;
  double alpha = 2.0;
  std::string beta = "0.5";
  double r_max_factor = 10.0;
  double tol = 1e-10;
  std::string output;
  std::string comm_output;
};

int run_bench(const BenchOptions& opt) {
  RingSpec src_spec;
  src_spec.n_theta = opt.n_theta;
  src_spec.n_section = opt.n_section;
  src_spec.kind = ElementKind::Tet;
  MeshBundle src;
  src.mesh = generate_ring(src_spec);
  src.metrics = compute_metrics(src.mesh);
  RingSpec dst_spec;
  dst_spec.major_radius = opt.major_radius;
  dst_spec.section_side = opt.section_side;
  dst_spec.slit_angle = opt.slit_angle;
  dst_spec.n_theta = opt.dst_n_theta;
  dst_spec.n_section = opt.dst_n_section;
  dst_spec.kind = ElementKind::Hex;
  MeshBundle dst;
  dst.mesh = generate_ring(dst_spec);
  dst.metrics = compute_metrics(dst.mesh);
  const double beta = parse_beta(opt.beta);
  const FieldSpec field = parse_field_spec("atan2zn");

  std::cout << "bench: " << src.mesh.num_vertices() << " source points, "
            << dst.mesh.num_vertices() << " destination points\n";

  std::string csv = "threads_or_ranks,stage,wall_time,speedup\n";
  std::map<std::string, double> base_time;
  std::optional<InterpolationOperator> reference_op;

  for (unsigned threads : opt.threads) {
    Pipeline p = build_pipeline(src, dst, true, opt.neighbor_count, opt.alpha, beta,
                                opt.r_max_factor, opt.tol, threads);
    AssemblyTimings at;
    InterpolationOperator op = assemble(p.src, p.dst, p.graph ? &*p.graph : nullptr, p.config, &at);
    const FieldVector f_src{field_values(field, p.src), point_set_tag(p.src)};
    EvalTimings et;
    op.evaluate(f_src, nullptr, &et);

    const std::vector<std::pair<std::string, double>> stages = {
        {"graph", p.graph_seconds},
        {"radii", at.radii},
        {"assembly", at.assembly_total()},
        {"solve", et.solve},
        {"evaluate", et.apply},
    };
    for (const auto& [stage, seconds] : stages) {
      if (!base_time.count(stage)) base_time[stage] = seconds;
      const double speedup = seconds > 0.0 ? base_time[stage] / seconds : 1.0;
      csv += "t" + std::to_string(threads) + ',' + stage + ',' + format_double(seconds) + ',' +
             format_double(speedup) + '\n';
      std::cout << "threads " << threads << "  " << stage << " " << format_fixed(seconds)
                << " s  speedup " << format_fixed(speedup) << "\n";
    }
    if (reference_op)
      std::cout << "matrices identical across thread counts: "
                << (op.identical_to(*reference_op) ? "yes" : "NO") << "\n";
    else
      reference_op.emplace(std::move(op));
  }

  std::string comm_csv = "n_ranks,rank,points_sent,points_received,bytes_sent,bytes_received\n";
  for (std::size_t ranks : opt.ranks) {
    Pipeline p = build_pipeline(src, dst, true, opt.neighbor_count, opt.alpha, beta,
                                opt.r_max_factor, opt.tol, 1);
    RankSpace space({p.src.begin(), p.src.end()}, {p.dst.begin(), p.dst.end()}, ranks,
                    PartitionScheme::Morton);
    DistributedReport report;
    const auto t0 = Clock::now();
    const InterpolationOperator op =
        distributed_assemble(space, p.graph ? &*p.graph : nullptr, p.config, &report);
    const double seconds = seconds_since(t0);
    csv += "r" + std::to_string(ranks) + ",dist_assembly," + format_double(seconds) + ",1\n";
    std::cout << "ranks " << ranks << "  dist_assembly " << format_fixed(seconds) << " s";
    if (reference_op)
      std::cout << "  identical to serial: " << (op.identical_to(*reference_op) ? "yes" : "NO");
    std::cout << "\n";
    for (std::size_t r = 0; r < ranks; ++r) {
      const CommStats& s = report.comm[r];
      comm_csv += std::to_string(ranks) + ',' + std::to_string(r) + ',' +
                  std::to_string(s.points_sent) + ',' + std::to_string(s.points_received) + ',' +
                  std::to_string(s.bytes_sent) + ',' + std::to_string(s.bytes_received) + '\n';
    }
  }

  if (!opt.output.empty()) {
    write_text(opt.output, csv);
    std::cout << "wrote " << opt.output << "\n";
  }
  if (!opt.comm_output.empty() && !opt.ranks.empty()) {
    write_text(opt.comm_output, comm_csv);
    std::cout << "wrote " << opt.comm_output << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rescaled-localized RBF intergrid transfer with geodesic thresholding"};
  app.require_subcommand(1);

  GenmeshOptions gm;
  CLI::App* genmesh = app.add_subcommand("genmesh", "generate a ring-with-slit benchmark mesh");
  CLI::App* ring = genmesh->add_subcommand("ring", "square-section torus with an angular slit");
  genmesh->require_subcommand(1);
  ring->add_option("--major-radius", gm.ring.major_radius, "torus major radius");
  ring->add_option("--section-side", gm.ring.section_side, "square section side length");
  ring->add_option("--slit-angle", gm.ring.slit_angle, "angular width of the slit [rad]");
  ring->add_option("--n-theta", gm.ring.n_theta, "angular cells");
  ring->add_option("--n-section", gm.ring.n_section, "cells per section side");
  ring->add_option("--element", gm.element, "element kind (tet|hex)")
      ->check(CLI::IsMember({"tet", "hex"}));
  ring->add_option("--format", gm.format, "output format (native|vtk)")
      ->check(CLI::IsMember({"native", "vtk"}));
  ring->add_option("-o,--output", gm.output, "output mesh path")->required();

  InterpolateOptions in;
  CLI::App* interp = app.add_subcommand("interpolate", "transfer a field between two meshes");
  interp->add_option("--src", in.src_path, "source mesh")->required();
  interp->add_option("--dst", in.dst_path, "destination mesh")->required();
  interp->add_option("--field", in.field,
                     "atan2zn | constant:<c> | linear:<a,b,c,d> | csv:<path>");
  interp->add_option("--geodesic", in.geodesic, "geodesic thresholding (on|off)");
  interp->add_option("-M,--neighbors", in.neighbor_count, "support neighbor count");
  interp->add_option("--alpha", in.alpha, "support radius magnification");
  interp->add_option("--beta", in.beta, "high-curvature coefficient (float or inf)");
  interp->add_option("--r-max-factor", in.r_max_factor,
                     "neighbor search cap as a multiple of h_avg(src)");
  interp->add_option("--tol", in.tol, "solver relative residual tolerance");
  unsigned interp_threads = 0;
  CLI::Option* interp_threads_opt =
      interp->add_option("--threads", interp_threads, "assembly worker threads");
  interp->add_option("--src-sample", in.src_sample, "vertices|barycenters");
  interp->add_option("--dst-sample", in.dst_sample, "vertices|barycenters");
  interp->add_option("-o,--output", in.output, "destination field CSV");
  interp->add_option("--vtk", in.vtk_output, "destination field VTK");
  std::uint64_t seed = 0;
  interp->add_option("--seed", seed, "recorded for reproducibility; the pipeline is deterministic");

  ConvergenceOptions cv;
  CLI::App* conv = app.add_subcommand("convergence", "ring-with-slit convergence study");
  conv->add_option("--levels", cv.levels, "refinement levels (>= 3)");
  conv->add_option("--major-radius", cv.major_radius, "torus major radius");
  conv->add_option("--section-side", cv.section_side, "square section side length");
  conv->add_option("--slit-angle", cv.slit_angle, "angular width of the slit [rad]");
  conv->add_option("--base-n-theta", cv.base_n_theta, "angular cells at the coarsest level");
  conv->add_option("--dst-n-theta", cv.dst_n_theta, "destination mesh angular cells");
  conv->add_option("--dst-n-section", cv.dst_n_section, "destination mesh section cells");
  conv->add_option("-M,--neighbors", cv.neighbor_count, "support neighbor count");
  conv->add_option("--alpha", cv.alpha, "support radius magnification");
  conv->add_option("--beta", cv.beta, "high-curvature coefficient (float or inf)");
  conv->add_option("--r-max-factor", cv.r_max_factor, "neighbor search cap factor");
  conv->add_option("--tol", cv.tol, "solver tolerance");
  unsigned conv_threads = 0;
  CLI::Option* conv_threads_opt = conv->add_option("--threads", conv_threads, "worker threads");
  conv->add_option("-o,--output", cv.output, "CSV output path");

  BenchOptions bn;
  CLI::App* bench = app.add_subcommand("bench", "stage timing and scaling benchmark");
  bench->add_option("--major-radius", bn.major_radius, "torus major radius");
  bench->add_option("--section-side", bn.section_side, "square section side length");
  bench->add_option("--slit-angle", bn.slit_angle, "angular width of the slit [rad]");
  bench->add_option("--n-theta", bn.n_theta, "source mesh angular cells");
  bench->add_option("--n-section", bn.n_section, "source mesh section cells");
  bench->add_option("--dst-n-theta", bn.dst_n_theta, "destination mesh angular cells");
  bench->add_option("--dst-n-section", bn.dst_n_section, "destination mesh section cells");
  bench->add_option("--threads", bn.threads, "thread counts to sweep")->delimiter(',');
  bench->add_option("--ranks", bn.ranks, "simulated rank counts to sweep")->delimiter(',');
  bench->add_option("-M,--neighbors", bn.neighbor_count, "support neighbor count");
  bench->add_option("--alpha", bn.alpha, "support radius magnification");
  bench->add_option("--beta", bn.beta, "high-curvature coefficient");
  bench->add_option("--r-max-factor", bn.r_max_factor, "neighbor search cap factor");
  bench->add_option("-o,--output", bn.output, "timing CSV path");
  bench->add_option("--comm-out", bn.comm_output, "per-rank communication CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*genmesh) return run_genmesh(gm);
    if (*interp) {
      if (*interp_threads_opt) in.threads = interp_threads;
      return run_interpolate(in);
    }
    if (*conv) {
      if (*conv_threads_opt) cv.threads = conv_threads;
      return run_convergence(cv);
    }
    if (*bench) return run_bench(bn);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {  // solver, uncovered points, numerical, comm
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
