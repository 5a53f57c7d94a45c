#include "georbf/mesh.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "georbf/error.hpp"

namespace georbf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 6-tet decomposition of a hex, every tet containing the 0-6 diagonal.
// With the same local corner labeling on every cell of a structured grid the
// face diagonals match across neighbors, so the split is conforming.
constexpr int kHexTetSplit[6][4] = {
    {0, 1, 2, 6}, {0, 2, 3, 6}, {0, 3, 7, 6}, {0, 7, 4, 6}, {0, 4, 5, 6}, {0, 5, 1, 6},
};

}  // namespace

Mesh generate_ring(const RingSpec& spec) {
  if (!(spec.section_side > 0.0) || !(spec.major_radius > spec.section_side / 2.0))
    throw ParameterError("ring generator: need major_radius > section_side/2 > 0");
  if (!(spec.slit_angle > 0.0) || !(spec.slit_angle < kTwoPi))
    throw ParameterError("ring generator: slit angle must lie in (0, 2*pi), got " +
                         std::to_string(spec.slit_angle));
  if (spec.n_theta < 3) throw ParameterError("ring generator: n_theta must be >= 3");
  if (spec.n_section < 1) throw ParameterError("ring generator: n_section must be >= 1");

  const std::size_t nt = spec.n_theta;
  const std::size_t ns = spec.n_section;
  const double theta0 = spec.slit_angle / 2.0;
  const double dtheta = (kTwoPi - spec.slit_angle) / static_cast<double>(nt);
  const double rho0 = spec.major_radius - spec.section_side / 2.0;
  const double dsec = spec.section_side / static_cast<double>(ns);
  const double y0 = -spec.section_side / 2.0;

  Mesh mesh;
  mesh.kind = spec.kind;
  mesh.vertices.reserve((nt + 1) * (ns + 1) * (ns + 1));

  // theta here is atan2(z, -x) + pi, so theta -> 0 / 2*pi approaches the slit
  // from either side and the benchmark field is smooth across every element.
  for (std::size_t it = 0; it <= nt; ++it) {
    const double theta = theta0 + static_cast<double>(it) * dtheta;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    for (std::size_t ir = 0; ir <= ns; ++ir) {
      const double rho = rho0 + static_cast<double>(ir) * dsec;
      for (std::size_t iy = 0; iy <= ns; ++iy) {
        const double y = y0 + static_cast<double>(iy) * dsec;
        mesh.vertices.push_back({rho * c, y, -rho * s});
      }
    }
  }

  const auto vid = [ns](std::size_t it, std::size_t ir, std::size_t iy) {
    return static_cast<std::uint32_t>((it * (ns + 1) + ir) * (ns + 1) + iy);
  };

  const std::size_t n_hex = nt * ns * ns;
  mesh.connectivity.reserve(n_hex * (spec.kind == ElementKind::Hex ? 8 : 24));
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ir = 0; ir < ns; ++ir) {
      for (std::size_t iy = 0; iy < ns; ++iy) {
        // VTK hexahedron corner order: bottom quad then top quad.
        const std::uint32_t corner[8] = {
            vid(it, ir, iy),         vid(it + 1, ir, iy),
            vid(it + 1, ir + 1, iy), vid(it, ir + 1, iy),
            vid(it, ir, iy + 1),     vid(it + 1, ir, iy + 1),
            vid(it + 1, ir + 1, iy + 1), vid(it, ir + 1, iy + 1),
        };
        if (spec.kind == ElementKind::Hex) {
          mesh.connectivity.insert(mesh.connectivity.end(), corner, corner + 8);
        } else {
          for (const auto& tet : kHexTetSplit)
            for (int local : tet) mesh.connectivity.push_back(corner[local]);
        }
      }
    }
  }
  return mesh;
}

MeshMetrics compute_metrics(const Mesh& mesh) {
  if (mesh.num_elements() == 0) throw EmptyInputError("compute_metrics: empty mesh");
  MeshMetrics m;
  m.h_min = std::numeric_limits<double>::infinity();
  m.h_max = 0.0;
  double sum = 0.0;
  const std::size_t ne = mesh.num_elements();
  for (std::size_t e = 0; e < ne; ++e) {
    const auto el = mesh.element(e);
    double h2 = 0.0;
    for (std::size_t a = 0; a < el.size(); ++a)
      for (std::size_t b = a + 1; b < el.size(); ++b)
        h2 = std::max(h2, squared_distance(mesh.vertices[el[a]], mesh.vertices[el[b]]));
    const double h = std::sqrt(h2);
    m.h_min = std::min(m.h_min, h);
    m.h_max = std::max(m.h_max, h);
    sum += h;
  }
  m.h_avg = sum / static_cast<double>(ne);
  return m;
}

std::vector<Vec3> sample_points(const Mesh& mesh, SampleMode mode) {
  if (mesh.num_vertices() == 0) throw EmptyInputError("sample_points: empty mesh");
  if (mode == SampleMode::Vertices) return mesh.vertices;
  std::vector<Vec3> pts;
  pts.reserve(mesh.num_elements());
  const double inv = 1.0 / static_cast<double>(nodes_per_element(mesh.kind));
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    Vec3 c;
    for (std::uint32_t v : mesh.element(e)) c += mesh.vertices[v];
    pts.push_back(inv * c);
  }
  return pts;
}

void validate_mesh(const Mesh& mesh) {
  const std::size_t npe = nodes_per_element(mesh.kind);
  if (!mesh.connectivity.empty() && mesh.connectivity.size() % npe != 0)
    throw FormatError("mesh connectivity length is not a multiple of the element size");
  const std::size_t nv = mesh.num_vertices();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto el = mesh.element(e);
    for (std::size_t a = 0; a < el.size(); ++a) {
      if (el[a] >= nv)
        throw FormatError("element " + std::to_string(e) + " references vertex " +
                          std::to_string(el[a]) + " but the mesh has " + std::to_string(nv));
      for (std::size_t b = a + 1; b < el.size(); ++b)
        if (el[a] == el[b])
          throw FormatError("element " + std::to_string(e) + " has repeated vertex " +
                            std::to_string(el[a]));
    }
  }
}

}  // namespace georbf
