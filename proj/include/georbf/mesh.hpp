#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "georbf/vec3.hpp"

namespace georbf {

enum class ElementKind { Tet, Hex };

inline std::size_t nodes_per_element(ElementKind kind) { return kind == ElementKind::Tet ? 4 : 8; }

/// Unstructured volume mesh with a single element type. Connectivity is
/// stored flat, nodes_per_element() indices per element.
struct Mesh {
  ElementKind kind = ElementKind::Tet;
  std::vector<Vec3> vertices;
  std::vector<std::uint32_t> connectivity;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_elements() const {
    return connectivity.empty() ? 0 : connectivity.size() / nodes_per_element(kind);
  }
  std::span<const std::uint32_t> element(std::size_t e) const {
    const std::size_t npe = nodes_per_element(kind);
    return {connectivity.data() + e * npe, npe};
  }
};

struct MeshMetrics {
  double h_min = 0.0;
  double h_avg = 0.0;
  double h_max = 0.0;
};

struct RingSpec {
  double major_radius = 1.0;
  double section_side = 0.36;
  double slit_angle = 0.15;
  std::size_t n_theta = 16;
  std::size_t n_section = 1;
  ElementKind kind = ElementKind::Tet;
};

/// Structured mesh of a square-section torus (axis along y) with an angular
/// slit of width slit_angle straddling the positive-x half-plane at z = 0,
/// where atan2(z, -x) jumps. Hex cells form the product grid; tet meshes
/// split each hex into 6 tets with a globally consistent diagonal so the
/// result is conforming.
Mesh generate_ring(const RingSpec& spec);

/// Element diameter statistics; the diameter of an element is the maximum
/// pairwise distance between its vertices.
MeshMetrics compute_metrics(const Mesh& mesh);

enum class SampleMode { Vertices, Barycenters };

std::vector<Vec3> sample_points(const Mesh& mesh, SampleMode mode);

/// Index range / distinct-vertex checks. Throws FormatError on violation.
void validate_mesh(const Mesh& mesh);

}  // namespace georbf
