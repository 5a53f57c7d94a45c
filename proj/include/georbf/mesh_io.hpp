#pragma once

#include <span>
#include <string>

#include "georbf/mesh.hpp"

namespace georbf {

enum class MeshFormat { Native, VtkLegacyAscii };

/// Guess the format from the first line of the file.
MeshFormat detect_mesh_format(const std::string& path);

/// Native format:
///   georbf-mesh v1 <tet|hex> <n_vertices> <n_elements>
///   one vertex per line (x y z, full precision)
///   one element per line (vertex indices)
/// VTK legacy ASCII supports DATASET UNSTRUCTURED_GRID with uniform cell
/// type 10 (tet) or 12 (hex). Coordinates round-trip bit-exactly in both.
Mesh read_mesh(const std::string& path, MeshFormat format);
void write_mesh(const Mesh& mesh, const std::string& path, MeshFormat format);

/// VTK legacy writer with one scalar array attached; data_on_vertices picks
/// POINT_DATA (values per vertex) vs CELL_DATA (values per element).
void write_vtk_with_field(const Mesh& mesh, const std::string& path, const std::string& field_name,
                          std::span<const double> values, bool data_on_vertices);

/// "id,x,y,z,value" CSV with header, LF endings, full-precision floats.
void write_point_csv(std::span<const Vec3> points, std::span<const double> values,
                     const std::string& path);

/// One value per data row; an optional non-numeric first line is skipped.
std::vector<double> read_value_csv(const std::string& path);

}  // namespace georbf
