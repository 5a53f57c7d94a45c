#include "georbf/mesh_io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "georbf/error.hpp"

namespace georbf {

namespace {

// %.17g round-trips IEEE doubles exactly.
void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

class LineReader {
 public:
  explicit LineReader(const std::string& path) : in_(path) {
    if (!in_) throw IoError("cannot open " + path);
  }

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    return false;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, line_no_ + 1);
    return line;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double parse_double(const std::string& t, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0' || errno == ERANGE)
    throw ParseError("invalid number '" + t + "'", line);
  return v;
}

std::uint64_t parse_uint(const std::string& t, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end == t.c_str() || *end != '\0' || errno == ERANGE || t[0] == '-')
    throw ParseError("invalid index '" + t + "'", line);
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed on " + path);
}

Mesh read_native(const std::string& path) {
  LineReader r(path);
  const auto head = tokens(r.require("header"));
  if (head.size() != 5 || head[0] != "georbf-mesh" || head[1] != "v1")
    throw ParseError("expected header 'georbf-mesh v1 <tet|hex> <n_vertices> <n_elements>'", r.line_no());
  Mesh mesh;
  if (head[2] == "tet")
    mesh.kind = ElementKind::Tet;
  else if (head[2] == "hex")
    mesh.kind = ElementKind::Hex;
  else
    throw ParseError("unknown element kind '" + head[2] + "'", r.line_no());
  const std::uint64_t nv = parse_uint(head[3], r.line_no());
  const std::uint64_t ne = parse_uint(head[4], r.line_no());

  mesh.vertices.reserve(nv);
  for (std::uint64_t i = 0; i < nv; ++i) {
    const auto t = tokens(r.require("vertex line"));
    if (t.size() != 3) throw ParseError("expected 3 coordinates", r.line_no());
    mesh.vertices.push_back({parse_double(t[0], r.line_no()), parse_double(t[1], r.line_no()),
                             parse_double(t[2], r.line_no())});
  }
  const std::size_t npe = nodes_per_element(mesh.kind);
  mesh.connectivity.reserve(ne * npe);
  for (std::uint64_t e = 0; e < ne; ++e) {
    const auto t = tokens(r.require("element line"));
    if (t.size() != npe)
      throw ParseError("expected " + std::to_string(npe) + " vertex indices", r.line_no());
    for (const auto& tok : t) mesh.connectivity.push_back(static_cast<std::uint32_t>(parse_uint(tok, r.line_no())));
  }
  validate_mesh(mesh);
  return mesh;
}

void write_native(const Mesh& mesh, const std::string& path) {
  std::string out;
  out.reserve(mesh.num_vertices() * 60 + mesh.connectivity.size() * 8 + 64);
  out += "georbf-mesh v1 ";
  out += mesh.kind == ElementKind::Tet ? "tet " : "hex ";
  out += std::to_string(mesh.num_vertices());
  out += ' ';
  out += std::to_string(mesh.num_elements());
  out += '\n';
  for (const Vec3& v : mesh.vertices) {
    append_double(out, v.x);
    out += ' ';
    append_double(out, v.y);
    out += ' ';
    append_double(out, v.z);
    out += '\n';
  }
  const std::size_t npe = nodes_per_element(mesh.kind);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    for (std::size_t k = 0; k < npe; ++k) {
      if (k) out += ' ';
      out += std::to_string(mesh.connectivity[e * npe + k]);
    }
    out += '\n';
  }
  write_file(path, out);
}

// Token stream over lines, tracking line numbers for error reports.
class VtkTokenizer {
 public:
  explicit VtkTokenizer(LineReader& r) : r_(r) {}

  std::string next(const char* what) {
    while (pos_ >= buf_.size()) {
      std::string line;
      if (!r_.next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what, r_.line_no() + 1);
      buf_ = tokens(line);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  std::size_t line_no() const { return r_.line_no(); }

 private:
  LineReader& r_;
  std::vector<std::string> buf_;
  std::size_t pos_ = 0;
};

Mesh read_vtk(const std::string& path) {
  LineReader r(path);
  std::string line = r.require("VTK version line");
  if (line.rfind("# vtk DataFile", 0) != 0) throw ParseError("missing '# vtk DataFile' header", r.line_no());
  r.require("title line");
  line = r.require("data type line");
  if (tokens(line) != std::vector<std::string>{"ASCII"})
    throw FormatError("only ASCII VTK legacy files are supported");
  line = r.require("DATASET line");
  {
    const auto t = tokens(line);
    if (t.size() != 2 || t[0] != "DATASET" || t[1] != "UNSTRUCTURED_GRID")
      throw FormatError("only DATASET UNSTRUCTURED_GRID is supported");
  }

  VtkTokenizer tok(r);
  if (tok.next("POINTS") != "POINTS") throw ParseError("expected POINTS section", tok.line_no());
  const std::uint64_t nv = parse_uint(tok.next("point count"), tok.line_no());
  tok.next("point scalar type");

  Mesh mesh;
  mesh.vertices.reserve(nv);
  for (std::uint64_t i = 0; i < nv; ++i) {
    const double x = parse_double(tok.next("coordinate"), tok.line_no());
    const double y = parse_double(tok.next("coordinate"), tok.line_no());
    const double z = parse_double(tok.next("coordinate"), tok.line_no());
    mesh.vertices.push_back({x, y, z});
  }

  if (tok.next("CELLS") != "CELLS") throw ParseError("expected CELLS section", tok.line_no());
  const std::uint64_t nc = parse_uint(tok.next("cell count"), tok.line_no());
  parse_uint(tok.next("cell list size"), tok.line_no());
  std::vector<std::vector<std::uint32_t>> cells(nc);
  for (std::uint64_t c = 0; c < nc; ++c) {
    const std::uint64_t k = parse_uint(tok.next("cell size"), tok.line_no());
    cells[c].resize(k);
    for (std::uint64_t i = 0; i < k; ++i)
      cells[c][i] = static_cast<std::uint32_t>(parse_uint(tok.next("cell vertex"), tok.line_no()));
  }

  if (tok.next("CELL_TYPES") != "CELL_TYPES") throw ParseError("expected CELL_TYPES section", tok.line_no());
  const std::uint64_t ntypes = parse_uint(tok.next("cell type count"), tok.line_no());
  if (ntypes != nc) throw ParseError("CELL_TYPES count does not match CELLS", tok.line_no());
  int kind_code = -1;
  for (std::uint64_t c = 0; c < nc; ++c) {
    const std::uint64_t t = parse_uint(tok.next("cell type"), tok.line_no());
    if (t != 10 && t != 12)
      throw FormatError("unsupported VTK cell type " + std::to_string(t) +
                        " (only 10 = tetrahedron and 12 = hexahedron)");
    if (kind_code == -1) kind_code = static_cast<int>(t);
    if (kind_code != static_cast<int>(t)) throw FormatError("mixed cell types are not supported");
  }
  mesh.kind = kind_code == 10 ? ElementKind::Tet : ElementKind::Hex;
  const std::size_t npe = nodes_per_element(mesh.kind);
  mesh.connectivity.reserve(nc * npe);
  for (std::uint64_t c = 0; c < nc; ++c) {
    if (cells[c].size() != npe)
      throw FormatError("cell " + std::to_string(c) + " has " + std::to_string(cells[c].size()) +
                        " vertices, expected " + std::to_string(npe));
    mesh.connectivity.insert(mesh.connectivity.end(), cells[c].begin(), cells[c].end());
  }
  validate_mesh(mesh);
  return mesh;
}

std::string vtk_body(const Mesh& mesh) {
  std::string out;
  out.reserve(mesh.num_vertices() * 60 + mesh.connectivity.size() * 8 + 256);
  out += "# vtk DataFile Version 3.0\n";
  out += "georbf mesh\n";
  out += "ASCII\n";
  out += "DATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(mesh.num_vertices()) + " double\n";
  for (const Vec3& v : mesh.vertices) {
    append_double(out, v.x);
    out += ' ';
    append_double(out, v.y);
    out += ' ';
    append_double(out, v.z);
    out += '\n';
  }
  const std::size_t npe = nodes_per_element(mesh.kind);
  const std::size_t ne = mesh.num_elements();
  out += "CELLS " + std::to_string(ne) + ' ' + std::to_string(ne * (npe + 1)) + '\n';
  for (std::size_t e = 0; e < ne; ++e) {
    out += std::to_string(npe);
    for (std::size_t k = 0; k < npe; ++k) {
      out += ' ';
      out += std::to_string(mesh.connectivity[e * npe + k]);
    }
    out += '\n';
  }
  out += "CELL_TYPES " + std::to_string(ne) + '\n';
  const char* code = mesh.kind == ElementKind::Tet ? "10\n" : "12\n";
  for (std::size_t e = 0; e < ne; ++e) out += code;
  return out;
}

}  // namespace

MeshFormat detect_mesh_format(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk", 0) == 0) return MeshFormat::VtkLegacyAscii;
  return MeshFormat::Native;
}

Mesh read_mesh(const std::string& path, MeshFormat format) {
  return format == MeshFormat::Native ? read_native(path) : read_vtk(path);
}

void write_mesh(const Mesh& mesh, const std::string& path, MeshFormat format) {
  if (format == MeshFormat::Native)
    write_native(mesh, path);
  else
    write_file(path, vtk_body(mesh));
}

void write_vtk_with_field(const Mesh& mesh, const std::string& path, const std::string& field_name,
                          std::span<const double> values, bool data_on_vertices) {
  const std::size_t expect = data_on_vertices ? mesh.num_vertices() : mesh.num_elements();
  if (values.size() != expect)
    throw ShapeError("field has " + std::to_string(values.size()) + " values, mesh needs " +
                     std::to_string(expect));
  std::string out = vtk_body(mesh);
  out += data_on_vertices ? "POINT_DATA " : "CELL_DATA ";
  out += std::to_string(expect);
  out += "\nSCALARS " + field_name + " double 1\nLOOKUP_TABLE default\n";
  for (double v : values) {
    append_double(out, v);
    out += '\n';
  }
  write_file(path, out);
}

void write_point_csv(std::span<const Vec3> points, std::span<const double> values,
                     const std::string& path) {
  if (points.size() != values.size()) throw ShapeError("points/values length mismatch");
  std::string out = "id,x,y,z,value\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    append_double(out, points[i].x);
    out += ',';
    append_double(out, points[i].y);
    out += ',';
    append_double(out, points[i].z);
    out += ',';
    append_double(out, values[i]);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<double> read_value_csv(const std::string& path) {
  LineReader r(path);
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (r.next(line)) {
    if (line.empty()) continue;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == line.c_str() || *end != '\0' || errno == ERANGE) {
      if (first) {
        first = false;  // header row
        continue;
      }
      throw ParseError("invalid value '" + line + "'", r.line_no());
    }
    first = false;
    values.push_back(v);
  }
  return values;
}

}  // namespace georbf
