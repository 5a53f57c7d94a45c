#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "georbf/vec3.hpp"

namespace georbf {

/// Builtin scalar fields for the CLI and benchmarks:
///   atan2zn        atan2(z, -x); rejected where x = z = 0
///   constant:<c>
///   linear:<a,b,c,d>   a*x + b*y + c*z + d
///   csv:<path>     one value per source point
struct FieldSpec {
  enum class Kind { Atan2ZN, Constant, Linear, Csv } kind = Kind::Atan2ZN;
  double constant = 0.0;
  std::array<double, 4> linear{};
  std::string csv_path;
};

FieldSpec parse_field_spec(const std::string& text);

/// True when exact values are known at arbitrary points (everything but csv).
bool has_closed_form(const FieldSpec& spec);

double eval_field(const FieldSpec& spec, const Vec3& p);

/// Values at the given points; for csv fields, reads the file and checks the
/// row count against points.size().
std::vector<double> field_values(const FieldSpec& spec, std::span<const Vec3> points);

}  // namespace georbf
