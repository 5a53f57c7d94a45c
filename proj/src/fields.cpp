#include "georbf/fields.hpp"

#include <cmath>
#include <sstream>

#include "georbf/error.hpp"
#include "georbf/mesh_io.hpp"

namespace georbf {

FieldSpec parse_field_spec(const std::string& text) {
  FieldSpec spec;
  if (text == "atan2zn") {
    spec.kind = FieldSpec::Kind::Atan2ZN;
    return spec;
  }
  if (text.rfind("constant:", 0) == 0) {
    spec.kind = FieldSpec::Kind::Constant;
    try {
      spec.constant = std::stod(text.substr(9));
    } catch (const std::exception&) {
      throw ParameterError("invalid constant field '" + text + "'");
    }
    return spec;
  }
  if (text.rfind("linear:", 0) == 0) {
    spec.kind = FieldSpec::Kind::Linear;
    std::istringstream is(text.substr(7));
    std::string tok;
    std::size_t k = 0;
    while (std::getline(is, tok, ',')) {
      if (k >= 4) throw ParameterError("linear field takes exactly 4 coefficients");
      try {
        spec.linear[k++] = std::stod(tok);
      } catch (const std::exception&) {
        throw ParameterError("invalid linear field coefficient '" + tok + "'");
      }
    }
    if (k != 4) throw ParameterError("linear field takes exactly 4 coefficients");
    return spec;
  }
  if (text.rfind("csv:", 0) == 0) {
    spec.kind = FieldSpec::Kind::Csv;
    spec.csv_path = text.substr(4);
    if (spec.csv_path.empty()) throw ParameterError("csv field needs a path");
    return spec;
  }
  throw ParameterError("unknown field '" + text +
                       "' (expected atan2zn, constant:<c>, linear:<a,b,c,d> or csv:<path>)");
}

bool has_closed_form(const FieldSpec& spec) { return spec.kind != FieldSpec::Kind::Csv; }

double eval_field(const FieldSpec& spec, const Vec3& p) {
  switch (spec.kind) {
    case FieldSpec::Kind::Atan2ZN:
      if (p.x == 0.0 && p.z == 0.0)
        throw NumericalError("atan2zn is undefined where x = z = 0");
      return std::atan2(p.z, -p.x);
    case FieldSpec::Kind::Constant:
      return spec.constant;
    case FieldSpec::Kind::Linear:
      return spec.linear[0] * p.x + spec.linear[1] * p.y + spec.linear[2] * p.z + spec.linear[3];
    case FieldSpec::Kind::Csv:
      break;
  }
  throw ParameterError("csv fields have no closed form");
}

std::vector<double> field_values(const FieldSpec& spec, std::span<const Vec3> points) {
  if (spec.kind == FieldSpec::Kind::Csv) {
    std::vector<double> values = read_value_csv(spec.csv_path);
    if (values.size() != points.size())
      throw FormatError("field file " + spec.csv_path + " has " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(points.size()));
    return values;
  }
  std::vector<double> values;
  values.reserve(points.size());
  for (const Vec3& p : points) values.push_back(eval_field(spec, p));
  return values;
}

}  // namespace georbf
