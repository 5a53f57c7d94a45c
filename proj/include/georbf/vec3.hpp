#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace georbf {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  friend bool operator==(const Vec3& a, const Vec3& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

// Fixed evaluation order (dx*dx + dy*dy) + dz*dz; the SIMD distance kernel
// mirrors it so scalar and vector paths agree bitwise.
inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return (dx * dx + dy * dy) + dz * dz;
}

inline double distance(const Vec3& a, const Vec3& b) { return std::sqrt(squared_distance(a, b)); }

struct Aabb {
  Vec3 lo;
  Vec3 hi;

  // Closed intervals on all faces.
  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }

  bool intersects(const Aabb& o) const {
    return lo.x <= o.hi.x && hi.x >= o.lo.x && lo.y <= o.hi.y && hi.y >= o.lo.y &&
           lo.z <= o.hi.z && hi.z >= o.lo.z;
  }

  Aabb inflated(double r) const { return {{lo.x - r, lo.y - r, lo.z - r}, {hi.x + r, hi.y + r, hi.z + r}}; }

  void include(const Vec3& p) {
    lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
  }

  void include(const Aabb& o) { include(o.lo); include(o.hi); }

  double squared_distance_to(const Vec3& p) const {
    const double dx = std::max({lo.x - p.x, 0.0, p.x - hi.x});
    const double dy = std::max({lo.y - p.y, 0.0, p.y - hi.y});
    const double dz = std::max({lo.z - p.z, 0.0, p.z - hi.z});
    return (dx * dx + dy * dy) + dz * dz;
  }

  static Aabb around(const Vec3& center, double halfwidth) {
    return {{center.x - halfwidth, center.y - halfwidth, center.z - halfwidth},
            {center.x + halfwidth, center.y + halfwidth, center.z + halfwidth}};
  }

  static Aabb empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf, inf}, {-inf, -inf, -inf}};
  }
};

}  // namespace georbf
