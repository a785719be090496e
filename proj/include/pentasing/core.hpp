#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pentasing {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

// error hierarchy; the CLI maps these onto exit codes
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct no_triangle : error { using error::error; };
struct no_distinct_platform_pair : error { using error::error; };
struct not_unit : error { using error::error; };
struct dimension_mismatch : error { using error::error; };
struct not_factorable : error { using error::error; };
struct singular_query : error { using error::error; };
struct unsupported_family : error { using error::error; };
struct degenerate_restriction : error { using error::error; };
struct infinite_pedal_set : error { using error::error; };
struct architecture_singular_result : error { using error::error; };
struct geometry_mismatch : error { using error::error; };
struct parse_error : error { using error::error; };

constexpr double kPi = 3.14159265358979323846;

inline double rad2deg(double r) { return r * 180.0 / kPi; }

}  // namespace pentasing
