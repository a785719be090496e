#include "pentasing/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace pentasing {

double Design::base_diameter() const {
  double d = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) d = std::max(d, norm(base[i] - base[j]));
  return d;
}

double Design::platform_diameter() const {
  double d = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      d = std::max(d, std::abs(platform[i] - platform[j]));
  return d;
}

void Design::validate() const {
  for (const auto& m : base)
    for (double c : m)
      if (!std::isfinite(c)) throw error("design base coordinate not finite");
  for (double r : platform)
    if (!std::isfinite(r)) throw error("design platform offset not finite");
}

Pose Pose::euclidean(const Vec3& o, const Vec3& p) {
  const double n2 = dot(o, o);
  if (std::abs(n2 - 1.0) > 2e-12)
    throw not_unit("euclidean pose orientation is not on the unit sphere");
  return Pose{o, p};
}

Pose Pose::equiform(const Vec3& o, const Vec3& p) {
  if (!(dot(o, o) > 0.0))
    throw not_unit("equiform pose orientation must be nonzero");
  return Pose{o, p};
}

MetricCoefficients MetricCoefficients::from_design(const Design& d) {
  MetricCoefficients m;
  for (double r : d.platform) {
    m.mean_offset += r / 5.0;
    m.mean_square += r * r / 5.0;
  }
  return m;
}

namespace {

Vec3 rotate(const std::array<std::array<double, 3>, 3>& R, const Vec3& v) {
  return {R[0][0] * v[0] + R[0][1] * v[1] + R[0][2] * v[2],
          R[1][0] * v[0] + R[1][1] * v[1] + R[1][2] * v[2],
          R[2][0] * v[0] + R[2][1] * v[1] + R[2][2] * v[2]};
}

bool already_canonical(const Design& d, double base_tol, double plat_tol) {
  const auto& M1 = d.base[0];
  const auto& M2 = d.base[1];
  const auto& M3 = d.base[2];
  return norm(M1) <= base_tol &&
         std::abs(M2[1]) <= base_tol && std::abs(M2[2]) <= base_tol &&
         std::abs(M2[0]) > base_tol &&
         std::abs(M3[2]) <= base_tol && std::abs(M3[1]) > base_tol &&
         std::abs(d.platform[0]) <= plat_tol &&
         std::abs(d.platform[1] - 1.0) <= plat_tol;
}

}  // namespace

CanonicalDesign canonicalize(const Design& d) {
  d.validate();
  const double bdiam = d.base_diameter();
  const double pdiam = d.platform_diameter();
  const double base_tol = 1e-12 * std::max(1.0, bdiam);
  const double plat_tol = 1e-12 * std::max(1.0, pdiam);
  const double planar_tol = 1e-9 * std::max(1.0, bdiam);

  if (already_canonical(d, base_tol, plat_tol)) {
    CanonicalDesign out{d, Provenance{}, false};
    out.is_planar = std::abs(d.base[3][2]) < planar_tol &&
                    std::abs(d.base[4][2]) < planar_tol;
    return out;
  }

  // search leg permutations in lexicographic order for the Lemma-2 frame:
  // first three base points form a triangle, first two platform offsets differ
  std::array<int, 5> perm{0, 1, 2, 3, 4};
  std::array<int, 5> chosen{};
  bool found = false, any_triangle = false;
  do {
    const Vec3 d2 = d.base[perm[1]] - d.base[perm[0]];
    const Vec3 d3 = d.base[perm[2]] - d.base[perm[0]];
    const bool triangle = norm(cross(d2, d3)) > 1e-9 * bdiam * bdiam;
    if (triangle) any_triangle = true;
    if (triangle &&
        std::abs(d.platform[perm[1]] - d.platform[perm[0]]) > 1e-9 * pdiam) {
      chosen = perm;
      found = true;
      break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (!found) {
    if (!any_triangle)
      throw no_triangle("all base points collinear: trivially architecture-singular");
    throw no_distinct_platform_pair(
        "no base triangle with two distinct platform offsets: "
        "trivially architecture-singular");
  }

  const Vec3 t = d.base[chosen[0]];
  const Vec3 d2 = d.base[chosen[1]] - t;
  const Vec3 d3 = d.base[chosen[2]] - t;
  const Vec3 e1 = (1.0 / norm(d2)) * d2;
  const Vec3 n = cross(d2, d3);
  const Vec3 e3 = (1.0 / norm(n)) * n;
  const Vec3 e2 = cross(e3, e1);

  Provenance prov;
  prov.permutation = chosen;
  prov.rotation = {{{e1[0], e1[1], e1[2]},
                    {e2[0], e2[1], e2[2]},
                    {e3[0], e3[1], e3[2]}}};
  prov.translation = t;
  prov.platform_shift = d.platform[chosen[0]];
  prov.platform_scale =
      1.0 / (d.platform[chosen[1]] - d.platform[chosen[0]]);
  prov.identity = false;

  Design canon;
  for (int j = 0; j < 5; ++j) {
    canon.base[j] = rotate(prov.rotation, d.base[chosen[j]] - t);
    canon.platform[j] =
        prov.platform_scale * (d.platform[chosen[j]] - prov.platform_shift);
  }
  // components that are zero by construction: drop the rounding noise so the
  // canonical invariants hold exactly
  canon.base[0] = {0, 0, 0};
  canon.base[1] = {norm(d2), 0, 0};
  canon.base[2][2] = 0.0;
  canon.platform[0] = 0.0;
  canon.platform[1] = 1.0;

  CanonicalDesign out{canon, prov, false};
  out.is_planar = std::abs(canon.base[3][2]) < planar_tol &&
                  std::abs(canon.base[4][2]) < planar_tol;
  return out;
}

double pose_distance(const Pose& a, const Pose& b, const MetricCoefficients& m) {
  const Vec3 dp = a.position - b.position;
  const Vec3 di = a.orientation - b.orientation;
  const double d2 =
      dot(dp, dp) + 2.0 * m.mean_offset * dot(dp, di) + m.mean_square * dot(di, di);
  return std::sqrt(std::max(0.0, d2));
}

double spherical_distance(const Vec3& o1, const Vec3& o2) {
  if (std::abs(norm(o1) - 1.0) > 1e-9 || std::abs(norm(o2) - 1.0) > 1e-9)
    throw not_unit("spherical_distance requires unit vectors");
  const double c = std::clamp(dot(o1, o2), -1.0, 1.0);
  return rad2deg(std::acos(c));
}

}  // namespace pentasing
