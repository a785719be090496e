#include "pentasing/pedal.hpp"

#include <algorithm>
#include <cmath>

#include "pentasing/sigma.hpp"

namespace pentasing {

bool PedalSolution::operator<(const PedalSolution& o) const {
  if (distance != o.distance) return distance < o.distance;
  return pose.as_array() < o.pose.as_array();
}

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kNormalAngleTol = 1e-8;  // radians, infinite-pedal-set gate

// coefficients (n1,n2,n3,n4) of an (at most) affine-linear polynomial over
// the variable block starting at var_base
std::array<double, 4> affine_coeffs(const MultiPoly& q, int var_base) {
  std::array<double, 4> a{0, 0, 0, 0};
  MultiPoly::Expo e{0, 0, 0, 0, 0, 0};
  a[3] = q.coeff(e);
  for (int k = 0; k < 3; ++k) {
    e.fill(0);
    e[static_cast<std::size_t>(var_base + k)] = 1;
    a[static_cast<std::size_t>(k)] = q.coeff(e);
  }
  return a;
}

void reject_singular_query(const MultiPoly& q, const Vec3& at, int var_base,
                           const std::string& what) {
  std::array<double, 6> x{1, 1, 1, 1, 1, 1};
  for (int k = 0; k < 3; ++k) x[static_cast<std::size_t>(var_base + k)] = at[k];
  const double scale = std::max(q.eval_scale(x), q.max_abs_coeff());
  if (std::abs(q.evaluate(x)) <= kRelTol * scale)
    throw singular_query("query " + what + " lies on the singularity set");
}

// foot of the perpendicular from g onto n.p + n4 = 0
PedalSolution plane_foot(const Vec3& n, double n4, const Pose& g,
                         const std::string& branch) {
  const double nn = dot(n, n);
  const double off = (dot(n, g.position) + n4) / nn;
  PedalSolution s;
  s.pose = Pose::euclidean(g.orientation, g.position - off * n);
  s.distance = std::abs(off) * std::sqrt(nn);
  s.branch = branch;
  return s;
}

// spherical feet of the unit vector q on the circle (unit sphere) ∩
// (n.o + n4 = 0); great circles when n4 = 0
void circle_feet(const Vec3& n, double n4, const Pose& g,
                 const std::string& branch,
                 std::vector<PedalSolution>& out) {
  const double nn = dot(n, n);
  const double nlen = std::sqrt(nn);
  if (n4 * n4 > nn * (1.0 + kRelTol)) return;  // plane misses the sphere

  const Vec3 q = g.orientation;
  if (std::abs(n4 * n4 - nn) <= kRelTol * nn) {
    // tangent: the circle degenerates to the touch point -n4 n / |n|^2
    Vec3 touch = -(n4 / nn) * n;
    touch = (1.0 / norm(touch)) * touch;
    PedalSolution s;
    s.pose = Pose::euclidean(touch, g.position);
    s.distance = spherical_distance(q, touch);
    s.branch = branch;
    s.multiplicity = 2;
    out.push_back(std::move(s));
    return;
  }

  // every circle point is equidistant from an orientation along the normal.
  // test alignment through the tangential component: near zero angle the
  // cosine saturates at 1.0 in double precision, but |q x n| = |n| sin(angle)
  // stays fully conditioned
  if (norm(cross(q, n)) < std::sin(kNormalAngleTol) * nlen)
    throw infinite_pedal_set("query orientation is normal to the " + branch +
                             " plane: every circle point is a pedal point");

  const Vec3 c = -(n4 / nn) * n;  // circle center
  const double rho = std::sqrt(std::max(0.0, 1.0 - dot(c, c)));
  const Vec3 q_pl = q - ((dot(n, q) + n4) / nn) * n;
  const Vec3 radial = q_pl - c;
  const double rlen = norm(radial);
  for (double sign : {1.0, -1.0}) {
    Vec3 foot = c + (sign * rho / rlen) * radial;
    foot = (1.0 / norm(foot)) * foot;
    PedalSolution s;
    s.pose = Pose::euclidean(foot, g.position);
    s.distance = spherical_distance(q, foot);
    s.branch = branch;
    out.push_back(std::move(s));
  }
}

}  // namespace

std::vector<PedalSolution> fixed_orientation_pedals(const CanonicalDesign& d,
                                                    const Pose& g) {
  const MultiPoly sigma = sigma_polynomial(d);
  const MultiPoly q = restrict_orientation(sigma, g.orientation);

  std::array<double, 6> probe{g.orientation[0], g.orientation[1],
                              g.orientation[2], 1, 1, 1};
  if (q.max_abs_coeff() <= kRelTol * sigma.eval_scale(probe))
    throw degenerate_restriction(
        "singularity polynomial vanishes identically at this orientation");
  reject_singular_query(q, g.position, MultiPoly::PX, "position");

  std::vector<PedalSolution> out;
  const int deg = q.position_degree();
  if (deg == 1) {
    const auto a = affine_coeffs(q, MultiPoly::PX);
    const Vec3 n{a[0], a[1], a[2]};
    if (dot(n, n) <= 0)
      throw degenerate_restriction("restricted plane has no finite points");
    out.push_back(plane_foot(n, a[3], g, "plane"));
  } else if (deg == 2) {
    PlanePair pp;
    try {
      pp = factor_planes(q, MultiPoly::PZ);
    } catch (const not_factorable&) {
      throw unsupported_family(
          "restricted quadric does not split into planes; use the optimizer");
    }
    out.push_back(plane_foot({0, 0, 1}, 0.0, g, "base plane pz = 0"));
    const Vec3 n{pp.affine[0], pp.affine[1], pp.affine[2]};
    if (dot(n, n) > 0)
      out.push_back(plane_foot(n, pp.affine[3], g, "affine plane"));
  } else {
    throw unsupported_family(
        "restricted polynomial has position degree " + std::to_string(deg) +
        "; use the optimizer");
  }

  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PedalSolution> fixed_position_pedals(const CanonicalDesign& d,
                                                 const Pose& g) {
  const MultiPoly sigma = sigma_polynomial(d);
  const MultiPoly q = restrict_position(sigma, g.position);

  std::array<double, 6> probe{1, 1, 1, g.position[0], g.position[1],
                              g.position[2]};
  if (q.max_abs_coeff() <= kRelTol * sigma.eval_scale(probe))
    throw degenerate_restriction(
        "singularity polynomial vanishes identically at this position");
  reject_singular_query(q, g.orientation, MultiPoly::U, "orientation");

  std::vector<PedalSolution> out;
  const int deg = q.orientation_degree();
  if (deg == 1) {
    const auto a = affine_coeffs(q, MultiPoly::U);
    circle_feet({a[0], a[1], a[2]}, a[3], g, "great circle", out);
  } else if (deg == 2) {
    PlanePair pp;
    try {
      pp = factor_planes(q, MultiPoly::W);
    } catch (const not_factorable&) {
      throw unsupported_family(
          "restricted spherical curve is not a circle pair; use the optimizer");
    }
    circle_feet({0, 0, 1}, 0.0, g, "equator w = 0", out);
    const Vec3 n{pp.affine[0], pp.affine[1], pp.affine[2]};
    if (dot(n, n) > 0)
      circle_feet(n, pp.affine[3], g, "second circle", out);
  } else {
    throw unsupported_family(
        "restricted polynomial has orientation degree " + std::to_string(deg) +
        "; use the optimizer");
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pentasing
