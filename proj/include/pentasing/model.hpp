#pragma once

#include <array>
#include <optional>

#include "pentasing/core.hpp"

namespace pentasing {

// Fixed geometry of a linear pentapod: five base anchor points M_j and five
// platform offsets r_j along the platform line.
struct Design {
  std::array<Vec3, 5> base;
  std::array<double, 5> platform;

  double base_diameter() const;      // max pairwise base distance
  double platform_diameter() const;  // max pairwise |r_i - r_j|
  void validate() const;             // finite coordinates, throws error
};

// Frame/reparametrization applied by canonicalize, enough to reconstruct the
// original design: M_orig[perm[j]] maps to rotation*(M - translation)... see
// apply(); platform r_canon = platform_scale * (r_orig - platform_shift).
struct Provenance {
  std::array<int, 5> permutation{0, 1, 2, 3, 4};  // canonical j <- original perm[j]
  std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  Vec3 translation{0, 0, 0};  // subtracted before rotating
  double platform_scale = 1.0;
  double platform_shift = 0.0;
  bool identity = true;
};

struct CanonicalDesign {
  Design design;
  Provenance provenance;
  bool is_planar = false;
};

// Pose of the platform line: orientation vector (u,v,w) and position p.
// Euclidean poses keep the orientation on the unit sphere; equiform poses
// carry the scale mu = |(u,v,w)|.
struct Pose {
  Vec3 orientation{0, 0, 1};
  Vec3 position{0, 0, 0};

  static Pose euclidean(const Vec3& o, const Vec3& p);  // checks |o|=1 to 1e-12
  static Pose equiform(const Vec3& o, const Vec3& p);   // checks |o| > 0
  double scale() const { return norm(orientation); }
  std::array<double, 6> as_array() const {
    return {orientation[0], orientation[1], orientation[2],
            position[0], position[1], position[2]};
  }
};

// Object-dependent metric coefficients: mean and mean-square platform offset.
struct MetricCoefficients {
  double mean_offset = 0.0;  // (sum r_j)/5
  double mean_square = 0.0;  // (sum r_j^2)/5

  static MetricCoefficients from_design(const Design& d);
};

CanonicalDesign canonicalize(const Design& d);

// d^2 = |dp|^2 + 2 r_bar (dp . di) + s_bar |di|^2; equals the average squared
// anchor-point displacement over the five legs.
double pose_distance(const Pose& a, const Pose& b, const MetricCoefficients& m);

// angle between unit vectors, degrees in [0, 180]
double spherical_distance(const Vec3& o1, const Vec3& o2);

}  // namespace pentasing
