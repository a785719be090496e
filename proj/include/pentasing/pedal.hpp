#pragma once

#include <string>
#include <vector>

#include "pentasing/model.hpp"

namespace pentasing {

// Nearest point of the restricted singularity set, together with how it was
// obtained. Distances are Euclidean length units for fixed-orientation
// queries and spherical degrees for fixed-position queries.
struct PedalSolution {
  Pose pose;
  double distance = 0.0;
  std::string branch;    // which plane / circle produced this foot-point
  int multiplicity = 1;  // 2 when the plane is tangent to the unit sphere

  bool operator<(const PedalSolution& o) const;  // distance, then lex pose
};

// Feet of the perpendiculars from g.position onto the planes cut out of the
// singularity set by fixing g's orientation. One plane for designs linear in
// position, a vertical/affine plane pair for designs linear in orientation;
// anything else is unsupported (route to the optimizer instead).
// Throws singular_query, degenerate_restriction, unsupported_family.
std::vector<PedalSolution> fixed_orientation_pedals(const CanonicalDesign& d,
                                                    const Pose& g);

// Spherical foot-points of g.orientation on the circles cut out of the unit
// sphere by fixing g's position: a great circle and (when the second plane
// meets the sphere) a small circle for position-linear designs, a single
// great circle for orientation-linear ones. Tangency yields a multiplicity-2
// foot. Throws singular_query, degenerate_restriction, infinite_pedal_set,
// unsupported_family.
std::vector<PedalSolution> fixed_position_pedals(const CanonicalDesign& d,
                                                 const Pose& g);

}  // namespace pentasing
