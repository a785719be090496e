#pragma once

#include <set>

#include "pentasing/brackets.hpp"
#include "pentasing/model.hpp"
#include "pentasing/poly.hpp"

namespace pentasing {

enum class DegeneracyTarget { PositionLinear, OrientationLinear, QuadraticTotal };

// Result of splitting a restricted singularity polynomial into
// (distinguished variable) * (affine linear factor): w(A1 u + A2 v + A3 w + A4)
// for fixed position, pz(B1 px + B2 py + B3 pz + B4) for fixed orientation.
struct PlanePair {
  int fixed_var;                 // MultiPoly::W or MultiPoly::PZ
  std::array<double, 4> affine;  // (C1,C2,C3,C4) over the three sibling vars + 1
  int var_base;                  // 0 for orientation space, 3 for position space

  MultiPoly reconstruct() const;
};

// det of the 7x7 matrix S, expanded by generalized Laplace over the three pose
// rows: sum over 3-column subsets of (signed 3x3 pose minor) x (4x4 bracket of
// the complementary architecture columns). The sign convention is the
// determinant itself, cross-checked numerically against direct 7x7
// determinants in the test suite.
MultiPoly sigma_polynomial(const CanonicalDesign& d);

double evaluate(const MultiPoly& p, const Pose& pose);

// the terms of sigma that must vanish for the targeted degree reduction
MultiPoly undesired_polynomial(const CanonicalDesign& d, DegeneracyTarget target);
MultiPoly undesired_polynomial(const MultiPoly& sigma, DegeneracyTarget target);

// determinant of S with the given 1-based rows/columns removed; constant
// minors come back as constant polynomials
MultiPoly minor(const CanonicalDesign& d, const std::set<int>& removed_rows,
                const std::set<int>& removed_cols);

MultiPoly restrict_orientation(const MultiPoly& p, const Vec3& o);
MultiPoly restrict_position(const MultiPoly& p, const Vec3& pos);

// factor a restricted polynomial whose every monomial is divisible by the
// distinguished variable; throws not_factorable otherwise
PlanePair factor_planes(const MultiPoly& q, int distinguished_var);

}  // namespace pentasing
