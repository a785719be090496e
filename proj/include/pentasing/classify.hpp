#pragma once

#include <string>

#include "pentasing/brackets.hpp"
#include "pentasing/model.hpp"

namespace pentasing {

enum class Family {
  ArchitectureSingular,
  PositionLinear,
  OrientationLinear,
  Generic,
};

struct Classification {
  Family verdict = Family::Generic;
  ArchVerdict arch;        // detail when verdict == ArchitectureSingular
  int item = 0;            // 1..3 for OrientationLinear, else 0
  double alpha = 0.0;      // family parameters (r = alpha X + beta Y, or
  double beta = 0.0;       //  r = alpha rX + beta rY)
  double kappa_residual = 0.0;    // max |certificate equation residual|
  double vanish_residual = 0.0;   // max undesired coeff / max sigma coeff
  std::string witness;

  const char* verdict_name() const;
};

Classification classify(const CanonicalDesign& d);

// platform offsets from the singular affine map r_i = alpha x_i + beta y_i;
// throws architecture_singular_result if the outcome is architecture-singular
Design synthesize_position_linear(const std::array<Vec3, 5>& base, double alpha,
                                  double beta);

// validates the item-specific geometry (collinearities / zero offsets) and
// certifies the resulting design; throws geometry_mismatch if the inputs do
// not realize the requested item, architecture_singular_result if singular
Design synthesize_orientation_linear(int item, const std::array<Vec3, 5>& base,
                                     const std::array<double, 5>& platform);

}  // namespace pentasing
