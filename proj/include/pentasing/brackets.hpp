#pragma once

#include <array>
#include <optional>
#include <string>

#include "pentasing/model.hpp"

namespace pentasing {

// The seven 4-vectors r, X, Y, Z, rX, rY, rZ over legs 2..5 of a canonical
// design; columns of the 4x7 architecture matrix.
struct ArchColumns {
  enum Id { R = 0, X = 1, Y = 2, Z = 3, RX = 4, RY = 5, RZ = 6 };

  std::array<std::array<double, 4>, 7> col;  // col[id][leg-2]

  static ArchColumns from_design(const CanonicalDesign& d);
  static const char* name(int id);
};

enum class ArchStatus {
  NotArchSingular,
  RankDeficient,
  ExceptionalTripleCoincidence,
  ExceptionalQuadCoincidence,
};

struct ArchVerdict {
  ArchStatus status = ArchStatus::NotArchSingular;
  int rank = 4;
  std::string witness;

  bool singular() const { return status != ArchStatus::NotArchSingular; }
};

// 4x4 determinant of the selected columns; antisymmetric in the arguments
double bracket(int a, int b, int c, int d, const ArchColumns& cols);

// numerical rank of the 4x7 architecture matrix (count of singular values
// above tol * sigma_max)
int architecture_rank(const ArchColumns& cols, double tol = 1e-9);

// rank test first, then the two exceptional coincidence patterns (checked over
// all leg renumberings; triple+base-coincidence takes precedence over quad)
ArchVerdict architecture_verdict(const CanonicalDesign& d, double tol = 1e-9);

// if all seven projective column points lie on one plane, return its
// homogeneous coordinates; agrees with architecture_rank < 4
std::optional<std::array<double, 4>> coplanarity_witness(const ArchColumns& cols,
                                                         double tol = 1e-9);

}  // namespace pentasing
