#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pentasing/classify.hpp"
#include "pentasing/model.hpp"
#include "pentasing/poly.hpp"

namespace pentasing {

enum class LagrangeMode { Euclidean, Equiform };

// Stationarity system for the nearest-singular-pose problem. The three
// position-gradient equations are linear in p (the singularity polynomial is
// at most quadratic in position), so the system keeps p in solved form
// (2 I + lambda2 Hpp(i)) p = rhs(i, lambda2) and Newton runs on the reduced
// unknowns (u,v,w,lambda1,lambda2) — without lambda1 and the sphere
// constraint in equiform mode, where the orientation carries the scale mu.
struct LagrangeSystem {
  LagrangeMode mode = LagrangeMode::Euclidean;
  Family family = Family::Generic;  // verdict of the design behind F
  MetricCoefficients metric;
  Pose query;
  MultiPoly F;                                  // singularity polynomial
  std::array<MultiPoly, 3> Fi;                  // dF/d(u,v,w)
  std::array<MultiPoly, 3> Fp;                  // dF/d(px,py,pz)
  std::array<std::array<MultiPoly, 3>, 3> Fii;  // orientation Hessian
  std::array<std::array<MultiPoly, 3>, 3> Fip;  // mixed: d2F/di_a dp_b
  std::array<std::array<MultiPoly, 3>, 3> Fpp;  // position Hessian, constant in p
  // d(Fpp[a][b])/di_l: constant because every monomial of F with two position
  // factors has at most one orientation factor
  std::array<std::array<std::array<double, 3>, 3>, 3> Fppi{};

  int unknowns() const { return mode == LagrangeMode::Euclidean ? 5 : 4; }
};

struct CriticalPoint {
  Pose pose;
  double lambda1 = 0.0;   // Euclidean mode only
  double lambda2 = 0.0;
  double distance = 0.0;
  double mu = 1.0;        // orientation scale; 1 in Euclidean mode
  double residual = 0.0;  // max |equation| over the full gradient system
};

struct SolverSettings {
  std::uint64_t seed = 0;
  int starts = 4096;
  int max_iterations = 100;
  // when set and fewer distinct real roots are found, the report is marked
  // BudgetExhausted (partial results are still returned)
  std::optional<int> expected_roots;
};

enum class SolveStatus { Converged, BudgetExhausted };

struct SolveReport {
  SolveStatus status = SolveStatus::Converged;
  std::vector<CriticalPoint> points;  // ascending distance
  int starts_used = 0;
  int converged_runs = 0;
  int singular_eliminations = 0;  // branches dropped on a singular 3x3 block
  // converged runs discarded because the constraint gradient vanished there
  // (surface self-intersection: the multiplier diverges in exact arithmetic)
  int degenerate_rejections = 0;
};

// Gate + assembly: the design must classify position- or orientation-linear
// (the generic degree-80 problem is out of scope) and g must be non-singular.
// Throws unsupported_family, singular_query.
LagrangeSystem build_lagrange(const CanonicalDesign& d, const Pose& g,
                              LagrangeMode mode);

// Deterministic multi-start damped Newton on the reduced system; fixed-seed
// low-discrepancy starts, roots deduplicated at 1e-6 in the reduced
// variables, every returned point residual-validated.
SolveReport solve_critical_points(const LagrangeSystem& sys,
                                  const SolverSettings& settings = {});

// minimal-distance real critical point; throws error when none is found
CriticalPoint nearest_singular_pose(const CanonicalDesign& d, const Pose& g,
                                    LagrangeMode mode,
                                    const SolverSettings& settings = {});

}  // namespace pentasing
