#include "pentasing/classify.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "pentasing/sigma.hpp"

namespace pentasing {

const char* Classification::verdict_name() const {
  switch (verdict) {
    case Family::ArchitectureSingular: return "architecture-singular";
    case Family::PositionLinear: return "position-linear";
    case Family::OrientationLinear: return "orientation-linear";
    case Family::Generic: return "generic";
  }
  return "?";
}

namespace {

// least-squares (alpha, beta) for equations alpha*a_j + beta*b_j = t_j
void fit_ab(const std::vector<std::array<double, 3>>& eqs, double& alpha,
            double& beta, double& resid) {
  Eigen::MatrixXd A(eqs.size(), 2);
  Eigen::VectorXd t(eqs.size());
  for (std::size_t j = 0; j < eqs.size(); ++j) {
    A(static_cast<Eigen::Index>(j), 0) = eqs[j][0];
    A(static_cast<Eigen::Index>(j), 1) = eqs[j][1];
    t(static_cast<Eigen::Index>(j)) = eqs[j][2];
  }
  Eigen::Vector2d ab = A.colPivHouseholderQr().solve(t);
  alpha = ab(0);
  beta = ab(1);
  resid = (A * ab - t).cwiseAbs().maxCoeff();
}

bool collinear(const std::vector<Vec3>& pts, double tol) {
  if (pts.size() < 3) return true;
  const Vec3 d0 = pts[1] - pts[0];
  for (std::size_t k = 2; k < pts.size(); ++k)
    if (norm(cross(d0, pts[k] - pts[0])) > tol) return false;
  return true;
}

// canonicalize, but report the trivially singular geometries (all base points
// collinear, all offsets equal) under the synthesis error contract
CanonicalDesign canonicalize_for_synthesis(const Design& d) {
  try {
    return canonicalize(d);
  } catch (const no_triangle& e) {
    throw architecture_singular_result(e.what());
  } catch (const no_distinct_platform_pair& e) {
    throw architecture_singular_result(e.what());
  }
}

}  // namespace

Classification classify(const CanonicalDesign& d) {
  Classification c;
  c.arch = architecture_verdict(d);
  if (c.arch.singular()) {
    c.verdict = Family::ArchitectureSingular;
    c.witness = c.arch.witness;
    return c;
  }

  const MultiPoly sigma = sigma_polynomial(d);
  if (sigma.is_zero()) {
    // should be unreachable given the verdict above; defensive
    c.verdict = Family::ArchitectureSingular;
    c.witness = "identically vanishing singularity polynomial";
    return c;
  }
  if (!d.is_planar) {
    c.verdict = Family::Generic;
    c.witness = "non-planar base: no degree reduction possible";
    return c;
  }

  const double scale = sigma.max_abs_coeff();
  const auto& base = d.design.base;
  const auto& plat = d.design.platform;

  const double pos_resid =
      undesired_polynomial(sigma, DegeneracyTarget::PositionLinear).max_abs_coeff() /
      scale;
  if (pos_resid < 1e-9) {
    c.verdict = Family::PositionLinear;
    c.vanish_residual = pos_resid;
    std::vector<std::array<double, 3>> eqs;
    for (int j = 1; j < 5; ++j)
      eqs.push_back({base[j][0], base[j][1], plat[j]});
    fit_ab(eqs, c.alpha, c.beta, c.kappa_residual);
    c.witness = "platform offsets are the affine image r = alpha*X + beta*Y";
    return c;
  }

  const double ori_resid =
      undesired_polynomial(sigma, DegeneracyTarget::OrientationLinear).max_abs_coeff() /
      scale;
  if (ori_resid < 1e-9) {
    c.verdict = Family::OrientationLinear;
    c.vanish_residual = ori_resid;
    const double rtol = 1e-9 * std::max(1.0, d.design.platform_diameter());
    std::vector<std::array<double, 3>> eqs;
    int zeros = 0;
    for (int j = 1; j < 5; ++j) {
      if (std::abs(plat[j]) < rtol)
        ++zeros;
      else
        eqs.push_back({base[j][0], base[j][1], 1.0});
    }
    c.item = 1 + zeros;
    fit_ab(eqs, c.alpha, c.beta, c.kappa_residual);
    switch (c.item) {
      case 1:
        c.witness = "all offsets nonzero: base points 2..5 collinear on "
                    "alpha*x + beta*y = 1";
        break;
      case 2:
        c.witness = "one coincident platform pair, remaining three base points "
                    "collinear";
        break;
      default:
        c.witness = "triple platform point from two zero offsets";
        break;
    }
    return c;
  }

  c.verdict = Family::Generic;
  c.vanish_residual = std::min(pos_resid, ori_resid);
  c.witness = "no undesired coefficient group vanishes";
  return c;
}

Design synthesize_position_linear(const std::array<Vec3, 5>& base, double alpha,
                                  double beta) {
  double zscale = 0.0;
  for (const auto& m : base) zscale = std::max(zscale, norm(m));
  for (const auto& m : base)
    if (std::abs(m[2]) > 1e-9 * std::max(1.0, zscale))
      throw geometry_mismatch("synthesize_position_linear: base must lie in z=0");

  Design d;
  d.base = base;
  for (int j = 0; j < 5; ++j)
    d.platform[j] = alpha * base[j][0] + beta * base[j][1];

  const CanonicalDesign cd = canonicalize_for_synthesis(d);
  const Classification c = classify(cd);
  if (c.verdict == Family::ArchitectureSingular)
    throw architecture_singular_result("synthesized design is architecture-singular: " +
                                       c.witness);
  return d;
}

Design synthesize_orientation_linear(int item, const std::array<Vec3, 5>& base,
                                     const std::array<double, 5>& platform) {
  if (item < 1 || item > 3)
    throw geometry_mismatch("synthesize_orientation_linear: item must be 1..3");
  double zscale = 0.0;
  for (const auto& m : base) zscale = std::max(zscale, norm(m));
  const double btol = 1e-9 * std::max(1.0, zscale);
  for (const auto& m : base)
    if (std::abs(m[2]) > btol)
      throw geometry_mismatch("synthesize_orientation_linear: base must lie in z=0");

  Design d{base, platform};
  const CanonicalDesign cd = canonicalize_for_synthesis(d);

  // item-specific geometry on the canonical frame
  const double rtol = 1e-9 * std::max(1.0, cd.design.platform_diameter());
  std::vector<Vec3> active;
  int zeros = 0;
  for (int j = 1; j < 5; ++j) {
    if (std::abs(cd.design.platform[j]) < rtol)
      ++zeros;
    else
      active.push_back(cd.design.base[j]);
  }
  if (zeros != item - 1)
    throw geometry_mismatch(
        "synthesize_orientation_linear: zero-offset count does not match item " +
        std::to_string(item));
  const double ctol = 1e-9 * std::max(1.0, cd.design.base_diameter()) *
                      std::max(1.0, cd.design.base_diameter());
  if (!collinear(active, ctol))
    throw geometry_mismatch(
        "synthesize_orientation_linear: nonzero-offset base points must be collinear");

  const Classification c = classify(cd);
  if (c.verdict == Family::ArchitectureSingular)
    throw architecture_singular_result("synthesized design is architecture-singular: " +
                                       c.witness);
  if (c.verdict != Family::OrientationLinear || c.item != item)
    throw geometry_mismatch(
        "synthesize_orientation_linear: geometry does not realize the requested "
        "family (classified as " + std::string(c.verdict_name()) + ")");
  return d;
}

}  // namespace pentasing
