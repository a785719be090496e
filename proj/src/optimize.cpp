#include "pentasing/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

#include "pentasing/classify.hpp"
#include "pentasing/sigma.hpp"

namespace pentasing {
namespace {

constexpr double kConvergeTol = 1e-12;  // relative, per equation
constexpr double kAcceptTol = 1e-9;     // validation gate for returned roots

double radical_inverse(std::uint64_t i, unsigned base) {
  const double inv = 1.0 / base;
  double f = inv, r = 0.0;
  while (i) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// sign from the top bit of t, magnitude log-uniform over [1e-4, 1e2]
double signed_log_magnitude(double t) {
  const double sign = t < 0.5 ? -1.0 : 1.0;
  const double u = t < 0.5 ? 2.0 * t : 2.0 * t - 1.0;
  return sign * std::pow(10.0, -4.0 + 6.0 * u);
}

Eigen::VectorXd start_point(const LagrangeSystem& sys, std::uint64_t seed,
                            int k) {
  const std::uint64_t idx = seed + 1 + static_cast<std::uint64_t>(k);
  const double t1 = radical_inverse(idx, 2);
  const double t2 = radical_inverse(idx, 3);
  const double t3 = radical_inverse(idx, 5);
  const double t4 = radical_inverse(idx, 7);
  const double z = 2.0 * t1 - 1.0;
  const double phi = 2.0 * kPi * t2;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Eigen::Vector3d dir(s * std::cos(phi), s * std::sin(phi), z);

  Eigen::VectorXd y(sys.unknowns());
  if (sys.mode == LagrangeMode::Euclidean) {
    y << dir, signed_log_magnitude(t3), signed_log_magnitude(t4);
  } else {
    // scale shells mu in [0.2, 5], log-uniform
    const double mu = std::exp(std::log(0.2) + t3 * std::log(25.0));
    y << mu * dir, signed_log_magnitude(t4);
  }
  return y;
}

struct Eval {
  std::array<double, 6> x{};  // u,v,w,px,py,pz with p back-substituted
  Eigen::VectorXd R;          // reduced residuals
  Eigen::VectorXd scale;      // per-equation yardsticks, floored at 1
  Eigen::Matrix3d A;          // 2I + lambda2 Hpp(i)
  Eigen::PartialPivLU<Eigen::Matrix3d> lu;

  double rel() const { return (R.cwiseAbs().cwiseQuotient(scale)).maxCoeff(); }
  double scaled_sq() const { return R.cwiseQuotient(scale).squaredNorm(); }
  // merit under a frozen weighting, so a line search compares like with like
  double sq_under(const Eigen::VectorXd& s) const {
    return R.cwiseQuotient(s).squaredNorm();
  }
};

// back-substitute p; false when the 3x3 block is numerically singular
bool eliminate(const LagrangeSystem& sys, const Eigen::VectorXd& y, Eval& e) {
  const double l2 = y(sys.unknowns() - 1);
  const std::array<double, 6> io{y(0), y(1), y(2), 0, 0, 0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      e.A(a, b) = (a == b ? 2.0 : 0.0) + l2 * sys.Fpp[a][b].evaluate(io);
  const double amax = std::max(1.0, e.A.cwiseAbs().maxCoeff());
  if (!(std::abs(e.A.determinant()) >= 1e-12 * amax * amax * amax))
    return false;
  Eigen::Vector3d rhs;
  for (int a = 0; a < 3; ++a)
    rhs(a) = 2.0 * sys.query.position[a] -
             2.0 * sys.metric.mean_offset * (y(a) - sys.query.orientation[a]) -
             l2 * sys.Fp[a].evaluate(io);
  e.lu.compute(e.A);
  const Eigen::Vector3d p = e.lu.solve(rhs);
  e.x = {y(0), y(1), y(2), p(0), p(1), p(2)};
  return true;
}

bool evaluate_system(const LagrangeSystem& sys, const Eigen::VectorXd& y,
                     Eval& e) {
  if (!y.allFinite()) return false;
  if (!eliminate(sys, y, e)) return false;
  const int n = sys.unknowns();
  const bool euclid = sys.mode == LagrangeMode::Euclidean;
  const double l1 = euclid ? y(3) : 0.0;
  const double l2 = y(n - 1);
  const double rbar = sys.metric.mean_offset;
  const double sbar = sys.metric.mean_square;
  e.R.resize(n);
  e.scale.resize(n);
  for (int a = 0; a < 3; ++a) {
    const double dp = e.x[static_cast<std::size_t>(3 + a)] - sys.query.position[a];
    const double di = e.x[static_cast<std::size_t>(a)] - sys.query.orientation[a];
    e.R(a) = 2.0 * (rbar * dp + sbar * di) + 2.0 * l1 * e.x[static_cast<std::size_t>(a)] +
             l2 * sys.Fi[static_cast<std::size_t>(a)].evaluate(e.x);
    e.scale(a) = std::max(
        1.0, 2.0 * (std::abs(rbar * dp) + std::abs(sbar * di)) +
                 2.0 * std::abs(l1 * e.x[static_cast<std::size_t>(a)]) +
                 std::abs(l2) * sys.Fi[static_cast<std::size_t>(a)].eval_scale(e.x));
  }
  if (euclid) {
    e.R(3) = y(0) * y(0) + y(1) * y(1) + y(2) * y(2) - 1.0;
    e.scale(3) = 1.0 + y.head<3>().squaredNorm();
  }
  e.R(n - 1) = sys.F.evaluate(e.x);
  e.scale(n - 1) = std::max(1.0, sys.F.eval_scale(e.x));
  return e.R.allFinite();
}

void jacobian(const LagrangeSystem& sys, const Eigen::VectorXd& y,
              const Eval& e, Eigen::MatrixXd& J) {
  const int n = sys.unknowns();
  const bool euclid = sys.mode == LagrangeMode::Euclidean;
  const double l1 = euclid ? y(3) : 0.0;
  const double l2 = y(n - 1);
  const double rbar = sys.metric.mean_offset;
  const double sbar = sys.metric.mean_square;
  const std::array<double, 6> io{y(0), y(1), y(2), 0, 0, 0};
  const Eigen::Vector3d p(e.x[3], e.x[4], e.x[5]);

  // implicit position sensitivities: A dp/dy_l = drhs/dy_l - (dA/dy_l) p
  std::array<Eigen::Vector3d, 5> dp;
  for (int l = 0; l < n; ++l) {
    Eigen::Matrix3d dA = Eigen::Matrix3d::Zero();
    Eigen::Vector3d drhs = Eigen::Vector3d::Zero();
    if (l < 3) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b)
          dA(a, b) = l2 * sys.Fppi[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(b)]
                             [static_cast<std::size_t>(l)];
        drhs(a) = -2.0 * rbar * (a == l ? 1.0 : 0.0) -
                  l2 * sys.Fip[static_cast<std::size_t>(l)]
                              [static_cast<std::size_t>(a)].evaluate(io);
      }
    } else if (l == n - 1) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b)
          dA(a, b) = sys.Fpp[static_cast<std::size_t>(a)]
                            [static_cast<std::size_t>(b)].evaluate(io);
        drhs(a) = -sys.Fp[static_cast<std::size_t>(a)].evaluate(io);
      }
    }  // lambda1 column: position is independent of lambda1
    dp[static_cast<std::size_t>(l)] = e.lu.solve(drhs - dA * p);
  }

  J.setZero(n, n);
  for (int a = 0; a < 3; ++a) {
    Eigen::Vector3d gradp;  // dR_a/dp
    for (int b = 0; b < 3; ++b)
      gradp(b) = 2.0 * rbar * (a == b ? 1.0 : 0.0) +
                 l2 * sys.Fip[static_cast<std::size_t>(a)]
                             [static_cast<std::size_t>(b)].evaluate(e.x);
    for (int l = 0; l < n; ++l) {
      double expl;
      if (l < 3)
        expl = (a == l ? 2.0 * sbar + 2.0 * l1 : 0.0) +
               l2 * sys.Fii[static_cast<std::size_t>(a)]
                           [static_cast<std::size_t>(l)].evaluate(e.x);
      else if (euclid && l == 3)
        expl = 2.0 * e.x[static_cast<std::size_t>(a)];
      else
        expl = sys.Fi[static_cast<std::size_t>(a)].evaluate(e.x);
      J(a, l) = expl + gradp.dot(dp[static_cast<std::size_t>(l)]);
    }
  }
  if (euclid)
    for (int l = 0; l < 3; ++l) J(3, l) = 2.0 * y(l);
  Eigen::Vector3d fp;
  for (int b = 0; b < 3; ++b)
    fp(b) = sys.Fp[static_cast<std::size_t>(b)].evaluate(e.x);
  for (int l = 0; l < n; ++l) {
    const double expl =
        l < 3 ? sys.Fi[static_cast<std::size_t>(l)].evaluate(e.x) : 0.0;
    J(n - 1, l) = expl + fp.dot(dp[static_cast<std::size_t>(l)]);
  }
}

struct RunResult {
  Eigen::VectorXd y;
  Eval e;
};

bool newton_run(const LagrangeSystem& sys, Eigen::VectorXd y, int max_iters,
                int& singular_eliminations, RunResult& out) {
  Eval e;
  if (!evaluate_system(sys, y, e)) {
    ++singular_eliminations;
    return false;
  }
  Eigen::MatrixXd J;
  std::deque<double> merit_hist;  // nonmonotone reference window
  for (int it = 0; it < max_iters && e.rel() > kConvergeTol; ++it) {
    jacobian(sys, y, e, J);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd step;
    if (lu.isInvertible()) {
      step = lu.solve(-e.R);
    } else {
      // rank-deficient Jacobian: take the minimum-norm least-squares step
      // instead of abandoning the run
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
      step = cod.solve(-e.R);
      if (!step.allFinite()) return false;
    }
    // accept against the worst merit of the last few iterates; a strictly
    // monotone test stalls on the barriers between basins
    merit_hist.push_back(e.scaled_sq());
    if (merit_hist.size() > 10) merit_hist.pop_front();
    const double ref =
        *std::max_element(merit_hist.begin(), merit_hist.end());
    bool accepted = false;
    double t = 1.0;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      Eval et;
      if (!evaluate_system(sys, y + t * step, et)) continue;
      if (et.sq_under(e.scale) <= (1.0 - 1e-4 * t) * ref) {
        y += t * step;
        e = std::move(et);
        accepted = true;
        break;
      }
    }
    if (!accepted) return false;
    if (y.cwiseAbs().maxCoeff() > 1e10) return false;
  }
  if (e.rel() > kConvergeTol) return false;

  // a few undamped steps squeeze the residual toward machine precision
  for (int s = 0; s < 3; ++s) {
    jacobian(sys, y, e, J);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    if (!lu.isInvertible()) break;
    const Eigen::VectorXd yt = y + lu.solve(-e.R);
    Eval et;
    if (!evaluate_system(sys, yt, et) || et.sq_under(e.scale) >= e.scaled_sq())
      break;
    y = yt;
    e = std::move(et);
  }

  if (sys.mode == LagrangeMode::Euclidean) {
    // snap the orientation onto the sphere so downstream pose construction
    // sees Gamma satisfied to machine precision; re-run the elimination
    const double len = y.head<3>().norm();
    y.head<3>() /= len;
    if (!evaluate_system(sys, y, e) || e.rel() > kAcceptTol) return false;
  }
  out.y = std::move(y);
  out.e = std::move(e);
  return true;
}

// --- slaved phase for position-linear designs ------------------------------
// With F affine in position, the position gradient and the constraint give
// (p, lambda2) in closed form for any orientation i:
//   n = grad_p F(i),  n4 = F(i, 0),  h = g_p - rbar (i - g_i),
//   lambda2 = 2 (n.h + n4) / |n|^2,  p = h - lambda2 n / 2.
// Near orientations where |n| -> 0 the multiplier blows up like 1/|n| even
// though the underlying foot map stays smooth, so Newton on the reduced
// unknowns repels the adjacent roots; iterating on the orientation alone with
// the pair slaved reaches them. Orientations with F(i,.) identically zero are
// invisible to this parametrization; the drawn phase covers those roots.

struct SlavedEval {
  Eigen::VectorXd R;
  Eigen::VectorXd scale;
  std::array<double, 6> x{};
  double l2 = 0.0;

  double rel() const { return (R.cwiseAbs().cwiseQuotient(scale)).maxCoeff(); }
  double sq_under(const Eigen::VectorXd& s) const {
    return R.cwiseQuotient(s).squaredNorm();
  }
};

// unknowns: (u,v,w,lambda1) Euclidean, the scaled orientation alone equiform
bool slaved_eval(const LagrangeSystem& sys, const Eigen::VectorXd& z,
                 SlavedEval& e) {
  if (!z.allFinite()) return false;
  const std::array<double, 6> io{z(0), z(1), z(2), 0, 0, 0};
  Eigen::Vector3d n;
  for (int a = 0; a < 3; ++a)
    n(a) = sys.Fp[static_cast<std::size_t>(a)].evaluate(io);
  const double nn = n.squaredNorm();
  if (!(nn > 0.0)) return false;
  const double n4 = sys.F.evaluate(io);
  const double rbar = sys.metric.mean_offset;
  const double sbar = sys.metric.mean_square;
  const Eigen::Vector3d gp(sys.query.position[0], sys.query.position[1],
                           sys.query.position[2]);
  const Eigen::Vector3d gi(sys.query.orientation[0], sys.query.orientation[1],
                           sys.query.orientation[2]);
  const Eigen::Vector3d di = z.head<3>() - gi;
  const Eigen::Vector3d h = gp - rbar * di;
  const double l2 = 2.0 * (n.dot(h) + n4) / nn;
  const Eigen::Vector3d p = h - 0.5 * l2 * n;
  e.l2 = l2;
  e.x = {z(0), z(1), z(2), p(0), p(1), p(2)};
  const bool euclid = sys.mode == LagrangeMode::Euclidean;
  const double l1 = euclid ? z(3) : 0.0;
  const int rows = euclid ? 4 : 3;
  e.R.resize(rows);
  e.scale.resize(rows);
  for (int a = 0; a < 3; ++a) {
    const double dp = p(a) - gp(a);
    const double dio = e.x[static_cast<std::size_t>(a)] - gi(a);
    e.R(a) = 2.0 * (rbar * dp + sbar * dio) +
             2.0 * l1 * e.x[static_cast<std::size_t>(a)] +
             l2 * sys.Fi[static_cast<std::size_t>(a)].evaluate(e.x);
    e.scale(a) = std::max(
        1.0, 2.0 * (std::abs(rbar * dp) + std::abs(sbar * dio)) +
                 2.0 * std::abs(l1 * e.x[static_cast<std::size_t>(a)]) +
                 std::abs(l2) * sys.Fi[static_cast<std::size_t>(a)].eval_scale(e.x));
  }
  if (euclid) {
    e.R(3) = z(0) * z(0) + z(1) * z(1) + z(2) * z(2) - 1.0;
    e.scale(3) = 1.0 + z.head<3>().squaredNorm();
  }
  return e.R.allFinite();
}

bool slaved_newton(const LagrangeSystem& sys, Eigen::VectorXd z, int max_iters,
                   Eigen::VectorXd& zout, SlavedEval& eout) {
  SlavedEval e;
  if (!slaved_eval(sys, z, e)) return false;
  const int nv = static_cast<int>(z.size());
  Eigen::MatrixXd J(e.R.size(), nv);
  std::deque<double> merit_hist;
  for (int it = 0; it < max_iters && e.rel() > kConvergeTol; ++it) {
    // central-difference Jacobian: this phase only seeds the main solver, so
    // derivative noise at the 1e-7 step scale is immaterial
    for (int l = 0; l < nv; ++l) {
      const double h = 1e-7 * std::max(1.0, std::abs(z(l)));
      Eigen::VectorXd zp = z, zm = z;
      zp(l) += h;
      zm(l) -= h;
      SlavedEval ep, em;
      if (!slaved_eval(sys, zp, ep) || !slaved_eval(sys, zm, em)) return false;
      J.col(l) = (ep.R - em.R) / (2.0 * h);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd step;
    if (lu.isInvertible()) {
      step = lu.solve(-e.R);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(J);
      step = cod.solve(-e.R);
      if (!step.allFinite()) return false;
    }
    merit_hist.push_back(e.sq_under(e.scale));
    if (merit_hist.size() > 10) merit_hist.pop_front();
    const double ref =
        *std::max_element(merit_hist.begin(), merit_hist.end());
    bool accepted = false;
    double t = 1.0;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      SlavedEval et;
      if (!slaved_eval(sys, z + t * step, et)) continue;
      if (et.sq_under(e.scale) <= (1.0 - 1e-4 * t) * ref) {
        z += t * step;
        e = std::move(et);
        accepted = true;
        break;
      }
    }
    if (!accepted) return false;
    if (z.cwiseAbs().maxCoeff() > 1e10) return false;
  }
  if (e.rel() > kConvergeTol) return false;
  zout = std::move(z);
  eout = std::move(e);
  return true;
}

// run the slaved reduction from the k-th low-discrepancy orientation and lift
// the result to a start for the main Newton phase
bool slaved_seed(const LagrangeSystem& sys, std::uint64_t seed, int k,
                 int max_iters, Eigen::VectorXd& y) {
  const std::uint64_t idx = seed + 1 + static_cast<std::uint64_t>(k);
  const double t1 = radical_inverse(idx, 2);
  const double t2 = radical_inverse(idx, 3);
  const double t3 = radical_inverse(idx, 5);
  const double zc = 2.0 * t1 - 1.0;
  const double phi = 2.0 * kPi * t2;
  const double s = std::sqrt(std::max(0.0, 1.0 - zc * zc));
  const Eigen::Vector3d dir(s * std::cos(phi), s * std::sin(phi), zc);

  const bool euclid = sys.mode == LagrangeMode::Euclidean;
  Eigen::VectorXd z0(euclid ? 4 : 3);
  if (euclid)
    z0 << dir, 0.0;
  else
    z0 << std::exp(std::log(0.2) + t3 * std::log(25.0)) * dir;
  SlavedEval e0;
  if (!slaved_eval(sys, z0, e0)) return false;
  if (euclid) {
    // least-squares multiplier for the sphere constraint at the seed
    double num = 0.0;
    for (int a = 0; a < 3; ++a) num += e0.R(a) * z0(a);
    z0(3) = -num / (2.0 * z0.head<3>().squaredNorm());
  }
  Eigen::VectorXd zc2;
  SlavedEval ec;
  if (!slaved_newton(sys, z0, max_iters, zc2, ec)) return false;
  y.resize(sys.unknowns());
  if (euclid)
    y << zc2.head<3>(), zc2(3), ec.l2;
  else
    y << zc2.head<3>(), ec.l2;
  return true;
}

// residual over the full gradient system: reduced rows plus the three
// position-gradient equations satisfied by construction
double full_residual(const LagrangeSystem& sys, const Eigen::VectorXd& y,
                     const Eval& e) {
  const double l2 = y(sys.unknowns() - 1);
  double r = e.R.cwiseAbs().maxCoeff();
  for (int a = 0; a < 3; ++a) {
    const double dp = e.x[static_cast<std::size_t>(3 + a)] - sys.query.position[a];
    const double di = e.x[static_cast<std::size_t>(a)] - sys.query.orientation[a];
    r = std::max(r, std::abs(2.0 * dp + 2.0 * sys.metric.mean_offset * di +
                             l2 * sys.Fp[static_cast<std::size_t>(a)].evaluate(e.x)));
  }
  return r;
}

}  // namespace

LagrangeSystem build_lagrange(const CanonicalDesign& d, const Pose& g,
                              LagrangeMode mode) {
  const Classification c = classify(d);
  if (c.verdict != Family::PositionLinear &&
      c.verdict != Family::OrientationLinear)
    throw unsupported_family(
        std::string("nearest-singularity reduction needs a position- or "
                    "orientation-linear design; this one is ") +
        c.verdict_name());

  LagrangeSystem sys;
  sys.mode = mode;
  sys.family = c.verdict;
  sys.metric = MetricCoefficients::from_design(d.design);
  sys.query = g;
  sys.F = sigma_polynomial(d);
  const auto gx = g.as_array();
  if (std::abs(sys.F.evaluate(gx)) <= 1e-9 * sys.F.eval_scale(gx))
    throw singular_query("query pose lies on the singularity set");

  for (int a = 0; a < 3; ++a) {
    sys.Fi[static_cast<std::size_t>(a)] = sys.F.derivative(MultiPoly::U + a);
    sys.Fp[static_cast<std::size_t>(a)] = sys.F.derivative(MultiPoly::PX + a);
  }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      sys.Fii[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          sys.Fi[static_cast<std::size_t>(a)].derivative(MultiPoly::U + b);
      sys.Fip[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          sys.Fi[static_cast<std::size_t>(a)].derivative(MultiPoly::PX + b);
      sys.Fpp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          sys.Fp[static_cast<std::size_t>(a)].derivative(MultiPoly::PX + b);
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int l = 0; l < 3; ++l)
        sys.Fppi[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                [static_cast<std::size_t>(l)] =
            sys.Fpp[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                .derivative(MultiPoly::U + l)
                .constant_value();
  return sys;
}

SolveReport solve_critical_points(const LagrangeSystem& sys,
                                  const SolverSettings& settings) {
  SolveReport report;
  report.starts_used = settings.starts;
  std::vector<RunResult> roots;

  // for position-linear designs, half the budget runs the slaved reduction
  // first and lifts its result into the main phase; every accepted root passes
  // through the same Newton, residual gates and validation either way
  const bool use_slaved = sys.family == Family::PositionLinear;
  const int drawn = use_slaved ? settings.starts - settings.starts / 2
                               : settings.starts;

  for (int k = 0; k < settings.starts; ++k) {
    Eigen::VectorXd y0;
    if (k < drawn) {
      y0 = start_point(sys, settings.seed, k);
    } else if (!slaved_seed(sys, settings.seed, k, settings.max_iterations,
                            y0)) {
      continue;
    }
    RunResult run;
    if (!newton_run(sys, y0, settings.max_iterations,
                    report.singular_eliminations, run))
      continue;
    ++report.converged_runs;
    if (run.e.rel() > kAcceptTol) continue;

    // Points where the constraint gradient vanishes sit on self-intersections
    // of the surface; there the multiplier diverges in exact arithmetic and
    // double precision truncates the divergence into a pseudo-root that
    // passes the residual gates. Discard gradient-degenerate points.
    double ginf = 0.0, gscale = 0.0;
    for (int a = 0; a < 3; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      ginf = std::max({ginf, std::abs(sys.Fi[ai].evaluate(run.e.x)),
                       std::abs(sys.Fp[ai].evaluate(run.e.x))});
      gscale = std::max({gscale, sys.Fi[ai].eval_scale(run.e.x),
                         sys.Fp[ai].eval_scale(run.e.x)});
    }
    if (ginf <= 1e-6 * std::max(1.0, gscale)) {
      ++report.degenerate_rejections;
      continue;
    }

    bool duplicate = false;
    for (auto& r : roots) {
      if ((r.y - run.y).cwiseAbs().maxCoeff() < 1e-6) {
        duplicate = true;
        if (run.e.rel() < r.e.rel()) r = run;  // keep the cleaner representative
        break;
      }
    }
    if (!duplicate) roots.push_back(std::move(run));
  }

  for (const auto& r : roots) {
    const Vec3 o{r.e.x[0], r.e.x[1], r.e.x[2]};
    const Vec3 p{r.e.x[3], r.e.x[4], r.e.x[5]};
    CriticalPoint cp;
    cp.pose = sys.mode == LagrangeMode::Euclidean ? Pose::euclidean(o, p)
                                                  : Pose::equiform(o, p);
    if (sys.mode == LagrangeMode::Euclidean) cp.lambda1 = r.y(3);
    cp.lambda2 = r.y(sys.unknowns() - 1);
    cp.distance = pose_distance(cp.pose, sys.query, sys.metric);
    cp.mu = cp.pose.scale();
    cp.residual = full_residual(sys, r.y, r.e);
    report.points.push_back(std::move(cp));
  }
  std::sort(report.points.begin(), report.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.pose.as_array() < b.pose.as_array();
            });

  if (settings.expected_roots &&
      static_cast<int>(report.points.size()) < *settings.expected_roots)
    report.status = SolveStatus::BudgetExhausted;
  return report;
}

CriticalPoint nearest_singular_pose(const CanonicalDesign& d, const Pose& g,
                                    LagrangeMode mode,
                                    const SolverSettings& settings) {
  const SolveReport report =
      solve_critical_points(build_lagrange(d, g, mode), settings);
  if (report.points.empty())
    throw error("no real critical point found within the solver budget");
  return report.points.front();
}

}  // namespace pentasing
