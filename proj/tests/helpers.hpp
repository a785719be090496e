#pragma once

// Shared fixtures and independent oracles for the test binaries. Everything
// here recomputes reference values through a different route than the library
// (numeric LU determinants, integer cofactor expansion, KKT solves,
// brute-force sphere search) so agreement is meaningful.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "pentasing/brackets.hpp"
#include "pentasing/classify.hpp"
#include "pentasing/model.hpp"
#include "pentasing/poly.hpp"
#include "pentasing/sigma.hpp"

namespace testutil {

using namespace pentasing;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Vec3 random_unit(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  while (true) {
    Vec3 v{n(g), n(g), n(g)};
    const double len = norm(v);
    if (len > 1e-3) return {v[0] / len, v[1] / len, v[2] / len};
  }
}

inline Pose random_pose(std::mt19937_64& g, double box = 5.0) {
  Pose p;
  p.orientation = random_unit(g);
  p.position = {uniform(g, -box, box), uniform(g, -box, box),
                uniform(g, -box, box)};
  return p;
}

inline std::array<double, 6> as_array(const Pose& p) { return p.as_array(); }

// --- random designs --------------------------------------------------------

// five base anchors in the z=0 plane, far enough apart to stay well scaled
inline Design random_planar_design(std::mt19937_64& g) {
  while (true) {
    Design d;
    for (auto& m : d.base) m = {uniform(g, -3, 3), uniform(g, -3, 3), 0.0};
    for (auto& r : d.platform) r = uniform(g, -3, 3);
    bool ok = std::abs(d.platform[1] - d.platform[0]) > 0.2;
    for (int a = 0; a < 5 && ok; ++a)
      for (int b = a + 1; b < 5; ++b)
        if (norm(d.base[a] - d.base[b]) < 0.3) ok = false;
    // non-collinear first three anchors so canonicalize has a frame
    const Vec3 c = cross(d.base[1] - d.base[0], d.base[2] - d.base[0]);
    if (ok && norm(c) > 0.3) return d;
  }
}

// five anchors with a decidedly non-planar base
inline Design random_spatial_design(std::mt19937_64& g) {
  while (true) {
    Design d = random_planar_design(g);
    for (auto& m : d.base) m[2] = uniform(g, -2, 2);
    const Vec3 e1 = d.base[1] - d.base[0];
    const Vec3 e2 = d.base[2] - d.base[0];
    const Vec3 n = cross(e1, e2);
    const double nl = norm(n);
    if (nl < 0.3) continue;
    const double h4 = std::abs(dot(n, d.base[3] - d.base[0])) / nl;
    const double h5 = std::abs(dot(n, d.base[4] - d.base[0])) / nl;
    if (h4 > 0.2 && h5 > 0.2) return d;
  }
}

inline Design random_full_rank_design(std::mt19937_64& g, bool planar) {
  while (true) {
    Design d = planar ? random_planar_design(g) : random_spatial_design(g);
    if (!architecture_verdict(canonicalize(d)).singular()) return d;
  }
}

// planar base with platform offsets from a random singular affine map
inline Design random_position_linear_design(std::mt19937_64& g) {
  while (true) {
    Design base_only = random_planar_design(g);
    const double alpha = uniform(g, -2, 2);
    const double beta = uniform(g, -2, 2);
    if (std::abs(alpha) + std::abs(beta) < 0.2) continue;
    try {
      Design d = synthesize_position_linear(base_only.base, alpha, beta);
      // keep the offsets distinguishable so canonicalization is well posed
      if (std::abs(d.platform[1] - d.platform[0]) < 0.2) continue;
      return d;
    } catch (const architecture_singular_result&) {
    } catch (const error&) {
    }
  }
}

// planar design realizing the requested orientation-linear item: anchors of
// the legs with a distinct platform offset sit on a common base line missing
// the first anchor, and the last item-1 legs repeat the first offset
inline Design random_orientation_linear_design(std::mt19937_64& g, int item) {
  while (true) {
    const double th = uniform(g, 0.0, 2.0 * kPi);
    const Vec3 dir{std::cos(th), std::sin(th), 0.0};
    const Vec3 perp{-dir[1], dir[0], 0.0};
    const Vec3 c{uniform(g, -1.5, 1.5), uniform(g, -1.5, 1.5), 0.0};
    const double side = uniform(g, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;

    Design d;
    d.base[0] =
        c + uniform(g, -2.0, 2.0) * dir + side * uniform(g, 0.8, 2.5) * perp;
    d.platform[0] = uniform(g, -2.0, 2.0);

    // line parameters and offset increments, kept apart for conditioning
    const int active = 5 - (item - 1);
    std::array<double, 4> t{}, delta{};
    bool ok = true;
    for (int j = 0; j + 1 < active && ok; ++j) {
      t[static_cast<std::size_t>(j)] = uniform(g, -2.5, 2.5);
      const double mag = uniform(g, 0.35, 3.0);
      delta[static_cast<std::size_t>(j)] =
          uniform(g, 0.0, 1.0) < 0.5 ? -mag : mag;
      for (int i = 0; i < j; ++i) {
        if (std::abs(t[static_cast<std::size_t>(j)] -
                     t[static_cast<std::size_t>(i)]) < 0.4)
          ok = false;
        if (std::abs(delta[static_cast<std::size_t>(j)] -
                     delta[static_cast<std::size_t>(i)]) < 0.3)
          ok = false;
      }
    }
    if (!ok) continue;
    for (int j = 1; j < 5; ++j) {
      if (j < active) {
        d.base[static_cast<std::size_t>(j)] =
            c + t[static_cast<std::size_t>(j - 1)] * dir;
        d.platform[static_cast<std::size_t>(j)] =
            d.platform[0] + delta[static_cast<std::size_t>(j - 1)];
      } else {
        d.base[static_cast<std::size_t>(j)] = {uniform(g, -3, 3),
                                               uniform(g, -3, 3), 0.0};
        d.platform[static_cast<std::size_t>(j)] = d.platform[0];
      }
    }
    for (int a = 0; a < 5 && ok; ++a)
      for (int b = a + 1; b < 5; ++b)
        if (norm(d.base[static_cast<std::size_t>(a)] -
                 d.base[static_cast<std::size_t>(b)]) < 0.3)
          ok = false;
    if (!ok) continue;
    try {
      return synthesize_orientation_linear(item, d.base, d.platform);
    } catch (const architecture_singular_result&) {
    } catch (const geometry_mismatch&) {
    }
  }
}

// legs 2..5 on a common base line with offsets tied to the line parameter:
// their architecture rows span only three directions, so the rank drops
inline Design rank_deficient_design(std::mt19937_64& g) {
  while (true) {
    const Vec3 A{uniform(g, -2, 2), uniform(g, -2, 2), 0};
    const Vec3 B = random_unit(g);
    Design d;
    d.base[0] = {uniform(g, -2, 2), uniform(g, 2.5, 4), 0};
    d.platform[0] = uniform(g, -2, 2);
    bool ok = true;
    std::array<double, 4> t{};
    for (int j = 0; j < 4; ++j) {
      t[static_cast<std::size_t>(j)] = uniform(g, -2, 2);
      for (int i = 0; i < j; ++i)
        if (std::abs(t[static_cast<std::size_t>(j)] -
                     t[static_cast<std::size_t>(i)]) < 0.3)
          ok = false;
    }
    if (!ok) continue;
    for (int j = 0; j < 4; ++j) {
      const double tj = t[static_cast<std::size_t>(j)];
      d.base[static_cast<std::size_t>(j + 1)] = A + tj * B;
      d.platform[static_cast<std::size_t>(j + 1)] = tj;
    }
    // the canonical frame needs a base triangle somewhere
    if (norm(cross(d.base[1] - d.base[0], d.base[2] - d.base[0])) < 0.3)
      continue;
    if (std::abs(d.platform[1] - d.platform[0]) < 0.2) continue;
    return d;
  }
}

// integer-coordinate design for the exact bracket oracle
inline Design random_integer_design(std::mt19937_64& g) {
  std::uniform_int_distribution<int> pick(-5, 5);
  while (true) {
    Design d;
    for (auto& m : d.base)
      m = {double(pick(g)), double(pick(g)), double(pick(g))};
    for (auto& r : d.platform) r = double(pick(g));
    if (d.platform[0] != d.platform[1] &&
        norm(cross(d.base[1] - d.base[0], d.base[2] - d.base[0])) > 0.5)
      return d;
  }
}

// --- documented example designs --------------------------------------------

inline Design demo_position_linear() {
  return Design{{Vec3{0, 0, 0}, Vec3{-0.5, 0, 0}, Vec3{1, 2, 0},
                 Vec3{-3, -1, 0}, Vec3{-1, 2, 0}},
                {0, 1, 2, 4, 6}};
}

inline Design demo_orientation_linear() {
  return Design{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{-0.5, 1.5, 0},
                 Vec3{-3, 4, 0}, Vec3{-1, 2, 0}},
                {0, 1, 3, 5, 6}};
}

inline Pose demo_query() {
  Pose g;
  g.orientation = {1.0 / 3, 2.0 / 3, 2.0 / 3};
  g.position = {1, 2, 3};
  return g;
}

// --- independent oracles ---------------------------------------------------

// direct numeric determinant of the 7x7 configuration matrix via LU
inline double det7(const CanonicalDesign& d, const std::array<double, 6>& x) {
  Eigen::Matrix<double, 7, 7> S;
  S.row(0) << 1, x[0], x[1], x[2], x[3], x[4], x[5];
  S.row(1) << 0, x[3], x[4], x[5], 0, 0, 0;
  S.row(2) << 0, 0, 0, 0, x[0], x[1], x[2];
  for (int j = 0; j < 4; ++j) {
    const Vec3& M = d.design.base[static_cast<std::size_t>(j + 1)];
    const double r = d.design.platform[static_cast<std::size_t>(j + 1)];
    S.row(3 + j) << r, M[0], M[1], M[2], r * M[0], r * M[1], r * M[2];
  }
  return S.determinant();
}

// exact 4x4 integer determinant by cofactor expansion
inline long long int_det4(const std::array<std::array<long long, 4>, 4>& m) {
  auto det3 = [](long long a, long long b, long long c, long long d,
                 long long e, long long f, long long g, long long h,
                 long long i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
  };
  long long det = 0;
  for (int c = 0; c < 4; ++c) {
    std::array<long long, 9> sub{};
    int k = 0;
    for (int r = 1; r < 4; ++r)
      for (int cc = 0; cc < 4; ++cc)
        if (cc != c) sub[static_cast<std::size_t>(k++)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc)];
    const long long d3 = det3(sub[0], sub[1], sub[2], sub[3], sub[4], sub[5],
                              sub[6], sub[7], sub[8]);
    det += (c % 2 == 0 ? 1 : -1) * m[0][static_cast<std::size_t>(c)] * d3;
  }
  return det;
}

// exact bracket for an integer canonical design
inline long long exact_bracket(int a, int b, int c, int dd,
                               const CanonicalDesign& d) {
  const std::array<int, 4> sel{a, b, c, dd};
  std::array<std::array<long long, 4>, 4> m{};
  for (int leg = 0; leg < 4; ++leg) {
    const Vec3& M = d.design.base[static_cast<std::size_t>(leg + 1)];
    const long long r = std::llround(d.design.platform[static_cast<std::size_t>(leg + 1)]);
    const std::array<long long, 7> cols{
        r, std::llround(M[0]), std::llround(M[1]), std::llround(M[2]),
        r * std::llround(M[0]), r * std::llround(M[1]), r * std::llround(M[2])};
    for (int k = 0; k < 4; ++k)
      m[static_cast<std::size_t>(leg)][static_cast<std::size_t>(k)] =
          cols[static_cast<std::size_t>(sel[static_cast<std::size_t>(k)])];
  }
  return int_det4(m);
}

// average squared anchor displacement over the five legs: the metric the
// distance coefficients are supposed to reproduce
inline double avg_anchor_sq(const Design& d, const Pose& a, const Pose& b) {
  double s = 0.0;
  for (int j = 0; j < 5; ++j) {
    const double r = d.platform[static_cast<std::size_t>(j)];
    const Vec3 ma = a.position + r * a.orientation;
    const Vec3 mb = b.position + r * b.orientation;
    s += dot(ma - mb, ma - mb);
  }
  return s / 5.0;
}

inline Vec3 fib_sphere(int k, int n) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double z = 1.0 - (2.0 * k + 1.0) / n;
  const double phi = 2.0 * kPi * std::fmod(k / golden, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

// --- pedal oracles ---------------------------------------------------------

// nearest point of the plane {n.p + n4 = 0} to g, via the KKT system rather
// than the projection formula
inline Vec3 plane_foot_kkt(const Vec3& n, double n4, const Vec3& g) {
  Eigen::Matrix4d K = Eigen::Matrix4d::Zero();
  Eigen::Vector4d rhs;
  for (int i = 0; i < 3; ++i) {
    K(i, i) = 2.0;
    K(3, i) = K(i, 3) = n[static_cast<std::size_t>(i)];
    rhs(i) = 2.0 * g[static_cast<std::size_t>(i)];
  }
  rhs(3) = -n4;
  const Eigen::Vector4d sol = K.fullPivLu().solve(rhs);
  return {sol(0), sol(1), sol(2)};
}

// brute-force spherical distance from a unit query to the curve {q = 0} on
// the unit sphere: dense sampling, then tangential projection and sliding
// descent along the curve
inline double sphere_curve_min_deg(const MultiPoly& q, const Vec3& query,
                                   int samples = 200000) {
  const auto evalq = [&](const Vec3& i) {
    return q.evaluate({i[0], i[1], i[2], 0, 0, 0});
  };
  const MultiPoly qu = q.derivative(MultiPoly::U);
  const MultiPoly qv = q.derivative(MultiPoly::V);
  const MultiPoly qw = q.derivative(MultiPoly::W);
  const auto gradq = [&](const Vec3& i) {
    const std::array<double, 6> x{i[0], i[1], i[2], 0, 0, 0};
    return Vec3{qu.evaluate(x), qv.evaluate(x), qw.evaluate(x)};
  };
  const auto normalize = [](Vec3 v) {
    const double l = norm(v);
    return Vec3{v[0] / l, v[1] / l, v[2] / l};
  };
  // project a point onto the curve along the tangential gradient
  const auto project = [&](Vec3 i) -> Vec3 {
    for (int it = 0; it < 60; ++it) {
      const double val = evalq(i);
      Vec3 gr = gradq(i);
      const Vec3 gt = gr - dot(gr, i) * i;
      const double gg = dot(gt, gt);
      if (gg < 1e-300) break;
      i = normalize(i - (val / gg) * gt);
      if (std::abs(evalq(i)) < 1e-14 * std::max(1.0, q.eval_scale({i[0], i[1], i[2], 0, 0, 0})))
        break;
    }
    return i;
  };
  const auto angle_to = [&](const Vec3& i) {
    return std::acos(std::clamp(dot(i, query), -1.0, 1.0));
  };

  // coarse scan for seeds. A residual band alone can miss a whole branch of
  // a factored curve: near a vanishing factor the product shrinks no faster
  // than its own term-magnitude scale when the cofactor is large. So besides
  // the banded grid points, Newton-project a strided subset of the grid and
  // keep every point that lands on the curve, wherever it came from
  std::vector<Vec3> seeds;
  std::vector<std::pair<double, Vec3>> near;
  for (int k = 0; k < samples; ++k) {
    const Vec3 i = fib_sphere(k, samples);
    const double band =
        1e-2 * std::max(1.0, q.eval_scale({i[0], i[1], i[2], 0, 0, 0}));
    if (std::abs(evalq(i)) < band) near.push_back({angle_to(i), i});
  }
  const int stride = std::max(1, samples / 20000);
  for (int k = 0; k < samples; k += stride) {
    const Vec3 p = project(fib_sphere(k, samples));
    if (std::abs(evalq(p)) <
        1e-10 * std::max(1.0, q.eval_scale({p[0], p[1], p[2], 0, 0, 0})))
      near.push_back({angle_to(p), p});
  }
  std::sort(near.begin(), near.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < near.size() && seeds.size() < 40; ++k)
    seeds.push_back(near[k].second);

  double best = 1e99;
  for (Vec3 seed : seeds) {
    Vec3 i = project(seed);
    // slide along the curve tangent, shrinking the step on failure
    double step = 0.05;
    double cur = angle_to(i);
    for (int it = 0; it < 400 && step > 1e-12; ++it) {
      Vec3 gr = gradq(i);
      const Vec3 gt = gr - dot(gr, i) * i;
      if (norm(gt) < 1e-300) break;
      const Vec3 tau = normalize(cross(i, gt));
      bool moved = false;
      for (const double s : {step, -step}) {
        const Vec3 cand = project(normalize(i + s * tau));
        if (angle_to(cand) < cur - 1e-16) {
          i = cand;
          cur = angle_to(i);
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, cur);
  }
  return rad2deg(best);
}

// --- optimize oracle -------------------------------------------------------

// closed-form singular foot for a fixed orientation of a position-linear
// design, under the object metric; returns squared distance (or +inf when the
// restriction degenerates)
inline double fixed_orientation_min_sq(const MultiPoly& F,
                                       const MetricCoefficients& met,
                                       const Pose& g, const Vec3& i) {
  const std::array<double, 6> io{i[0], i[1], i[2], 0, 0, 0};
  const Vec3 n{F.derivative(MultiPoly::PX).evaluate(io),
               F.derivative(MultiPoly::PY).evaluate(io),
               F.derivative(MultiPoly::PZ).evaluate(io)};
  const double n4 = F.evaluate(io);
  const double nn = dot(n, n);
  if (nn < 1e-14) return 1e99;
  const Vec3 di = i - g.orientation;
  const Vec3 h = g.position - met.mean_offset * di;
  const double l = 2.0 * (dot(n, h) + n4) / nn;
  const Vec3 p = h - (0.5 * l) * n;
  const Vec3 dp = p - g.position;
  return dot(dp, dp) + 2.0 * met.mean_offset * dot(dp, di) +
         met.mean_square * dot(di, di);
}

// grid + local-refinement lower-bound oracle for the Euclidean nearest
// singular pose of a position-linear design
inline double grid_min_distance(const CanonicalDesign& d, const Pose& g,
                                int samples = 50000) {
  const MultiPoly F = sigma_polynomial(d);
  const MetricCoefficients met = MetricCoefficients::from_design(d.design);
  double best = 1e99;
  Vec3 besti{0, 0, 1};
  for (int k = 0; k < samples; ++k) {
    const Vec3 i = fib_sphere(k, samples);
    const double sq = fixed_orientation_min_sq(F, met, g, i);
    if (sq < best) {
      best = sq;
      besti = i;
    }
  }
  // derivative-free refinement in the tangent plane of the best sample
  Vec3 i = besti;
  const auto f = [&](const Vec3& v) {
    return fixed_orientation_min_sq(F, met, g, v);
  };
  double cur = best;
  double step = 0.02;
  while (step > 1e-9) {
    Vec3 a{1, 0, 0};
    if (std::abs(i[0]) > 0.9) a = {0, 1, 0};
    Vec3 e1 = cross(i, a);
    e1 = (1.0 / norm(e1)) * e1;
    Vec3 e2 = cross(i, e1);
    bool moved = false;
    for (const auto& dir : {e1, Vec3{-e1[0], -e1[1], -e1[2]}, e2,
                            Vec3{-e2[0], -e2[1], -e2[2]}}) {
      Vec3 cand = i + step * dir;
      const double l = norm(cand);
      cand = {cand[0] / l, cand[1] / l, cand[2] / l};
      const double v = f(cand);
      if (v < cur) {
        i = cand;
        cur = v;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }

  // a planar position-linear design factors its polynomial as w * G, so the
  // whole equator w = 0 is singular at every position — a second sheet of the
  // variety the per-orientation plane feet never see. Its minimum has a
  // closed form: the free-position optimum at the nearest equator orientation
  bool pure_w_factor = true;
  for (int k = 0; k < 8 && pure_w_factor; ++k) {
    const Vec3 i = fib_sphere(7 * k + 3, 97);
    const std::array<double, 6> x{i[0], i[1], 0.0, 1.3 + k, -0.7 * k, 2.1};
    if (std::abs(F.evaluate(x)) > 1e-9 * std::max(1.0, F.eval_scale(x)))
      pure_w_factor = false;
  }
  if (pure_w_factor) {
    const double var = met.mean_square - met.mean_offset * met.mean_offset;
    const double rho = std::hypot(g.orientation[0], g.orientation[1]);
    cur = std::min(cur, var * (2.0 - 2.0 * rho));
  }
  return std::sqrt(cur);
}

}  // namespace testutil
