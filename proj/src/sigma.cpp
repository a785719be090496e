#include "pentasing/sigma.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pentasing {

namespace {

// the 7x7 matrix S as symbolic entries, rows 0..2 pose rows, rows 3..6 legs
std::array<std::array<MultiPoly, 7>, 7> symbolic_s(const CanonicalDesign& d) {
  using P = MultiPoly;
  std::array<std::array<P, 7>, 7> S;
  S[0] = {P::constant(1), P::variable(P::U), P::variable(P::V), P::variable(P::W),
          P::variable(P::PX), P::variable(P::PY), P::variable(P::PZ)};
  S[1] = {P(), P::variable(P::PX), P::variable(P::PY), P::variable(P::PZ),
          P(), P(), P()};
  S[2] = {P(), P(), P(), P(),
          P::variable(P::U), P::variable(P::V), P::variable(P::W)};
  for (int j = 0; j < 4; ++j) {
    const Vec3& M = d.design.base[j + 1];
    const double r = d.design.platform[j + 1];
    S[3 + j] = {P::constant(r),     P::constant(M[0]),     P::constant(M[1]),
                P::constant(M[2]),  P::constant(r * M[0]), P::constant(r * M[1]),
                P::constant(r * M[2])};
  }
  return S;
}

MultiPoly det3(const MultiPoly& a, const MultiPoly& b, const MultiPoly& c,
               const MultiPoly& d, const MultiPoly& e, const MultiPoly& f,
               const MultiPoly& g, const MultiPoly& h, const MultiPoly& i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

MultiPoly poly_det(std::vector<std::vector<MultiPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return MultiPoly::constant(1.0);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (n == 3)
    return det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2],
                m[2][0], m[2][1], m[2][2]);
  MultiPoly det;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    std::vector<std::vector<MultiPoly>> sub(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t cc = 0; cc < n; ++cc)
        if (cc != c) sub[r - 1].push_back(m[r][cc]);
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    det += (m[0][c] * poly_det(sub)) * sign;
  }
  return det;
}

}  // namespace

MultiPoly sigma_polynomial(const CanonicalDesign& d) {
  using P = MultiPoly;
  const ArchColumns cols = ArchColumns::from_design(d);

  // pose-row entries: pose_rows[row][col]
  const std::array<std::array<P, 7>, 3> pose_rows = {{
      {P::constant(1), P::variable(P::U), P::variable(P::V), P::variable(P::W),
       P::variable(P::PX), P::variable(P::PY), P::variable(P::PZ)},
      {P(), P::variable(P::PX), P::variable(P::PY), P::variable(P::PZ),
       P(), P(), P()},
      {P(), P(), P(), P(),
       P::variable(P::U), P::variable(P::V), P::variable(P::W)},
  }};

  MultiPoly sigma;
  double assembly_scale = 0.0;  // largest single contribution per coefficient
  for (int c0 = 0; c0 < 7; ++c0)
    for (int c1 = c0 + 1; c1 < 7; ++c1)
      for (int c2 = c1 + 1; c2 < 7; ++c2) {
        const MultiPoly m3 = det3(
            pose_rows[0][c0], pose_rows[0][c1], pose_rows[0][c2],
            pose_rows[1][c0], pose_rows[1][c1], pose_rows[1][c2],
            pose_rows[2][c0], pose_rows[2][c1], pose_rows[2][c2]);
        if (m3.is_zero()) continue;
        int rest[4], q = 0;
        for (int c = 0; c < 7; ++c)
          if (c != c0 && c != c1 && c != c2) rest[q++] = c;
        const double b = bracket(rest[0], rest[1], rest[2], rest[3], cols);
        if (b == 0.0) continue;
        // generalized Laplace sign for rows {1,2,3}: (-1)^(6 + sum of 1-based
        // column indices)
        const double sign = ((c0 + c1 + c2 + 3) % 2 == 0) ? 1.0 : -1.0;
        sigma += m3 * (sign * b);
        // the noise floor follows the bracket's operands, not its value: a
        // rank-deficient design leaves every bracket as cancellation dust,
        // and dust must not set its own pruning scale
        double bscale = 1.0;
        for (int k = 0; k < 4; ++k) {
          double m = 0.0;
          for (double v : cols.col[static_cast<std::size_t>(rest[k])])
            m = std::max(m, std::abs(v));
          bscale *= m;
        }
        assembly_scale = std::max(assembly_scale, bscale * m3.max_abs_coeff());
      }

  // coefficients that are pure cancellation noise relative to what was summed
  // must come out exactly zero (architecture-singular designs cancel globally)
  MultiPoly cleaned;
  const double cutoff = 1e-12 * assembly_scale;
  for (const auto& [e, c] : sigma.terms())
    if (std::abs(c) > cutoff) cleaned.add_term(e, c);
  return cleaned;
}

double evaluate(const MultiPoly& p, const Pose& pose) {
  return p.evaluate(pose.as_array());
}

MultiPoly undesired_polynomial(const MultiPoly& sigma, DegeneracyTarget target) {
  switch (target) {
    case DegeneracyTarget::PositionLinear:
      return sigma.terms_with_position_degree(2);
    case DegeneracyTarget::OrientationLinear:
      return sigma.terms_with_orientation_degree(2);
    case DegeneracyTarget::QuadraticTotal:
      return sigma.terms_with_total_degree(3);
  }
  return {};
}

MultiPoly undesired_polynomial(const CanonicalDesign& d, DegeneracyTarget target) {
  return undesired_polynomial(sigma_polynomial(d), target);
}

MultiPoly minor(const CanonicalDesign& d, const std::set<int>& removed_rows,
                const std::set<int>& removed_cols) {
  if (removed_rows.size() != removed_cols.size())
    throw dimension_mismatch("minor: removed row/column counts differ");
  for (int r : removed_rows)
    if (r < 1 || r > 7) throw dimension_mismatch("minor: row index out of 1..7");
  for (int c : removed_cols)
    if (c < 1 || c > 7) throw dimension_mismatch("minor: column index out of 1..7");

  const auto S = symbolic_s(d);
  std::vector<std::vector<MultiPoly>> sub;
  for (int r = 1; r <= 7; ++r) {
    if (removed_rows.count(r)) continue;
    std::vector<MultiPoly> row;
    for (int c = 1; c <= 7; ++c)
      if (!removed_cols.count(c)) row.push_back(S[r - 1][c - 1]);
    sub.push_back(std::move(row));
  }
  return poly_det(sub).pruned();
}

MultiPoly restrict_orientation(const MultiPoly& p, const Vec3& o) {
  return p.substitute({true, true, true, false, false, false},
                      {o[0], o[1], o[2], 0, 0, 0})
      .pruned();
}

MultiPoly restrict_position(const MultiPoly& p, const Vec3& pos) {
  return p.substitute({false, false, false, true, true, true},
                      {0, 0, 0, pos[0], pos[1], pos[2]})
      .pruned();
}

MultiPoly PlanePair::reconstruct() const {
  MultiPoly affine_poly = MultiPoly::constant(affine[3]);
  for (int k = 0; k < 3; ++k)
    affine_poly += MultiPoly::variable(var_base + k) * affine[k];
  return MultiPoly::variable(fixed_var) * affine_poly;
}

PlanePair factor_planes(const MultiPoly& q, int distinguished_var) {
  if (q.is_zero()) throw not_factorable("factor_planes: zero polynomial");
  const auto dv = static_cast<std::size_t>(distinguished_var);
  const int base = distinguished_var < 3 ? 0 : 3;
  const double cutoff = 1e-9 * q.max_abs_coeff();

  MultiPoly quotient;
  for (const auto& [e, c] : q.terms()) {
    if (e[dv] == 0) {
      if (std::abs(c) > cutoff)
        throw not_factorable(
            "factor_planes: monomial not divisible by the distinguished variable");
      continue;  // floating noise
    }
    MultiPoly::Expo d = e;
    d[dv] -= 1;
    quotient.add_term(d, c);
  }

  PlanePair pp{};
  pp.fixed_var = distinguished_var;
  pp.var_base = base;
  const double qcut = 1e-9 * quotient.max_abs_coeff();
  for (const auto& [e, c] : quotient.terms()) {
    const int deg = e[0] + e[1] + e[2] + e[3] + e[4] + e[5];
    if (deg == 0) {
      pp.affine[3] = c;
      continue;
    }
    bool linear_in_block = deg == 1;
    int which = -1;
    for (int k = 0; k < 3 && linear_in_block; ++k)
      if (e[static_cast<std::size_t>(base + k)] == 1) which = k;
    if (!linear_in_block || which < 0) {
      if (std::abs(c) > qcut)
        throw not_factorable("factor_planes: residual factor is not affine linear");
      continue;
    }
    pp.affine[static_cast<std::size_t>(which)] = c;
  }

  // the product must reproduce the input
  const MultiPoly diff = pp.reconstruct() - q;
  if (diff.max_abs_coeff() > 1e-9 * std::max(1.0, q.max_abs_coeff()))
    throw not_factorable("factor_planes: reconstruction mismatch");
  return pp;
}

}  // namespace pentasing
