#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "pentasing/core.hpp"

namespace pentasing {

// Sparse polynomial in the six pose variables, indexed 0..5 = u,v,w,px,py,pz.
// Terms are kept in a map ordered lexicographically by exponent tuple, which
// fixes the CSV export order for free.
class MultiPoly {
 public:
  using Expo = std::array<std::uint8_t, 6>;
  using Terms = std::map<Expo, double>;

  enum Var { U = 0, V = 1, W = 2, PX = 3, PY = 4, PZ = 5 };

  MultiPoly() = default;
  static MultiPoly constant(double c);
  static MultiPoly variable(int var);

  void add_term(const Expo& e, double c);

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(double s) const;
  MultiPoly& operator+=(const MultiPoly& o);

  // drops terms with |coeff| < rel_tol * max|coeff|
  MultiPoly pruned(double rel_tol = 1e-14) const;

  double evaluate(const std::array<double, 6>& x) const;
  MultiPoly derivative(int var) const;

  // substitute the given variables by values, keeping the rest symbolic
  MultiPoly substitute(const std::array<bool, 6>& fixed,
                       const std::array<double, 6>& values) const;

  int degree_in(int var) const;
  int total_degree() const;        // -1 for the zero polynomial
  int orientation_degree() const;  // max over terms of e_u+e_v+e_w
  int position_degree() const;     // max over terms of e_px+e_py+e_pz

  // filters used for the undesired-term extraction
  MultiPoly terms_with_position_degree(int d) const;
  MultiPoly terms_with_orientation_degree(int d) const;
  MultiPoly terms_with_total_degree(int d) const;

  double max_abs_coeff() const;
  // sum over terms of |coeff * monomial(x)|: scale reference for "is this
  // evaluation effectively zero" tests
  double eval_scale(const std::array<double, 6>& x) const;

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  double constant_value() const;  // 0 for the zero polynomial
  double coeff(const Expo& e) const;
  std::size_t term_count() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }

  std::string to_csv() const;   // header + one line per term, lex order
  std::string to_text() const;  // human-readable sum of monomials

 private:
  Terms terms_;
};

inline MultiPoly operator*(double s, const MultiPoly& p) { return p * s; }

}  // namespace pentasing
