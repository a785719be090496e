#include "pentasing/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pentasing {

MultiPoly MultiPoly::constant(double c) {
  MultiPoly p;
  p.add_term({0, 0, 0, 0, 0, 0}, c);
  return p;
}

MultiPoly MultiPoly::variable(int var) {
  MultiPoly p;
  Expo e{0, 0, 0, 0, 0, 0};
  e[static_cast<std::size_t>(var)] = 1;
  p.add_term(e, 1.0);
  return p;
}

void MultiPoly::add_term(const Expo& e, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly r;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Expo e;
      for (std::size_t k = 0; k < 6; ++k)
        e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MultiPoly MultiPoly::operator*(double s) const {
  MultiPoly r;
  if (s == 0.0) return r;
  for (const auto& [e, c] : terms_) r.terms_[e] = c * s;
  return r;
}

MultiPoly MultiPoly::pruned(double rel_tol) const {
  const double cutoff = rel_tol * max_abs_coeff();
  MultiPoly r;
  for (const auto& [e, c] : terms_)
    if (std::abs(c) >= cutoff && c != 0.0) r.terms_[e] = c;
  return r;
}

double MultiPoly::evaluate(const std::array<double, 6>& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (std::size_t k = 0; k < 6; ++k)
      for (int j = 0; j < e[k]; ++j) m *= x[k];
    sum += m;
  }
  return sum;
}

double MultiPoly::eval_scale(const std::array<double, 6>& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = std::abs(c);
    for (std::size_t k = 0; k < 6; ++k)
      for (int j = 0; j < e[k]; ++j) m *= std::abs(x[k]);
    sum += m;
  }
  return sum;
}

MultiPoly MultiPoly::derivative(int var) const {
  const auto v = static_cast<std::size_t>(var);
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Expo d = e;
    d[v] -= 1;
    r.add_term(d, c * e[v]);
  }
  return r;
}

MultiPoly MultiPoly::substitute(const std::array<bool, 6>& fixed,
                                const std::array<double, 6>& values) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_) {
    double m = c;
    Expo d = e;
    for (std::size_t k = 0; k < 6; ++k) {
      if (!fixed[k]) continue;
      for (int j = 0; j < e[k]; ++j) m *= values[k];
      d[k] = 0;
    }
    r.add_term(d, m);
  }
  return r;
}

int MultiPoly::degree_in(int var) const {
  const auto v = static_cast<std::size_t>(var);
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[v]));
  return d;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, e[0] + e[1] + e[2] + e[3] + e[4] + e[5]);
  return d;
}

int MultiPoly::orientation_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, e[0] + e[1] + e[2]);
  return d;
}

int MultiPoly::position_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, e[3] + e[4] + e[5]);
  return d;
}

MultiPoly MultiPoly::terms_with_position_degree(int d) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_)
    if (e[3] + e[4] + e[5] == d) r.terms_[e] = c;
  return r;
}

MultiPoly MultiPoly::terms_with_orientation_degree(int d) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_)
    if (e[0] + e[1] + e[2] == d) r.terms_[e] = c;
  return r;
}

MultiPoly MultiPoly::terms_with_total_degree(int d) const {
  MultiPoly r;
  for (const auto& [e, c] : terms_)
    if (e[0] + e[1] + e[2] + e[3] + e[4] + e[5] == d) r.terms_[e] = c;
  return r;
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Expo{0, 0, 0, 0, 0, 0};
}

double MultiPoly::constant_value() const {
  auto it = terms_.find(Expo{0, 0, 0, 0, 0, 0});
  return it == terms_.end() ? 0.0 : it->second;
}

double MultiPoly::coeff(const Expo& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

std::string MultiPoly::to_csv() const {
  std::string out = "du,dv,dw,dpx,dpy,dpz,coefficient\n";
  char buf[128];
  for (const auto& [e, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d,%.17g\n",
                  e[0], e[1], e[2], e[3], e[4], e[5], c);
    out += buf;
  }
  return out;
}

std::string MultiPoly::to_text() const {
  if (terms_.empty()) return "0";
  static const char* names[6] = {"u", "v", "w", "px", "py", "pz"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c >= 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    for (std::size_t k = 0; k < 6; ++k) {
      if (e[k] == 0) continue;
      os << "*" << names[k];
      if (e[k] > 1) os << "^" << static_cast<int>(e[k]);
    }
  }
  return os.str();
}

}  // namespace pentasing
