#include "pentasing/brackets.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace pentasing {

ArchColumns ArchColumns::from_design(const CanonicalDesign& d) {
  ArchColumns c{};
  for (int j = 0; j < 4; ++j) {
    const Vec3& M = d.design.base[j + 1];
    const double r = d.design.platform[j + 1];
    c.col[R][j] = r;
    c.col[X][j] = M[0];
    c.col[Y][j] = M[1];
    c.col[Z][j] = M[2];
    c.col[RX][j] = r * M[0];
    c.col[RY][j] = r * M[1];
    c.col[RZ][j] = r * M[2];
  }
  return c;
}

const char* ArchColumns::name(int id) {
  static const char* names[7] = {"r", "X", "Y", "Z", "rX", "rY", "rZ"};
  return names[id];
}

double bracket(int a, int b, int c, int d, const ArchColumns& cols) {
  int id[4] = {a, b, c, d};
  for (int k : id)
    if (k < 0 || k > 6) throw error("bracket: column id out of range");
  // sort ids, tracking permutation parity, so antisymmetry and the vanishing
  // on repeated arguments are exact
  double sign = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3 - i; ++j)
      if (id[j] > id[j + 1]) {
        std::swap(id[j], id[j + 1]);
        sign = -sign;
      }
  if (id[0] == id[1] || id[1] == id[2] || id[2] == id[3]) return 0.0;

  const auto& m = cols.col;
  double det = 0.0;
  // cofactor expansion along the first row of the 4x4 (columns id[0..3])
  for (int i = 0; i < 4; ++i) {
    int rr[3], q = 0;
    for (int k = 0; k < 4; ++k)
      if (k != i) rr[q++] = k;
    const double minor3 =
        m[id[1]][rr[0]] * (m[id[2]][rr[1]] * m[id[3]][rr[2]] -
                           m[id[2]][rr[2]] * m[id[3]][rr[1]]) -
        m[id[1]][rr[1]] * (m[id[2]][rr[0]] * m[id[3]][rr[2]] -
                           m[id[2]][rr[2]] * m[id[3]][rr[0]]) +
        m[id[1]][rr[2]] * (m[id[2]][rr[0]] * m[id[3]][rr[1]] -
                           m[id[2]][rr[1]] * m[id[3]][rr[0]]);
    det += ((i % 2 == 0) ? 1.0 : -1.0) * m[id[0]][i] * minor3;
  }
  return sign * det;
}

namespace {

Eigen::Matrix<double, 4, 7> as_matrix(const ArchColumns& cols) {
  Eigen::Matrix<double, 4, 7> A;
  for (int c = 0; c < 7; ++c)
    for (int r = 0; r < 4; ++r) A(r, c) = cols.col[c][r];
  return A;
}

}  // namespace

int architecture_rank(const ArchColumns& cols, double tol) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 7>> svd(as_matrix(cols));
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rank;
  return rank;
}

ArchVerdict architecture_verdict(const CanonicalDesign& d, double tol) {
  const ArchColumns cols = ArchColumns::from_design(d);
  ArchVerdict v;
  v.rank = architecture_rank(cols, tol);
  if (v.rank < 4) {
    v.status = ArchStatus::RankDeficient;
    v.witness = "architecture matrix rank " + std::to_string(v.rank);
    return v;
  }

  const auto& base = d.design.base;
  const auto& plat = d.design.platform;
  const double rtol = 1e-9 * std::max(1.0, d.design.platform_diameter());
  const double btol = 1e-9 * std::max(1.0, d.design.base_diameter());
  auto same_platform = [&](int i, int j) {
    return std::abs(plat[i] - plat[j]) < rtol;
  };
  auto same_base = [&](int i, int j) { return norm(base[i] - base[j]) < btol; };

  // triple coincident platform points with the remaining two base points
  // coincident; takes precedence over the quad pattern below
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = j + 1; k < 5; ++k) {
        if (!(same_platform(i, j) && same_platform(j, k))) continue;
        int rest[2], q = 0;
        for (int l = 0; l < 5; ++l)
          if (l != i && l != j && l != k) rest[q++] = l;
        if (same_base(rest[0], rest[1])) {
          v.status = ArchStatus::ExceptionalTripleCoincidence;
          v.witness = "platform points of legs " + std::to_string(i + 1) + "," +
                      std::to_string(j + 1) + "," + std::to_string(k + 1) +
                      " coincide and base points of legs " +
                      std::to_string(rest[0] + 1) + "," +
                      std::to_string(rest[1] + 1) + " coincide";
          return v;
        }
      }

  // four coincident platform points
  for (int skip = 0; skip < 5; ++skip) {
    bool all = true;
    int first = skip == 0 ? 1 : 0;
    for (int l = 0; l < 5; ++l)
      if (l != skip && l != first && !same_platform(first, l)) all = false;
    if (all) {
      v.status = ArchStatus::ExceptionalQuadCoincidence;
      v.witness = "four coincident platform points (all legs but " +
                  std::to_string(skip + 1) + ")";
      return v;
    }
  }

  v.status = ArchStatus::NotArchSingular;
  v.witness = "full rank, no exceptional coincidence pattern";
  return v;
}

std::optional<std::array<double, 4>> coplanarity_witness(const ArchColumns& cols,
                                                         double tol) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 7>> svd(
      as_matrix(cols), Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(0) > 0.0 && s(i) > tol * s(0)) ++rank;
  if (rank >= 4) return std::nullopt;
  const auto u = svd.matrixU().col(3);
  return std::array<double, 4>{u(0), u(1), u(2), u(3)};
}

}  // namespace pentasing
