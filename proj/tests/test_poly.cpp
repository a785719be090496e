#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "pentasing/poly.hpp"

using namespace pentasing;

namespace {

std::array<double, 6> random_point(std::mt19937_64& g) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  return {d(g), d(g), d(g), d(g), d(g), d(g)};
}

// p = 3 u^2 pz - 1.5 v w + 7
MultiPoly sample_poly() {
  MultiPoly p;
  p.add_term({2, 0, 0, 0, 0, 1}, 3.0);
  p.add_term({0, 1, 1, 0, 0, 0}, -1.5);
  p.add_term({0, 0, 0, 0, 0, 0}, 7.0);
  return p;
}

}  // namespace

TEST_CASE("constant and variable constructors evaluate as expected") {
  const MultiPoly c = MultiPoly::constant(4.25);
  CHECK(c.is_constant());
  CHECK(c.constant_value() == 4.25);
  CHECK(c.total_degree() == 0);

  const MultiPoly u = MultiPoly::variable(MultiPoly::U);
  CHECK(u.total_degree() == 1);
  CHECK(u.evaluate({3, 0, 0, 0, 0, 0}) == 3.0);

  const MultiPoly zero;
  CHECK(zero.is_zero());
  CHECK(zero.total_degree() == -1);  // degree of the zero polynomial
}

TEST_CASE("arithmetic commutes with evaluation on random points") {
  auto g = std::mt19937_64{7};
  const MultiPoly a = sample_poly();
  MultiPoly b = MultiPoly::variable(MultiPoly::PX) * MultiPoly::variable(MultiPoly::V);
  b = b + MultiPoly::constant(-2.0);

  for (int k = 0; k < 200; ++k) {
    const auto x = random_point(g);
    const double av = a.evaluate(x);
    const double bv = b.evaluate(x);
    CHECK((a + b).evaluate(x) == doctest::Approx(av + bv).epsilon(1e-12));
    CHECK((a - b).evaluate(x) == doctest::Approx(av - bv).epsilon(1e-12));
    CHECK((a * b).evaluate(x) == doctest::Approx(av * bv).epsilon(1e-12));
    const MultiPoly s = 0.5 * a;
    CHECK(s.evaluate(x) == doctest::Approx(0.5 * av).epsilon(1e-14));
  }
}

TEST_CASE("degree bookkeeping splits orientation and position") {
  const MultiPoly p = sample_poly();
  CHECK(p.total_degree() == 3);
  CHECK(p.orientation_degree() == 2);
  CHECK(p.position_degree() == 1);
  CHECK(p.degree_in(MultiPoly::U) == 2);
  CHECK(p.degree_in(MultiPoly::PZ) == 1);
  CHECK(p.degree_in(MultiPoly::PY) == 0);
  CHECK(p.term_count() == 3);
}

TEST_CASE("derivative matches central finite differences") {
  auto g = std::mt19937_64{11};
  const MultiPoly p = sample_poly() * sample_poly();
  for (int var = 0; var < 6; ++var) {
    const MultiPoly dp = p.derivative(static_cast<MultiPoly::Var>(var));
    for (int k = 0; k < 50; ++k) {
      auto x = random_point(g);
      const double h = 1e-6;
      auto xp = x, xm = x;
      xp[static_cast<std::size_t>(var)] += h;
      xm[static_cast<std::size_t>(var)] -= h;
      const double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
      CHECK(dp.evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("substitute freezes chosen variables") {
  auto g = std::mt19937_64{13};
  const MultiPoly p = sample_poly();
  // freeze u and pz
  const std::array<bool, 6> fixed{true, false, false, false, false, true};
  const MultiPoly q = p.substitute(fixed, {0.5, 0, 0, 0, 0, -2.0});
  CHECK(q.degree_in(MultiPoly::U) == 0);
  CHECK(q.degree_in(MultiPoly::PZ) == 0);
  for (int k = 0; k < 100; ++k) {
    auto x = random_point(g);
    auto y = x;
    y[MultiPoly::U] = 0.5;
    y[MultiPoly::PZ] = -2.0;
    CHECK(q.evaluate(x) == doctest::Approx(p.evaluate(y)).epsilon(1e-12));
  }
}

TEST_CASE("pruning removes relative noise without touching real terms") {
  MultiPoly p;
  p.add_term({1, 0, 0, 0, 0, 0}, 1e3);
  p.add_term({0, 1, 0, 0, 0, 0}, 1e-13);  // 1e-16 relative: noise
  p.add_term({0, 0, 1, 0, 0, 0}, 1e-9);   // 1e-12 relative: keep at 1e-14
  const MultiPoly q = p.pruned(1e-14);
  CHECK(q.term_count() == 2);
  CHECK(q.degree_in(MultiPoly::V) == 0);
  CHECK(q.degree_in(MultiPoly::W) == 1);

  // cancellation that only pruning can clean up
  const MultiPoly a = sample_poly();
  const MultiPoly diff = (a + a) - a - a;
  CHECK(diff.pruned(1e-14).is_zero());
}

TEST_CASE("coefficient access and max_abs_coeff") {
  const MultiPoly p = sample_poly();
  CHECK(p.coeff({2, 0, 0, 0, 0, 1}) == 3.0);
  CHECK(p.coeff({0, 1, 1, 0, 0, 0}) == -1.5);
  CHECK(p.coeff({1, 1, 1, 1, 1, 1}) == 0.0);
  CHECK(p.max_abs_coeff() == 7.0);
}

TEST_CASE("eval_scale bounds the evaluation magnitude") {
  auto g = std::mt19937_64{17};
  const MultiPoly p = sample_poly();
  for (int k = 0; k < 200; ++k) {
    const auto x = random_point(g);
    CHECK(std::abs(p.evaluate(x)) <= p.eval_scale(x) * (1 + 1e-12));
    CHECK(p.eval_scale(x) >= 0.0);
  }
}

TEST_CASE("csv export is sorted by exponent tuple and round-trips values") {
  const MultiPoly p = sample_poly();
  const std::string csv = p.to_csv();
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line.find("coefficient") != std::string::npos);  // header row
  std::vector<std::array<int, 7>> rows;
  while (std::getline(in, line)) {
    std::array<int, 7> row{};
    double coeff = 0;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    for (int i = 0; i < 6; ++i) ls >> row[static_cast<std::size_t>(i)];
    ls >> coeff;
    row[6] = static_cast<int>(coeff);
    rows.push_back(row);
  }
  REQUIRE(rows.size() == 3);
  // lexicographic ascending by exponent tuple
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto a = std::array<int, 6>{rows[i - 1][0], rows[i - 1][1], rows[i - 1][2],
                                      rows[i - 1][3], rows[i - 1][4], rows[i - 1][5]};
    const auto b = std::array<int, 6>{rows[i][0], rows[i][1], rows[i][2],
                                      rows[i][3], rows[i][4], rows[i][5]};
    CHECK(a < b);
  }
  CHECK(!p.to_text().empty());
}

TEST_CASE("terms_with_* selectors partition the polynomial") {
  auto g = std::mt19937_64{23};
  const MultiPoly p = sample_poly();
  const MultiPoly pos1 = p.terms_with_position_degree(1);
  const MultiPoly pos0 = p.terms_with_position_degree(0);
  for (int k = 0; k < 50; ++k) {
    const auto x = random_point(g);
    CHECK(pos1.evaluate(x) + pos0.evaluate(x) ==
          doctest::Approx(p.evaluate(x)).epsilon(1e-13));
  }
  const MultiPoly o2 = p.terms_with_orientation_degree(2);
  CHECK(o2.term_count() == 2);  // 3 u^2 pz and -1.5 v w
  const MultiPoly t3 = p.terms_with_total_degree(3);
  CHECK(t3.term_count() == 1);
}
