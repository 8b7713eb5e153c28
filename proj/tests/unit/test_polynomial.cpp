#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/errors.hpp"
#include "posgraph/polynomial.hpp"

using namespace posgraph;

namespace {

// Coefficient per variable pair for polynomials of degree 1.
std::map<std::pair<int, int>, std::int64_t> linear_terms(const HomPolynomial& p) {
  std::map<std::pair<int, int>, std::int64_t> out;
  for (const auto& t : p.terms()) {
    for (std::size_t v = 0; v < t.exponents.size(); ++v) {
      if (t.exponents[v] == 1) out[{p.variables()[v].i, p.variables()[v].j}] += t.coefficient;
    }
  }
  return out;
}

WeightedGraph matrix_from_digits(int m, int code) {
  // Base-3 digits of `code` mapped to {-1, 0, 1}, one per upper-triangle cell.
  WeightedGraph h(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      h.set(i, j, Rational(code % 3 - 1));
      code /= 3;
    }
  }
  return h;
}

}  // namespace

TEST_CASE("K2 polynomials") {
  const HomPolynomial p1 = hom_polynomial(complete_graph(2), 1);
  CHECK(p1.degree() == 1);
  CHECK(linear_terms(p1) == std::map<std::pair<int, int>, std::int64_t>{{{0, 0}, 1}});

  const HomPolynomial p2 = hom_polynomial(complete_graph(2), 2);
  CHECK(p2.degree() == 1);
  CHECK(linear_terms(p2) == std::map<std::pair<int, int>, std::int64_t>{{{0, 0}, 1}, {{0, 1}, 2}, {{1, 1}, 1}});

  WeightedGraph ones(2);
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) ones.set(i, j, 1);
  }
  CHECK(p2.evaluate(ones) == 4);
}

TEST_CASE("zero matrix gives zero for graphs with edges") {
  for (const SimpleGraph& g : enumerate_graphs(4)) {
    const HomPolynomial p = hom_polynomial(g, 3);
    if (g.edge_count() == 0) {
      CHECK(p.is_constant());
      CHECK(p.evaluate(WeightedGraph(3)) == 81);
    } else {
      CHECK(p.degree() == g.edge_count());
      CHECK(p.evaluate(WeightedGraph(3)) == 0);
    }
  }
}

TEST_CASE("evaluation at 0/+-1 matrices equals hom_count for every graph up to 4 vertices") {
  for (int n = 1; n <= 4; ++n) {
    for (const SimpleGraph& g : enumerate_graphs(n)) {
      for (int m = 1; m <= 3; ++m) {
        const HomPolynomial p = hom_polynomial(g, m);
        int cells = m * (m + 1) / 2;
        int total = 1;
        for (int k = 0; k < cells; ++k) total *= 3;
        for (int code = 0; code < total; ++code) {
          const WeightedGraph h = matrix_from_digits(m, code);
          REQUIRE(p.evaluate(h) == hom_count(g, h));
        }
      }
    }
  }
}

TEST_CASE("evaluation at rational points equals hom_count, unrestricted and restricted") {
  oracle::Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const SimpleGraph g = oracle::random_graph(rng, 6, 0.5);
    const WeightedGraph h = oracle::random_target(rng, 3, oracle::small_rationals());
    CHECK(hom_polynomial(g, 3).evaluate(h) == hom_count(g, h));

    BlockConstraint blocks;
    for (int v = 0; v < 6; ++v) blocks.allowed.push_back(v % 2 == 0 ? std::vector<int>{0, 1} : std::vector<int>{2});
    const HomPolynomial pr = hom_polynomial(g, 3, blocks);
    CHECK(pr.evaluate(h) == hom_count_restricted(g, h, blocks));
  }
}

TEST_CASE("restricted polynomials only carry touched pairs") {
  const SimpleGraph p3 = path_graph(3);
  BlockConstraint blocks;
  blocks.allowed = {{0}, {1}, {0}};
  const HomPolynomial p = hom_polynomial(p3, 2, blocks);
  REQUIRE(p.variable_count() == 1);
  CHECK(p.variables()[0] == VarPair{0, 1});
  REQUIRE(p.terms().size() == 1);
  CHECK(p.terms()[0].coefficient == 1);
  CHECK(p.terms()[0].exponents[0] == 2);
}

TEST_CASE("gradient agrees with central finite differences") {
  oracle::Rng rng(7);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SimpleGraph g = oracle::random_graph(rng, 5, 0.5);
    if (g.edge_count() == 0) continue;
    const HomPolynomial p = hom_polynomial(g, 3);
    std::vector<double> x(p.variable_count());
    for (double& xi : x) xi = coord(rng);
    std::vector<double> grad(x.size());
    const double value = p.value_and_gradient(x, grad);
    CHECK(value == doctest::Approx(p.value(x)));
    double scale = 1;
    for (double gi : grad) scale = std::max(scale, std::abs(gi));
    const double h = 1e-5;
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto up = x;
      auto down = x;
      up[i] += h;
      down[i] -= h;
      const double fd = (p.value(up) - p.value(down)) / (2 * h);
      CHECK(std::abs(fd - grad[i]) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("double evaluation agrees with exact evaluation") {
  oracle::Rng rng(70);
  const SimpleGraph g = oracle::random_graph(rng, 6, 0.6);
  const HomPolynomial p = hom_polynomial(g, 3);
  std::vector<Rational> exact;
  std::vector<double> approx;
  for (std::size_t i = 0; i < p.variable_count(); ++i) {
    exact.emplace_back(static_cast<long>(i % 5) - 2, 3);
    approx.push_back(exact.back().get_d());
  }
  CHECK(p.value(approx) == doctest::Approx(p.evaluate(exact).get_d()).epsilon(1e-9));
}

TEST_CASE("serialize and parse round trip") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const SimpleGraph g = oracle::random_graph(rng, 5, 0.5);
    const HomPolynomial p = hom_polynomial(g, 3);
    const HomPolynomial q = HomPolynomial::parse(p.serialize());
    CHECK(q.serialize() == p.serialize());
    CHECK(q.variables() == p.variables());
    const WeightedGraph h = oracle::random_target(rng, 3, oracle::small_rationals());
    CHECK(q.evaluate(h) == p.evaluate(h));
  }
  CHECK_THROWS_AS(HomPolynomial::parse("nonsense"), ParseError);
  CHECK_THROWS_AS(HomPolynomial::parse("vars 0-1\n1 1\n"), ParseError);
}

TEST_CASE("to_target places values on the variables") {
  const HomPolynomial p = hom_polynomial(complete_graph(2), 2);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < p.variable_count(); ++i) values.emplace_back(static_cast<long>(i + 1));
  const WeightedGraph h = p.to_target(values);
  for (std::size_t i = 0; i < p.variable_count(); ++i) {
    CHECK(h.at(p.variables()[i].i, p.variables()[i].j) == values[i]);
    CHECK(h.at(p.variables()[i].j, p.variables()[i].i) == values[i]);
  }
  CHECK(p.evaluate(values) == hom_count(complete_graph(2), h));
}

TEST_CASE("map cap") {
  CHECK_THROWS_AS(hom_polynomial(complete_graph(12), 6, {}, 1.0e6), CapExceeded);
  CHECK_THROWS_AS(hom_polynomial(complete_graph(3), 0), std::invalid_argument);
}
