#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/errors.hpp"
#include "posgraph/graph.hpp"

using namespace posgraph;

TEST_CASE("graph6 decodes the small named graphs") {
  const SimpleGraph k2 = parse_graph6("A_");
  CHECK(k2.order() == 2);
  CHECK(k2.edge_count() == 1);

  CHECK(parse_graph6("Bw") == complete_graph(3));

  const SimpleGraph e2 = parse_graph6("A?");
  CHECK(e2.order() == 2);
  CHECK(e2.edge_count() == 0);
}

TEST_CASE("graph6 encodes the small named graphs") {
  CHECK(write_graph6(complete_graph(2)) == "A_");
  CHECK(write_graph6(complete_graph(3)) == "Bw");
  CHECK(write_graph6(SimpleGraph(1)) == "@");
}

TEST_CASE("graph6 writer agrees with an independent encoder") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 16;
    const SimpleGraph g = oracle::random_graph(rng, n, 0.4);
    const std::string text = write_graph6(g);
    CHECK(text == oracle::graph6_encode(g));
    CHECK(parse_graph6(text) == g);
  }
}

TEST_CASE("graph6 round trip on every graph up to 7 vertices") {
  for (int n = 1; n <= 7; ++n) {
    for (const SimpleGraph& g : enumerate_graphs(n)) REQUIRE(parse_graph6(write_graph6(g)) == g);
  }
}

TEST_CASE("graph6 rejects malformed lines") {
  CHECK_THROWS_AS(parse_graph6(">>graph6<<A_"), ParseError);
  CHECK_THROWS_AS(parse_graph6(""), ParseError);
  CHECK_THROWS_AS(parse_graph6("A"), ParseError);       // missing body byte
  CHECK_THROWS_AS(parse_graph6("A_?"), ParseError);     // trailing byte
  CHECK_THROWS_AS(parse_graph6("A "), ParseError);      // byte below 63
  CHECK_THROWS_AS(parse_graph6("A`"), ParseError);      // nonzero padding bit
  CHECK_THROWS_AS(parse_graph6("?"), ParseError);       // order 0
  CHECK_THROWS_AS(parse_graph6("Q???????????????????????????"), ParseError);  // order 18
  CHECK_THROWS_AS(parse_graph6("~?@A"), ParseError);
  try {
    parse_graph6("A ");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 1);
  }
}

TEST_CASE("disjoint union and power") {
  const SimpleGraph two_k2 = disjoint_union(complete_graph(2), complete_graph(2));
  CHECK(two_k2.order() == 4);
  CHECK(two_k2.edge_count() == 2);

  const SimpleGraph k3k3 = power(complete_graph(3), 2);
  CHECK(k3k3.order() == 6);
  CHECK(k3k3.edge_count() == 6);

  const SimpleGraph c5 = cycle_graph(5);
  CHECK(power(c5, 1) == c5);
  CHECK_THROWS_AS(power(complete_graph(9), 2), CapExceeded);
  CHECK_THROWS_AS(power(c5, 0), std::invalid_argument);
}

TEST_CASE("categorical products") {
  const SimpleGraph k2 = complete_graph(2);
  const SimpleGraph prod = categorical_product(k2, k2);
  CHECK(prod.order() == 4);
  CHECK(prod.edge_count() == 2);
  CHECK(are_isomorphic(prod, power(k2, 2)));

  const LoopedGraph k2_loops = LoopedGraph::with_all_loops(k2);
  const LoopedGraph looped = categorical_product(k2_loops, LoopedGraph::from_simple(k2));
  CHECK_FALSE(looped.has_loops());
  CHECK(are_isomorphic(looped.to_simple(), cycle_graph(4)));

  // Loop-free factor kills every loop.
  const LoopedGraph mixed = categorical_product(LoopedGraph::from_simple(path_graph(3)), k2_loops);
  CHECK_FALSE(mixed.has_loops());
  CHECK_THROWS_AS(k2_loops.to_simple(), std::invalid_argument);
}

TEST_CASE("categorical product of loop-free graphs has 2|E1||E2| edges") {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> order(1, 4);
    const SimpleGraph a = oracle::random_graph(rng, order(rng), 0.5);
    const SimpleGraph b = oracle::random_graph(rng, order(rng), 0.5);
    const SimpleGraph p = categorical_product(a, b);
    CHECK(p.order() == a.order() * b.order());
    CHECK(p.edge_count() == 2 * a.edge_count() * b.edge_count());
    for (int i1 = 0; i1 < a.order(); ++i1) {
      for (int i2 = 0; i2 < b.order(); ++i2) {
        for (int j1 = 0; j1 < a.order(); ++j1) {
          for (int j2 = 0; j2 < b.order(); ++j2) {
            const int u = i1 * b.order() + i2;
            const int v = j1 * b.order() + j2;
            CHECK(p.adjacent(u, v) == (a.adjacent(i1, j1) && b.adjacent(i2, j2)));
          }
        }
      }
    }
  }
}

TEST_CASE("weighted categorical product multiplies entries") {
  const WeightedGraph a = WeightedGraph::from_matrix(2, {Rational(1), Rational(-2), Rational(-2), Rational(3)});
  const WeightedGraph b = WeightedGraph::from_matrix(2, {Rational(0), Rational(1, 2), Rational(1, 2), Rational(5)});
  const WeightedGraph p = categorical_product(a, b);
  REQUIRE(p.order() == 4);
  for (int i1 = 0; i1 < 2; ++i1) {
    for (int i2 = 0; i2 < 2; ++i2) {
      for (int j1 = 0; j1 < 2; ++j1) {
        for (int j2 = 0; j2 < 2; ++j2) CHECK(p.at(i1 * 2 + i2, j1 * 2 + j2) == a.at(i1, j1) * b.at(i2, j2));
      }
    }
  }
  CHECK_THROWS_AS(categorical_product(a, b, 3), CapExceeded);
}

TEST_CASE("blow-up") {
  CHECK(are_isomorphic(blow_up(complete_graph(2), 2), complete_bipartite(2, 2)));
  const SimpleGraph p3 = path_graph(3);
  CHECK(blow_up(p3, 1) == p3);
  const SimpleGraph b = blow_up(p3, 2);
  CHECK(b.order() == 6);
  CHECK(b.edge_count() == 8);

  oracle::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const SimpleGraph g = oracle::random_graph(rng, 4, 0.5);
    for (int r = 1; r <= 3; ++r) {
      const LoopedGraph kr = LoopedGraph::with_all_loops(complete_graph(r));
      CHECK(blow_up(g, r) == categorical_product(kr, LoopedGraph::from_simple(g)).to_simple());
    }
  }
  CHECK_THROWS_AS(blow_up(complete_graph(9), 2), CapExceeded);
}

TEST_CASE("odd multiplicity reduction") {
  const SimpleGraph k3 = complete_graph(3);
  const SimpleGraph p3 = path_graph(3);
  CHECK(odd_multiplicity_reduction(disjoint_union(k3, k3)).empty());

  const auto r = odd_multiplicity_reduction(disjoint_union(disjoint_union(k3, p3), k3));
  REQUIRE(r.size() == 1);
  CHECK(are_isomorphic(r[0], p3));

  const SimpleGraph c5 = cycle_graph(5);
  const auto single = odd_multiplicity_reduction(c5);
  REQUIRE(single.size() == 1);
  CHECK(are_isomorphic(single[0], c5));
}

TEST_CASE("odd multiplicity reduction is idempotent and permutation invariant") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const SimpleGraph g = oracle::random_graph(rng, 9, 0.15);
    const auto r = odd_multiplicity_reduction(g);
    std::vector<std::string> keys;
    for (const auto& c : r) keys.push_back(canonical_key(c));

    const auto perm = oracle::random_permutation(rng, g.order());
    std::vector<std::string> relabeled;
    for (const auto& c : odd_multiplicity_reduction(relabel(g, perm))) relabeled.push_back(canonical_key(c));
    CHECK(keys == relabeled);

    for (const auto& c : r) {
      const auto again = odd_multiplicity_reduction(c);
      REQUIRE(again.size() == 1);
      CHECK(canonical_key(again[0]) == canonical_key(c));
    }
  }
}

TEST_CASE("components") {
  const SimpleGraph g = disjoint_union(disjoint_union(path_graph(2), SimpleGraph(1)), cycle_graph(3));
  const auto masks = component_masks(g);
  REQUIRE(masks.size() == 3);
  CHECK(masks[0] == 0b000011U);
  CHECK(masks[1] == 0b000100U);
  CHECK(masks[2] == 0b111000U);
  CHECK_FALSE(is_connected(g));
  CHECK(is_connected(cycle_graph(6)));
  CHECK(is_tree(star_graph(4)));
  CHECK_FALSE(is_tree(cycle_graph(4)));
  CHECK_FALSE(is_tree(power(path_graph(2), 2)));
}

TEST_CASE("induced subgraphs") {
  const SimpleGraph c5 = cycle_graph(5);
  CHECK(are_isomorphic(induced_subgraph(c5, all_vertices(5) & ~bit(2)), path_graph(4)));
  CHECK(induced_subgraph(c5, all_vertices(5)) == c5);
  const SimpleGraph ind = induced_subgraph(c5, bit(0) | bit(2));
  CHECK(ind.order() == 2);
  CHECK(ind.edge_count() == 0);
  CHECK_THROWS_AS(induced_subgraph(c5, 0), std::invalid_argument);
}

TEST_CASE("named families") {
  CHECK(complete_graph(5).edge_count() == 10);
  CHECK(path_graph(5).edge_count() == 4);
  CHECK(cycle_graph(7).edge_count() == 7);
  CHECK(star_graph(3).order() == 4);
  CHECK(star_graph(3).edge_count() == 3);
  CHECK(complete_bipartite(2, 3).edge_count() == 6);
  CHECK(edgeless_graph(4).edge_count() == 0);
}

TEST_CASE("relabel preserves structure") {
  oracle::Rng rng(3);
  const SimpleGraph g = oracle::random_graph(rng, 8, 0.5);
  const auto perm = oracle::random_permutation(rng, 8);
  const SimpleGraph h = relabel(g, perm);
  for (int u = 0; u < 8; ++u) {
    for (int v = 0; v < 8; ++v) CHECK(g.adjacent(u, v) == h.adjacent(perm[u], perm[v]));
  }
}

TEST_CASE("weighted graph construction") {
  CHECK_THROWS_AS(WeightedGraph::from_matrix(2, {Rational(1), Rational(2), Rational(3), Rational(4)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightedGraph::from_matrix(2, {Rational(1)}), std::invalid_argument);
  WeightedGraph h(3);
  h.set(0, 2, Rational(-1, 3));
  CHECK(h.at(2, 0) == Rational(-1, 3));
  CHECK(h.at(1, 1) == 0);
  CHECK_THROWS_AS(SimpleGraph(0), std::invalid_argument);
  CHECK_THROWS_AS(SimpleGraph(17), std::invalid_argument);
  SimpleGraph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
}

TEST_CASE("rationals") {
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("7") == 7);
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK(to_string(Rational(-1, 3)) == "-1/3");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/"), ParseError);
  CHECK(round_to_denominator(0.26, 4) == Rational(1, 4));
  CHECK(round_to_denominator(-0.26, 4) == Rational(-1, 4));
}
