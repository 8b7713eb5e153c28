#include <doctest.h>

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"

using namespace posgraph;

namespace {
// Graphs on n vertices, n = 1..9.
constexpr std::size_t kGraphCounts[] = {0, 1, 2, 4, 11, 34, 156, 1044, 12346, 274668};
}  // namespace

TEST_CASE("class counts for small orders") {
  CHECK(enumerate_graphs(3).size() == 4);
  CHECK(enumerate_graphs(4).size() == 11);
  CHECK(enumerate_graphs(7).size() == 1044);
  for (int n = 1; n <= 7; ++n) CHECK(enumerate_graphs(n).size() == kGraphCounts[n]);
  CHECK_THROWS_AS(enumerate_graphs(8), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_graphs(0), std::invalid_argument);
}

TEST_CASE("enumeration matches the brute-force class count up to 6 vertices") {
  for (int n = 1; n <= 6; ++n) CHECK(enumerate_graphs(n).size() == oracle::iso_class_count(n));
}

TEST_CASE("enumerated graphs are canonical, sorted and cover every class") {
  for (int n = 1; n <= 6; ++n) {
    const auto graphs = enumerate_graphs(n);
    std::vector<std::string> keys;
    for (const auto& g : graphs) {
      CHECK(g.order() == n);
      CHECK(write_graph6(g) == canonical_key(g));
      keys.push_back(write_graph6(g));
    }
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    std::set<std::string> all;
    for (const auto& g : oracle::all_labeled_graphs(n)) all.insert(canonical_key(g));
    CHECK(std::vector<std::string>(all.begin(), all.end()) == keys);
  }
}

TEST_CASE("vertex extension reproduces the next order") {
  for (int n = 1; n <= 6; ++n) {
    std::vector<std::string> expected;
    for (const auto& g : enumerate_graphs(n + 1)) expected.push_back(write_graph6(g));
    CHECK(extend_by_vertex(enumerate_graphs(n)) == expected);
  }
}

TEST_CASE("fixture files hold every class exactly once") {
  for (int n = 2; n <= 8; ++n) {
    const std::string name = "graphs_n" + std::to_string(n) + ".g6";
    REQUIRE(fixture::exists(name));
    const auto graphs = read_graph6_file(fixture::path(name));
    CHECK(graphs.size() == kGraphCounts[n]);
    std::set<std::string> keys;
    for (const auto& g : graphs) {
      CHECK(g.order() == n);
      keys.insert(canonical_key(g));
    }
    CHECK(keys.size() == graphs.size());
  }
}

TEST_CASE("fixture files up to 7 vertices agree with the built-in enumeration") {
  for (int n = 2; n <= 7; ++n) {
    std::set<std::string> fixture_keys;
    for (const auto& g : read_graph6_file(fixture::path("graphs_n" + std::to_string(n) + ".g6"))) {
      fixture_keys.insert(canonical_key(g));
    }
    std::set<std::string> built;
    for (const auto& g : enumerate_graphs(n)) built.insert(write_graph6(g));
    CHECK(fixture_keys == built);
  }
}

TEST_CASE("tree counts") {
  constexpr std::size_t kTrees[] = {0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301};
  for (int n = 1; n <= 13; ++n) {
    const auto trees = enumerate_trees(n);
    CHECK(trees.size() == kTrees[n]);
    std::set<std::string> keys;
    for (const auto& t : trees) {
      CHECK(is_tree(t));
      CHECK(t.order() == n);
      keys.insert(canonical_key(t));
    }
    CHECK(keys.size() == trees.size());
  }
}

TEST_CASE("trees agree with filtering the full enumeration") {
  for (int n = 1; n <= 7; ++n) {
    std::set<std::string> filtered;
    for (const auto& g : enumerate_graphs(n)) {
      if (is_tree(g)) filtered.insert(write_graph6(g));
    }
    std::set<std::string> trees;
    for (const auto& t : enumerate_trees(n)) trees.insert(canonical_key(t));
    CHECK(trees == filtered);
  }
}

TEST_CASE("graph6 stream reports malformed lines and keeps going") {
  std::istringstream in("A_\n\n>>graph6<<\nBw\nA\nC~\r\nzz\n");
  std::vector<std::pair<std::size_t, std::string>> good;
  std::vector<std::size_t> bad;
  read_graph6_stream(
      in, [&](std::size_t line, const SimpleGraph& g) { good.emplace_back(line, write_graph6(g)); },
      [&](std::size_t line, const std::string&) { bad.push_back(line); });
  REQUIRE(good.size() == 3);
  CHECK(good[0] == std::pair<std::size_t, std::string>{1, "A_"});
  CHECK(good[1] == std::pair<std::size_t, std::string>{4, "Bw"});
  CHECK(good[2] == std::pair<std::size_t, std::string>{6, "C~"});
  CHECK(bad == std::vector<std::size_t>{3, 5, 7});
}

TEST_CASE("missing fixture file is an error") {
  CHECK_THROWS(read_graph6_file(fixture::path("no_such_file.g6")));
}
