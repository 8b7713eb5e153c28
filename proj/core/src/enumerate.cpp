#include "posgraph/enumerate.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "posgraph/canonical.hpp"
#include "posgraph/errors.hpp"

namespace posgraph {

namespace {

SimpleGraph add_vertex(const SimpleGraph& g, VertexMask neighbours) {
  SimpleGraph out(g.order() + 1);
  for (auto [u, v] : g.edges()) out.add_edge(u, v);
  for (int v = 0; v < g.order(); ++v) {
    if (neighbours & bit(v)) out.add_edge(v, g.order());
  }
  return out;
}

std::vector<SimpleGraph> parse_all(const std::vector<std::string>& keys) {
  std::vector<SimpleGraph> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back(parse_graph6(k));
  return out;
}

}  // namespace

std::vector<std::string> extend_by_vertex(std::span<const SimpleGraph> reps) {
  std::unordered_set<std::string> seen;
  for (const SimpleGraph& g : reps) {
    if (g.order() >= kMaxVertices) throw CapExceeded("extend_by_vertex beyond 16 vertices", g.order() + 1);
    const VertexMask limit = bit(g.order());
    for (VertexMask nb = 0; nb < limit; ++nb) seen.insert(canonical_key(add_vertex(g, nb)));
  }
  std::vector<std::string> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SimpleGraph> enumerate_graphs(int n) {
  if (n < 1 || n > 7) {
    throw std::invalid_argument("built-in enumeration supports 1..7 vertices; use fixture files for larger orders");
  }
  std::vector<SimpleGraph> level{SimpleGraph(1)};
  for (int k = 1; k < n; ++k) level = parse_all(extend_by_vertex(level));
  return level;
}

std::vector<SimpleGraph> enumerate_trees(int n) {
  if (n < 1 || n > kMaxVertices) throw std::invalid_argument("tree order outside 1..16");
  std::vector<SimpleGraph> level{SimpleGraph(1)};
  for (int k = 1; k < n; ++k) {
    std::set<std::string> next;
    for (const SimpleGraph& t : level) {
      for (int v = 0; v < t.order(); ++v) next.insert(canonical_key(add_vertex(t, bit(v))));
    }
    level = parse_all(std::vector<std::string>(next.begin(), next.end()));
  }
  return level;
}

void read_graph6_stream(std::istream& in, const std::function<void(std::size_t, const SimpleGraph&)>& sink,
                        const std::function<void(std::size_t, const std::string&)>& bad) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      sink(number, parse_graph6(line));
    } catch (const ParseError& e) {
      bad(number, e.what());
    }
  }
}

std::vector<SimpleGraph> read_graph6_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<SimpleGraph> out;
  read_graph6_stream(
      in, [&](std::size_t, const SimpleGraph& g) { out.push_back(g); },
      [&](std::size_t line, const std::string& err) {
        throw std::runtime_error(path + ":" + std::to_string(line) + ": " + err);
      });
  return out;
}

}  // namespace posgraph
