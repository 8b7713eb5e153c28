#include "posgraph/graph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

#include "posgraph/canonical.hpp"
#include "posgraph/errors.hpp"

namespace posgraph {

namespace {

void check_order(int n) {
  if (n < 1 || n > kMaxVertices) {
    throw std::invalid_argument("vertex count " + std::to_string(n) + " outside 1..16");
  }
}

void check_result_order(long n, const char* op) {
  if (n > kMaxVertices) {
    throw CapExceeded(std::string(op) + ": result exceeds 16 vertices", static_cast<double>(n));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SimpleGraph

SimpleGraph::SimpleGraph(int n) : n_(n) { check_order(n); }

SimpleGraph SimpleGraph::from_edges(int n, std::span<const Edge> edges) {
  SimpleGraph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

int SimpleGraph::degree(int v) const noexcept { return std::popcount(adj_[v]); }

int SimpleGraph::edge_count() const noexcept {
  int twice = 0;
  for (int v = 0; v < n_; ++v) twice += std::popcount(adj_[v]);
  return twice / 2;
}

std::vector<Edge> SimpleGraph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

void SimpleGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("loops are not allowed in a simple graph");
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

void SimpleGraph::remove_edge(int u, int v) {
  adj_[u] &= ~bit(v);
  adj_[v] &= ~bit(u);
}

// ---------------------------------------------------------------------------
// LoopedGraph

LoopedGraph::LoopedGraph(int n) : n_(n) { check_order(n); }

LoopedGraph LoopedGraph::from_simple(const SimpleGraph& g) {
  LoopedGraph out(g.order());
  for (auto [u, v] : g.edges()) out.add_edge(u, v);
  return out;
}

LoopedGraph LoopedGraph::with_all_loops(const SimpleGraph& g) {
  LoopedGraph out = from_simple(g);
  for (int v = 0; v < g.order(); ++v) out.add_edge(v, v);
  return out;
}

bool LoopedGraph::has_loops() const noexcept {
  for (int v = 0; v < n_; ++v) {
    if (adjacent(v, v)) return true;
  }
  return false;
}

void LoopedGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("edge endpoint out of range");
  adj_[u] |= bit(v);
  adj_[v] |= bit(u);
}

SimpleGraph LoopedGraph::to_simple() const {
  if (has_loops()) throw std::invalid_argument("graph has loops");
  SimpleGraph g(n_);
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      if (adjacent(u, v)) g.add_edge(u, v);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// WeightedGraph

WeightedGraph::WeightedGraph(int m) : m_(m), w_(static_cast<std::size_t>(m * m)) {
  if (m < 1) throw std::invalid_argument("weighted graph needs at least one vertex");
}

WeightedGraph WeightedGraph::from_simple(const SimpleGraph& g) {
  WeightedGraph h(g.order());
  for (auto [u, v] : g.edges()) h.set(u, v, 1);
  return h;
}

WeightedGraph WeightedGraph::from_looped(const LoopedGraph& g) {
  WeightedGraph h(g.order());
  for (int u = 0; u < g.order(); ++u) {
    for (int v = u; v < g.order(); ++v) {
      if (g.adjacent(u, v)) h.set(u, v, 1);
    }
  }
  return h;
}

WeightedGraph WeightedGraph::from_matrix(int m, std::vector<Rational> entries) {
  if (entries.size() != static_cast<std::size_t>(m * m)) {
    throw std::invalid_argument("matrix entry count does not match order");
  }
  WeightedGraph h(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (entries[i * m + j] != entries[j * m + i]) throw std::invalid_argument("matrix not symmetric");
    }
  }
  h.w_ = std::move(entries);
  return h;
}

void WeightedGraph::set(int i, int j, const Rational& value) {
  if (i < 0 || j < 0 || i >= m_ || j >= m_) throw std::out_of_range("weight index out of range");
  w_[static_cast<std::size_t>(i * m_ + j)] = value;
  w_[static_cast<std::size_t>(j * m_ + i)] = value;
}

// ---------------------------------------------------------------------------
// graph6

SimpleGraph parse_graph6(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  if (line.starts_with(">>")) throw ParseError("graph6 header lines are not supported", 0);
  if (line.empty()) throw ParseError("empty graph6 line", 0);
  for (std::size_t i = 0; i < line.size(); ++i) {
    const auto c = static_cast<unsigned char>(line[i]);
    if (c < 63 || c > 126) throw ParseError("byte outside graph6 range 63..126", i);
  }
  if (static_cast<unsigned char>(line[0]) == 126) throw ParseError("graph6 order above 62 not supported", 0);
  const int n = line[0] - 63;
  if (n > kMaxVertices) throw ParseError("graph order " + std::to_string(n) + " exceeds 16", 0);
  if (n < 1) throw ParseError("graph order 0 not supported", 0);
  const std::size_t bits = static_cast<std::size_t>(n) * (n - 1) / 2;
  const std::size_t expected = 1 + (bits + 5) / 6;
  if (line.size() != expected) {
    throw ParseError("graph6 length " + std::to_string(line.size()) + " does not match order " +
                         std::to_string(n) + " (expected " + std::to_string(expected) + ")",
                     std::min(line.size(), expected));
  }
  SimpleGraph g(n);
  std::size_t k = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i, ++k) {
      const int byte = line[1 + k / 6] - 63;
      if ((byte >> (5 - k % 6)) & 1) g.add_edge(i, j);
    }
  }
  // Padding bits must be zero.
  for (; k % 6 != 0; ++k) {
    const int byte = line[1 + k / 6] - 63;
    if ((byte >> (5 - k % 6)) & 1) throw ParseError("nonzero graph6 padding bit", 1 + k / 6);
  }
  return g;
}

std::string write_graph6(const SimpleGraph& g) {
  const int n = g.order();
  std::string out(1, static_cast<char>(63 + n));
  int acc = 0;
  int filled = 0;
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      acc = (acc << 1) | (g.adjacent(i, j) ? 1 : 0);
      if (++filled == 6) {
        out.push_back(static_cast<char>(63 + acc));
        acc = 0;
        filled = 0;
      }
    }
  }
  if (filled > 0) out.push_back(static_cast<char>(63 + (acc << (6 - filled))));
  return out;
}

// ---------------------------------------------------------------------------
// Named graphs

SimpleGraph complete_graph(int n) {
  SimpleGraph g(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  }
  return g;
}

SimpleGraph edgeless_graph(int n) { return SimpleGraph(n); }

SimpleGraph path_graph(int n) {
  SimpleGraph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

SimpleGraph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  SimpleGraph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

SimpleGraph star_graph(int leaves) {
  SimpleGraph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

SimpleGraph complete_bipartite(int a, int b) {
  SimpleGraph g(a + b);
  for (int u = 0; u < a; ++u) {
    for (int v = 0; v < b; ++v) g.add_edge(u, a + v);
  }
  return g;
}

std::vector<VertexMask> component_masks(const SimpleGraph& g) {
  std::vector<VertexMask> out;
  VertexMask seen = 0;
  for (int s = 0; s < g.order(); ++s) {
    if (seen & bit(s)) continue;
    VertexMask comp = bit(s);
    VertexMask frontier = bit(s);
    while (frontier) {
      const int v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const VertexMask fresh = g.neighbors(v) & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    seen |= comp;
    out.push_back(comp);
  }
  return out;
}

bool is_connected(const SimpleGraph& g) { return component_masks(g).size() == 1; }

bool is_tree(const SimpleGraph& g) { return g.edge_count() == g.order() - 1 && is_connected(g); }

SimpleGraph relabel(const SimpleGraph& g, std::span<const int> perm) {
  if (perm.size() != static_cast<std::size_t>(g.order())) throw std::invalid_argument("permutation size mismatch");
  SimpleGraph out(g.order());
  for (auto [u, v] : g.edges()) out.add_edge(perm[u], perm[v]);
  return out;
}

// ---------------------------------------------------------------------------
// Constructions

SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b) {
  check_result_order(static_cast<long>(a.order()) + b.order(), "disjoint_union");
  SimpleGraph g(a.order() + b.order());
  for (auto [u, v] : a.edges()) g.add_edge(u, v);
  for (auto [u, v] : b.edges()) g.add_edge(a.order() + u, a.order() + v);
  return g;
}

SimpleGraph power(const SimpleGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("power needs k >= 1");
  check_result_order(static_cast<long>(g.order()) * k, "power");
  SimpleGraph out = g;
  for (int i = 1; i < k; ++i) out = disjoint_union(out, g);
  return out;
}

LoopedGraph categorical_product(const LoopedGraph& a, const LoopedGraph& b) {
  const int na = a.order();
  const int nb = b.order();
  check_result_order(static_cast<long>(na) * nb, "categorical_product");
  LoopedGraph out(na * nb);
  for (int i1 = 0; i1 < na; ++i1) {
    for (int j1 = 0; j1 < na; ++j1) {
      if (!a.adjacent(i1, j1)) continue;
      for (int i2 = 0; i2 < nb; ++i2) {
        for (int j2 = 0; j2 < nb; ++j2) {
          if (b.adjacent(i2, j2)) out.add_edge(i1 * nb + i2, j1 * nb + j2);
        }
      }
    }
  }
  return out;
}

SimpleGraph categorical_product(const SimpleGraph& a, const SimpleGraph& b) {
  return categorical_product(LoopedGraph::from_simple(a), LoopedGraph::from_simple(b)).to_simple();
}

WeightedGraph categorical_product(const WeightedGraph& a, const WeightedGraph& b, int max_order) {
  const long order = static_cast<long>(a.order()) * b.order();
  if (order > max_order) throw CapExceeded("weighted categorical_product exceeds configured order", static_cast<double>(order));
  const int na = a.order();
  const int nb = b.order();
  WeightedGraph out(static_cast<int>(order));
  for (int i1 = 0; i1 < na; ++i1) {
    for (int j1 = i1; j1 < na; ++j1) {
      if (a.at(i1, j1) == 0) continue;
      for (int i2 = 0; i2 < nb; ++i2) {
        for (int j2 = 0; j2 < nb; ++j2) {
          out.set(i1 * nb + i2, j1 * nb + j2, a.at(i1, j1) * b.at(i2, j2));
        }
      }
    }
  }
  return out;
}

SimpleGraph blow_up(const SimpleGraph& g, int r) {
  if (r < 1) throw std::invalid_argument("blow_up needs r >= 1");
  const int n = g.order();
  check_result_order(static_cast<long>(n) * r, "blow_up");
  SimpleGraph out(n * r);
  for (auto [u, v] : g.edges()) {
    for (int s = 0; s < r; ++s) {
      for (int t = 0; t < r; ++t) out.add_edge(s * n + u, t * n + v);
    }
  }
  return out;
}

SimpleGraph induced_subgraph(const SimpleGraph& g, VertexMask vertices) {
  vertices &= all_vertices(g.order());
  if (vertices == 0) throw std::invalid_argument("induced_subgraph of an empty vertex set");
  std::array<int, kMaxVertices> index{};
  int k = 0;
  for (int v = 0; v < g.order(); ++v) {
    if (vertices & bit(v)) index[v] = k++;
  }
  SimpleGraph out(k);
  for (auto [u, v] : g.edges()) {
    if ((vertices & bit(u)) && (vertices & bit(v))) out.add_edge(index[u], index[v]);
  }
  return out;
}

std::vector<SimpleGraph> components(const SimpleGraph& g) {
  std::vector<SimpleGraph> out;
  for (VertexMask mask : component_masks(g)) out.push_back(induced_subgraph(g, mask));
  return out;
}

std::vector<SimpleGraph> odd_multiplicity_reduction(const SimpleGraph& g) {
  std::map<std::string, int> counts;
  for (const SimpleGraph& c : components(g)) ++counts[canonical_form(c).graph6];
  std::vector<SimpleGraph> out;
  for (const auto& [key, count] : counts) {
    if (count % 2 == 1) out.push_back(parse_graph6(key));
  }
  return out;
}

}  // namespace posgraph
