#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "posgraph/rational.hpp"

namespace posgraph {

inline constexpr int kMaxVertices = 16;

/// Bitset over vertex indices; bit v set means vertex v is a member.
using VertexMask = std::uint32_t;

inline constexpr VertexMask bit(int v) { return VertexMask{1} << v; }
inline constexpr VertexMask all_vertices(int n) { return (VertexMask{1} << n) - 1; }

using Edge = std::pair<int, int>;

/// Undirected loop-free graph on 1..16 vertices, one adjacency bitset per vertex.
class SimpleGraph {
 public:
  SimpleGraph() : SimpleGraph(1) {}
  explicit SimpleGraph(int n);

  static SimpleGraph from_edges(int n, std::span<const Edge> edges);
  static SimpleGraph from_edges(int n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  int order() const noexcept { return n_; }
  bool adjacent(int u, int v) const noexcept { return (adj_[u] >> v) & 1U; }
  VertexMask neighbors(int v) const noexcept { return adj_[v]; }
  int degree(int v) const noexcept;
  int edge_count() const noexcept;
  /// Edges (u, v) with u < v, in row-major order.
  std::vector<Edge> edges() const;

  void add_edge(int u, int v);
  void remove_edge(int u, int v);

  bool operator==(const SimpleGraph&) const = default;

 private:
  int n_;
  std::array<VertexMask, kMaxVertices> adj_{};
};

/// Graph whose vertices may carry loops. Used as a product factor / power pattern.
class LoopedGraph {
 public:
  explicit LoopedGraph(int n);
  static LoopedGraph from_simple(const SimpleGraph& g);
  /// g with a loop added at every vertex (K_r° for g = K_r).
  static LoopedGraph with_all_loops(const SimpleGraph& g);

  int order() const noexcept { return n_; }
  bool adjacent(int u, int v) const noexcept { return (adj_[u] >> v) & 1U; }
  bool has_loops() const noexcept;
  void add_edge(int u, int v);
  /// Throws std::invalid_argument when a loop is present.
  SimpleGraph to_simple() const;

  bool operator==(const LoopedGraph&) const = default;

 private:
  int n_;
  std::array<VertexMask, kMaxVertices> adj_{};
};

/// Symmetric matrix of exact rationals; nonzero diagonal entries are loops.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int m);

  static WeightedGraph from_simple(const SimpleGraph& g);
  static WeightedGraph from_looped(const LoopedGraph& g);
  /// Row-major m*m entries. Throws std::invalid_argument if not symmetric.
  static WeightedGraph from_matrix(int m, std::vector<Rational> entries);

  int order() const noexcept { return m_; }
  const Rational& at(int i, int j) const { return w_[static_cast<std::size_t>(i * m_ + j)]; }
  /// Sets w[i][j] and w[j][i].
  void set(int i, int j, const Rational& value);
  std::span<const Rational> entries() const { return w_; }

  bool operator==(const WeightedGraph&) const = default;

 private:
  int m_ = 0;
  std::vector<Rational> w_;
};

// graph6 (no header, n <= 16).
SimpleGraph parse_graph6(std::string_view line);
std::string write_graph6(const SimpleGraph& g);

// Small named families.
SimpleGraph complete_graph(int n);
SimpleGraph edgeless_graph(int n);
SimpleGraph path_graph(int n);
SimpleGraph cycle_graph(int n);
SimpleGraph star_graph(int leaves);
SimpleGraph complete_bipartite(int a, int b);

bool is_connected(const SimpleGraph& g);
bool is_tree(const SimpleGraph& g);

/// perm[v] is the new index of vertex v.
SimpleGraph relabel(const SimpleGraph& g, std::span<const int> perm);

// Constructions. All throw CapExceeded when the result would exceed 16 vertices.
SimpleGraph disjoint_union(const SimpleGraph& a, const SimpleGraph& b);
/// Disjoint union of k >= 1 copies.
SimpleGraph power(const SimpleGraph& g, int k);
/// Vertex (i1, i2) has index i1 * |V(b)| + i2.
LoopedGraph categorical_product(const LoopedGraph& a, const LoopedGraph& b);
SimpleGraph categorical_product(const SimpleGraph& a, const SimpleGraph& b);
/// Weighted product: w((i1,i2),(j1,j2)) = wa[i1][j1] * wb[i2][j2]. Throws CapExceeded above max_order.
WeightedGraph categorical_product(const WeightedGraph& a, const WeightedGraph& b, int max_order = 4096);
/// Each vertex replaced by r pairwise non-adjacent twins; twin t of v has index t * n + v,
/// matching categorical_product(K_r°, g).
SimpleGraph blow_up(const SimpleGraph& g, int r);

/// Vertices of the members of `vertices`, renumbered in increasing order. Throws on an empty set.
SimpleGraph induced_subgraph(const SimpleGraph& g, VertexMask vertices);
/// Vertex sets of the connected components, ordered by smallest member.
std::vector<VertexMask> component_masks(const SimpleGraph& g);
std::vector<SimpleGraph> components(const SimpleGraph& g);
/// One representative per isomorphism class of components occurring an odd number of times,
/// in canonical-key order. Each representative is in canonical labeling.
std::vector<SimpleGraph> odd_multiplicity_reduction(const SimpleGraph& g);

}  // namespace posgraph
