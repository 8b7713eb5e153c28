#pragma once

#include <optional>
#include <vector>

#include "posgraph/certificate.hpp"
#include "posgraph/graph.hpp"

namespace posgraph {

/// V = S + A + B with S independent, no A-B edges, and sigma an involution fixing S
/// that maps G[S + A] isomorphically onto G[S + B].
struct SymmetryWitness {
  VertexMask s = 0;
  VertexMask a = 0;
  VertexMask b = 0;
  std::vector<int> sigma;
};

/// Searches involutive automorphisms (pruned by walk-tree class) whose fixed set is
/// independent and which move no vertex to a neighbour, then splits the moved pairs
/// into sides with a parity union-find. The returned witness has been re-verified.
std::optional<SymmetryWitness> symmetry_witness(const SimpleGraph& g);
inline bool is_symmetric(const SimpleGraph& g) { return symmetry_witness(g).has_value(); }

/// Independent check of every witness invariant.
bool verify_symmetry_witness(const SimpleGraph& g, const SymmetryWitness& w);

/// Vertex partition with classes numbered by first vertex.
struct VertexPartition {
  std::vector<int> class_of;
  int class_count = 0;

  VertexMask members(int c) const;
  VertexMask members(const std::vector<int>& classes) const;
  bool operator==(const VertexPartition&) const = default;
};

/// One round of refinement by (own class, multiset of neighbour classes).
VertexPartition refine_once(const SimpleGraph& g, const VertexPartition& p);
/// Coarsest stable refinement of `start` (the walk-tree partition when start is trivial).
VertexPartition wl_partition(const SimpleGraph& g, const VertexPartition& start);
VertexPartition wl_partition(const SimpleGraph& g);
VertexPartition degree_partition(const SimpleGraph& g);

struct ParityVerdict {
  bool passed = true;
  /// Failing detail: offending degree for the degree filter.
  int degree = -1;
  /// Failing detail: class union with an odd number of spanned edges.
  std::vector<int> classes;
  std::optional<WitnessCertificate> witness;
};

/// Fails iff |E| is odd; the witness is the one-vertex target with loop weight -1.
ParityVerdict edge_parity_filter(const SimpleGraph& g);

/// Fails iff some odd degree k occurs an odd number of times (smallest such k reported).
/// The witness puts degree-k vertices on one target vertex and the rest on another,
/// with weight -1 between them, as a block-restricted count equal to -1.
ParityVerdict degree_parity_filter(const SimpleGraph& g);

/// Fails iff a class spans an odd edge count or two classes have an odd number of
/// edges between them; reports a class union spanning an odd number of edges, with
/// a one-vertex-per-class restricted witness of value -1.
ParityVerdict wl_class_parity_check(const SimpleGraph& g, const VertexPartition& partition);

/// Restricted witness of value -1 for a class union spanning an odd number of edges.
WitnessCertificate class_union_witness(const SimpleGraph& g, const VertexPartition& partition,
                                       const std::vector<int>& classes);

/// First (by size, then lexicographic) proper nonempty class subset whose union spans a
/// non-symmetric induced subgraph. Throws CapExceeded above max_classes classes.
std::optional<std::vector<int>> subgraph_minimality_filter(const SimpleGraph& g, const VertexPartition& partition,
                                                           int max_classes = 12);

/// Induced subgraph on the vertices of degree k. Throws std::invalid_argument if none.
SimpleGraph degree_subgraph(const SimpleGraph& g, int k);

struct TreeVerdict {
  bool symmetric = false;
  std::optional<SymmetryWitness> witness;
  /// For non-positive trees: walk-tree classes whose union spans an odd number of edges.
  std::vector<int> odd_classes;
};

/// Case analysis on the central vertex (or vertices) of a tree. Throws
/// std::invalid_argument if `t` is not a tree.
TreeVerdict classify_tree(const SimpleGraph& t);

/// All symmetric graphs on n vertices (n <= 10), one per isomorphism class, built by
/// gluing two copies of a graph along an independent set. Sorted canonical graph6.
std::vector<SimpleGraph> enumerate_symmetric_graphs(int n);

}  // namespace posgraph
