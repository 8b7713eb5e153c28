#pragma once

#include <string>
#include <vector>

#include "posgraph/graph.hpp"

namespace posgraph {

struct CanonicalForm {
  /// graph6 of the canonically labeled graph; equal for isomorphic inputs.
  std::string graph6;
  /// relabeling[v] is the canonical index of input vertex v.
  std::vector<int> relabeling;
};

/// Canonical labeling by equitable refinement plus individualization search,
/// keeping the lexicographically least adjacency code. Automorphisms found at
/// leaves prune equivalent subtrees.
CanonicalForm canonical_form(const SimpleGraph& g);

inline std::string canonical_key(const SimpleGraph& g) { return canonical_form(g).graph6; }

bool are_isomorphic(const SimpleGraph& a, const SimpleGraph& b);

}  // namespace posgraph
