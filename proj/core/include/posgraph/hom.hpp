#pragma once

#include <span>
#include <vector>

#include "posgraph/graph.hpp"
#include "posgraph/rational.hpp"

namespace posgraph {

/// Order in which the vertices of G are summed out by the elimination DP.
struct EliminationOrder {
  std::vector<int> order;
  /// Largest bag (eliminated vertex plus its neighbours at that moment).
  int width = 0;
};

/// Greedy min-fill over G's adjacency, ties to the lowest index.
EliminationOrder min_fill_order(const SimpleGraph& g);

/// Allowed target vertices for every vertex of G. Empty `allowed` means unrestricted.
struct BlockConstraint {
  std::vector<std::vector<int>> allowed;

  bool empty() const noexcept { return allowed.empty(); }
  /// Throws std::invalid_argument unless sizes match, sets are nonempty, in range and duplicate free.
  void validate(int graph_order, int target_order) const;
  /// Number of admissible maps as a double (may overflow to inf).
  double map_count() const;
};

struct HomOptions {
  /// Upper bound on the cells of any DP table (product table before summation).
  double max_table_cells = 6.0e7;
  /// Brute force is used when the DP refuses and the map count is at most this.
  double brute_force_cap = 1.0e7;
};

/// Sum over maps V(g) -> V(h) of the product over edges ab of g of w[f(a)][f(b)].
/// Variable elimination along min_fill_order; exact. Throws CapExceeded with the
/// projected table size when neither the DP nor brute force fits the budget.
Rational hom_count(const SimpleGraph& g, const WeightedGraph& h, const HomOptions& options = {});

/// As hom_count, summing only over maps with f(v) in blocks.allowed[v].
Rational hom_count_restricted(const SimpleGraph& g, const WeightedGraph& h, const BlockConstraint& blocks,
                              const HomOptions& options = {});

/// Map-by-map backtracking sum. Throws CapExceeded above `cap` maps.
Rational hom_bruteforce(const SimpleGraph& g, const WeightedGraph& h, const BlockConstraint& blocks = {},
                        double cap = 1.0e7);

/// Exact hom(g, W) for an integer target given row-major (m x m, symmetric), using a
/// precomputed elimination order. Meant for scanning many small matrices.
BigInt hom_count_integer(const SimpleGraph& g, int m, std::span<const long> weights, const EliminationOrder& order);

/// Projected largest DP table for (g, domain sizes); exposed for cap reporting and benchmarks.
double dp_peak_cells(const SimpleGraph& g, const std::vector<int>& domain_sizes);

/// hom(g, h) / |V(h)|^|V(g)|.
Rational t_density(const SimpleGraph& g, const WeightedGraph& h, const HomOptions& options = {});

struct IdentityReport {
  bool holds = false;
  Rational lhs;
  Rational rhs;
};

/// DP against brute force; both sides exact.
IdentityReport hom_dp_vs_bruteforce(const SimpleGraph& g, const WeightedGraph& h);
/// t(g1 + g2, h) against t(g1, h) * t(g2, h).
IdentityReport product_law_check(const SimpleGraph& g1, const SimpleGraph& g2, const WeightedGraph& h);
/// t(g x pattern, h) against t(g, target_power(h, pattern)).
IdentityReport power_law_check(const SimpleGraph& g, const LoopedGraph& pattern, const WeightedGraph& h);

/// The weighted graph h^pattern on V(h)^V(pattern): tuple x has index sum x_i m^i and
/// w'(x, y) is the product over ordered pattern edges (i, j) of w[x_i][y_j]; a non-loop
/// edge therefore contributes two factors, a loop one. Throws CapExceeded above max_order.
WeightedGraph target_power(const WeightedGraph& h, const LoopedGraph& pattern, int max_order = 4096);

}  // namespace posgraph
