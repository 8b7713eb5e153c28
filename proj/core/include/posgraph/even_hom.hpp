#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "posgraph/graph.hpp"
#include "posgraph/rational.hpp"
#include "posgraph/structure.hpp"

namespace posgraph {

/// A homomorphism into a loop-free complete graph up to relabeling the target: a
/// partition of V(g) into independent classes, with the induced edge multiplicities.
struct QuotientMap {
  std::vector<int> class_of;  // classes numbered by first vertex
  int class_count = 0;
  /// class_count x class_count, symmetric, zero diagonal; sums (over a < b) to |E(g)|.
  std::vector<int> multiplicity;

  int between(int a, int b) const { return multiplicity[static_cast<std::size_t>(a * class_count + b)]; }
};

/// Builds the quotient for any labelling of V(g) (labels need not be contiguous).
/// Throws std::invalid_argument if two adjacent vertices share a label.
QuotientMap quotient_from_labels(const SimpleGraph& g, const std::vector<int>& labels);

/// Calls `sink` once for every partition of V(g) into independent sets.
/// Throws CapExceeded for n > 10.
void for_each_quotient(const SimpleGraph& g, const std::function<void(const QuotientMap&)>& sink);
std::vector<QuotientMap> enumerate_quotients(const SimpleGraph& g);

/// Every quotient edge has even multiplicity.
bool is_even(const QuotientMap& q);

struct OddnessProfile {
  std::vector<Edge> odd_edges;  // class pairs with odd multiplicity
  std::vector<int> odd_vertices;  // classes incident to an odd edge
  /// 2 r(f) = 2(|V| - #classes) + |odd vertices|.
  int r_doubled = 0;
};
OddnessProfile oddness(const QuotientMap& q);

/// min (|V| - #classes) over even quotients; empty when no quotient is even.
std::optional<int> p_value(const SimpleGraph& g);
/// 2 * min r(f) over all quotients.
int rbar_doubled(const SimpleGraph& g);

struct EvenReport {
  bool holds = false;
  /// Both sides doubled where half-integers occur.
  long lhs = 0;
  long rhs = 0;
};

/// p(g + g) = rbar(g + g); requires 2n <= 10.
EvenReport check_p2_identity(const SimpleGraph& g);
/// rbar(g + g) = 2 rbar(g); requires 2n <= 10.
EvenReport check_rbar_power(const SimpleGraph& g);

/// An even quotient with at least n/2 classes (the one with most classes), if any.
std::optional<QuotientMap> check_evenhalf(const SimpleGraph& g);

/// An even quotient whose quotient graph maps homomorphically into g, if any.
std::optional<QuotientMap> check_even_selfhom(const SimpleGraph& g);

/// Identify each vertex of A with its image in B; even with |S| + |A| classes.
QuotientMap folding_quotient(const SimpleGraph& g, const SymmetryWitness& w);

struct ExpectationReport {
  bool holds = false;
  Rational average;  // mean of hom(g, K_m^w) over all sign patterns w
  long even_maps = 0;
};

/// Average of hom(g, K_m with +-1 edge weights) over all 2^(m choose 2) patterns
/// against the number of maps V(g) -> [m] that are even homomorphisms into K_m.
/// Throws CapExceeded when 2^(m choose 2) * m^n exceeds 1e7.
ExpectationReport expectation_identity_check(const SimpleGraph& g, int m);

}  // namespace posgraph
