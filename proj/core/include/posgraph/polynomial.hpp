#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "posgraph/graph.hpp"
#include "posgraph/hom.hpp"
#include "posgraph/rational.hpp"

namespace posgraph {

/// Unordered target pair, i <= j; i == j is a loop variable.
struct VarPair {
  int i = 0;
  int j = 0;
  bool operator==(const VarPair&) const = default;
  auto operator<=>(const VarPair&) const = default;
};

/// Symbolic homomorphism count: a sparse integer polynomial in the entries of a
/// symmetric target matrix. Every term has total degree |E(G)|.
class HomPolynomial {
 public:
  struct Term {
    std::vector<std::uint8_t> exponents;  // one per variable
    std::int64_t coefficient = 0;
  };

  HomPolynomial() = default;
  HomPolynomial(int target_order, std::vector<VarPair> variables, std::vector<Term> terms);

  int target_order() const noexcept { return target_order_; }
  const std::vector<VarPair>& variables() const noexcept { return variables_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t variable_count() const noexcept { return variables_.size(); }
  /// Total degree, or -1 for the zero polynomial.
  int degree() const noexcept { return degree_; }
  bool is_constant() const noexcept { return degree_ <= 0; }

  /// Exact value with the variables read from a symmetric target matrix.
  Rational evaluate(const WeightedGraph& matrix) const;
  /// Exact value at one value per variable.
  Rational evaluate(std::span<const Rational> values) const;

  double value(std::span<const double> point) const;
  /// Returns the value and writes the gradient; `gradient` must have variable_count() slots.
  double value_and_gradient(std::span<const double> point, std::span<double> gradient) const;

  /// Target matrix of order target_order() carrying `values` on the variables, zero elsewhere.
  WeightedGraph to_target(std::span<const Rational> values) const;

  /// Header line "vars i,j i,j ..." then one "coeff e1 e2 ..." line per term.
  std::string serialize() const;
  /// Inverse of serialize. Target order is one more than the largest variable index.
  static HomPolynomial parse(std::string_view text);

 private:
  void build_sparse();

  int target_order_ = 0;
  std::vector<VarPair> variables_;
  std::vector<Term> terms_;
  int degree_ = -1;
  // Sparse view: for term t, entries [offset[t], offset[t+1]) of (var, exp).
  std::vector<std::uint32_t> sparse_offset_;
  std::vector<std::uint16_t> sparse_var_;
  std::vector<std::uint8_t> sparse_exp_;
  std::vector<double> coefficient_d_;
};

/// Symbolic count over a target of order m, by enumerating admissible maps.
/// With `blocks`, only maps with f(v) in blocks.allowed[v] count, and only the
/// pairs those maps touch become variables. Throws CapExceeded above `cap` maps.
HomPolynomial hom_polynomial(const SimpleGraph& g, int m, const BlockConstraint& blocks = {}, double cap = 1.0e7);

}  // namespace posgraph
