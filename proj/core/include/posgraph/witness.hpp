#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "posgraph/certificate.hpp"
#include "posgraph/graph.hpp"
#include "posgraph/polynomial.hpp"
#include "posgraph/structure.hpp"

namespace posgraph {

/// Scans every symmetric integer matrix of each size in `sizes` (ascending) with
/// entries in [lo, hi]. Upper-triangle entries are read row-major with the last one
/// varying fastest, each running through 0, 1, -1, 2, -2, ...; a matrix is skipped
/// when a vertex permutation (or, for even |E(g)|, global negation) maps it to an
/// earlier one. Returns the first negative count.
std::optional<WitnessCertificate> enumerate_matrix_witness(const SimpleGraph& g, std::span<const int> sizes,
                                                           int lo = -2, int hi = 2);
std::optional<WitnessCertificate> enumerate_matrix_witness(const SimpleGraph& g);

struct MinimizerConfig {
  int restarts = 200;
  int max_iters = 500;
  /// Armijo sufficient-decrease constant and backtracking factor.
  double armijo = 1.0e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  /// Every coordinate is kept in [-box, box].
  double box = 1.0;
  /// A local minimum below this value is handed to certification.
  double threshold = -1.0e-9;
  /// Relative decrease below which a descent run stops.
  double tolerance = 1.0e-12;
  std::uint64_t seed = 1;
  /// Optional shared stop flag, polled between restarts.
  const std::atomic<bool>* cancel = nullptr;
};

struct MinimizerResult {
  std::vector<double> point;
  double value = 0;
  int restart = -1;
};

/// Projected gradient descent with Armijo backtracking from `restarts` uniform random
/// starts. p is homogeneous, so the objective is p(x) / |x|^deg with every iterate
/// rescaled onto the box boundary; reported values are p at that boundary point.
/// Each local minimum below the threshold is passed to `accept`;
/// a true return stops the search with that point. Without `accept`, the first such
/// minimum is returned. Otherwise returns the best minimum if it is below the
/// threshold.
std::optional<MinimizerResult> minimize_polynomial(
    const HomPolynomial& p, const MinimizerConfig& cfg,
    const std::function<bool(const MinimizerResult&)>& accept = {});

/// Rounds the point to denominators 16, 64, then 256 and evaluates exactly; the
/// first negative rounding becomes a certificate.
std::optional<WitnessCertificate> certify_candidate(const SimpleGraph& g, const HomPolynomial& p,
                                                    std::span<const double> point,
                                                    const BlockConstraint& restriction, WitnessMethod method,
                                                    std::uint64_t seed = 0);

/// Minimizes the full symbolic hom polynomial over m x m targets and certifies.
std::optional<WitnessCertificate> full_polynomial_witness_search(const SimpleGraph& g, int m,
                                                                 const MinimizerConfig& cfg, double cap = 1.0e7);

/// Block layout for the class-restricted search: class c gets `block_size` consecutive
/// target vertices (one if the class is a singleton).
struct ClassBlocks {
  BlockConstraint constraint;
  int target_order = 0;
};
ClassBlocks class_blocks(const VertexPartition& partition, int block_size);

std::optional<WitnessCertificate> restricted_witness_search(const SimpleGraph& g, const VertexPartition& partition,
                                                            int block_size, const MinimizerConfig& cfg,
                                                            double cap = 1.0e7);

/// 3x3 rook's graph: vertex 3r + c, rows and columns are triangles.
SimpleGraph rook_graph_g1();
/// 3 x 5 target: vertex 5 * row + col; rows are 5-cycles, columns triangles, and the
/// column-2 edge between the last and first row has weight -1.
WeightedGraph build_paper_witness_H();

/// hom(G1, h) by summing over assignments of the three rows of G1 to weighted
/// ordered triangles of h; independent of the elimination DP.
Rational g1_row_assignment_count(const WeightedGraph& h);

struct G1Check {
  Rational dp_value;
  Rational row_value;
  bool agree = false;
  /// Present iff the value is negative.
  std::optional<WitnessCertificate> certificate;
};
G1Check check_G1(const WeightedGraph& h);
G1Check check_G1();

/// The three ten-vertex regular graphs left open at n = 10.
SimpleGraph survivor_g2();  // C5 with every vertex doubled (4-regular)
SimpleGraph survivor_g3();  // C6 joined to four independent vertices (6-regular)
SimpleGraph survivor_g4();  // K5,5 minus a perfect matching (4-regular)

}  // namespace posgraph
