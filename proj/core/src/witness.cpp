#include "posgraph/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "posgraph/errors.hpp"

namespace posgraph {

namespace {

// Upper-triangle entries (row-major) to a full row-major matrix.
void expand(int s, const std::vector<long>& upper, std::vector<long>& full) {
  full.assign(static_cast<std::size_t>(s * s), 0);
  std::size_t k = 0;
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j, ++k) full[i * s + j] = full[j * s + i] = upper[k];
  }
}

// Scan ranks: values ordered by magnitude, positive first (0, 1, -1, 2, -2, ...).
struct EntryOrder {
  std::vector<long> values;
  int lo = 0;
  int hi = 0;
  int rank(long v) const {
    return static_cast<int>(std::find(values.begin(), values.end(), v) - values.begin());
  }
  bool contains(long v) const { return v >= lo && v <= hi; }
};

EntryOrder entry_order(int lo, int hi) {
  EntryOrder o;
  o.lo = lo;
  o.hi = hi;
  for (long v = lo; v <= hi; ++v) o.values.push_back(v);
  std::stable_sort(o.values.begin(), o.values.end(), [](long a, long b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a > b;
  });
  return o;
}

// True unless a vertex permutation (or negation, when allowed and in range) gives a
// matrix scanned earlier.
bool is_orbit_minimal(int s, const std::vector<int>& ranks, const EntryOrder& order,
                      const std::vector<std::vector<int>>& perms, bool negation) {
  std::vector<long> upper(ranks.size());
  for (std::size_t k = 0; k < ranks.size(); ++k) upper[k] = order.values[ranks[k]];
  std::vector<long> full;
  expand(s, upper, full);
  bool negation_in_range = negation;
  for (long v : upper) negation_in_range = negation_in_range && order.contains(-v);
  std::vector<int> image(ranks.size());
  for (int sign : {1, -1}) {
    if (sign < 0 && !negation_in_range) break;
    for (const auto& pi : perms) {
      std::size_t k = 0;
      for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j, ++k) image[k] = order.rank(sign * full[pi[i] * s + pi[j]]);
      }
      if (image < ranks) return false;
    }
  }
  return true;
}

}  // namespace

std::optional<WitnessCertificate> enumerate_matrix_witness(const SimpleGraph& g, std::span<const int> sizes, int lo,
                                                           int hi) {
  if (lo > hi) throw std::invalid_argument("empty entry range");
  std::vector<int> order_sizes(sizes.begin(), sizes.end());
  std::sort(order_sizes.begin(), order_sizes.end());
  order_sizes.erase(std::unique(order_sizes.begin(), order_sizes.end()), order_sizes.end());
  const EliminationOrder order = min_fill_order(g);
  const bool negation = g.edge_count() % 2 == 0;
  const EntryOrder entries = entry_order(lo, hi);
  for (int s : order_sizes) {
    if (s < 1 || s > 4) throw std::invalid_argument("matrix sizes must lie in 1..4");
    std::vector<std::vector<int>> perms;
    std::vector<int> pi(static_cast<std::size_t>(s));
    std::iota(pi.begin(), pi.end(), 0);
    do perms.push_back(pi);
    while (std::next_permutation(pi.begin(), pi.end()));

    const std::size_t k = static_cast<std::size_t>(s * (s + 1) / 2);
    const int base = static_cast<int>(entries.values.size());
    std::vector<int> ranks(k, 0);
    std::vector<long> upper(k);
    std::vector<long> full;
    while (true) {
      if (is_orbit_minimal(s, ranks, entries, perms, negation)) {
        for (std::size_t i = 0; i < k; ++i) upper[i] = entries.values[ranks[i]];
        expand(s, upper, full);
        const BigInt value = hom_count_integer(g, s, full, order);
        if (sgn(value) < 0) {
          std::vector<Rational> cells(full.begin(), full.end());
          WitnessCertificate cert;
          cert.target = WeightedGraph::from_matrix(s, std::move(cells));
          cert.hom_value = Rational(value);
          cert.method = WitnessMethod::MatrixEnum;
          return cert;
        }
      }
      std::size_t d = k;
      while (d > 0 && ranks[d - 1] == base - 1) ranks[--d] = 0;
      if (d == 0) break;
      ++ranks[d - 1];
    }
  }
  return std::nullopt;
}

std::optional<WitnessCertificate> enumerate_matrix_witness(const SimpleGraph& g) {
  static constexpr std::array<int, 3> kSizes{1, 2, 3};
  return enumerate_matrix_witness(g, kSizes);
}

namespace {

// q(x) = p(x) / |x|^d is scale invariant because p is homogeneous of degree d, so
// descending q and rescaling each iterate onto the box boundary cannot collapse to 0.
double quotient(const HomPolynomial& p, std::span<const double> x, std::span<double> grad) {
  double s = 0;
  for (double xi : x) s += xi * xi;
  if (s == 0) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return 0;
  }
  const double d = p.degree();
  const double value = p.value_and_gradient(x, grad);
  const double scale = std::pow(s, -d / 2);
  for (std::size_t i = 0; i < x.size(); ++i) grad[i] = scale * (grad[i] - d * value * x[i] / s);
  return value * scale;
}

void to_boundary(std::vector<double>& x, double box) {
  double peak = 0;
  for (double xi : x) peak = std::max(peak, std::abs(xi));
  if (peak == 0) return;
  for (double& xi : x) xi *= box / peak;
}

// One projected-gradient descent on q from x (left on the box boundary); returns p(x).
double descend(const HomPolynomial& p, const MinimizerConfig& cfg, std::vector<double>& x) {
  const std::size_t d = x.size();
  std::vector<double> grad(d);
  std::vector<double> y(d);
  std::vector<double> scratch(d);
  to_boundary(x, cfg.box);
  double f = quotient(p, x, grad);
  double gmax = 0;
  for (double gi : grad) gmax = std::max(gmax, std::abs(gi));
  if (gmax == 0) return p.value(x);
  double alpha = cfg.box / gmax;
  for (int it = 0; it < cfg.max_iters; ++it) {
    bool moved = false;
    double fy = f;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt) {
      double slope = 0;
      bool same = true;
      for (std::size_t i = 0; i < d; ++i) {
        y[i] = std::clamp(x[i] - alpha * grad[i], -cfg.box, cfg.box);
        slope += grad[i] * (y[i] - x[i]);
        same = same && y[i] == x[i];
      }
      if (same) break;
      fy = quotient(p, y, scratch);
      if (fy <= f + cfg.armijo * slope) {
        moved = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    if (!moved) break;
    const double decrease = f - fy;
    to_boundary(y, cfg.box);
    x.swap(y);
    f = quotient(p, x, grad);
    if (decrease <= cfg.tolerance * std::abs(f)) break;
    alpha /= cfg.backtrack;
  }
  return p.value(x);
}

}  // namespace

std::optional<MinimizerResult> minimize_polynomial(const HomPolynomial& p, const MinimizerConfig& cfg,
                                                   const std::function<bool(const MinimizerResult&)>& accept) {
  if (cfg.restarts < 0 || cfg.max_iters < 0 || !(cfg.box > 0)) throw std::invalid_argument("bad minimizer config");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(-cfg.box, cfg.box);
  std::optional<MinimizerResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    if (cfg.cancel != nullptr && cfg.cancel->load(std::memory_order_relaxed)) break;
    MinimizerResult res;
    res.point.resize(p.variable_count());
    for (double& xi : res.point) xi = uniform(rng);
    res.value = descend(p, cfg, res.point);
    res.restart = r;
    if (res.value < cfg.threshold && (!accept || accept(res))) return res;
    if (!best || res.value < best->value) best = std::move(res);
  }
  if (best && best->value < cfg.threshold) return best;
  return std::nullopt;
}

std::optional<WitnessCertificate> certify_candidate(const SimpleGraph& g, const HomPolynomial& p,
                                                    std::span<const double> point,
                                                    const BlockConstraint& restriction, WitnessMethod method,
                                                    std::uint64_t seed) {
  if (point.size() != p.variable_count()) throw std::invalid_argument("point dimension mismatch");
  for (long den : {16L, 64L, 256L}) {
    std::vector<Rational> values;
    values.reserve(point.size());
    for (double x : point) values.push_back(round_to_denominator(x, den));
    WeightedGraph target = p.to_target(values);
    const Rational value =
        restriction.empty() ? hom_count(g, target) : hom_count_restricted(g, target, restriction);
    if (value < 0) {
      WitnessCertificate cert;
      cert.target = std::move(target);
      cert.hom_value = value;
      cert.method = method;
      cert.restriction = restriction;
      cert.seed = seed;
      return cert;
    }
  }
  return std::nullopt;
}

namespace {

std::optional<WitnessCertificate> minimize_and_certify(const SimpleGraph& g, const HomPolynomial& p,
                                                       const BlockConstraint& restriction, WitnessMethod method,
                                                       const MinimizerConfig& cfg) {
  if (p.is_constant()) return std::nullopt;
  std::optional<WitnessCertificate> found;
  minimize_polynomial(p, cfg, [&](const MinimizerResult& r) {
    found = certify_candidate(g, p, r.point, restriction, method, cfg.seed);
    return found.has_value();
  });
  return found;
}

}  // namespace

std::optional<WitnessCertificate> full_polynomial_witness_search(const SimpleGraph& g, int m,
                                                                 const MinimizerConfig& cfg, double cap) {
  const HomPolynomial p = hom_polynomial(g, m, BlockConstraint{}, cap);
  return minimize_and_certify(g, p, BlockConstraint{}, WitnessMethod::MinimizerFull, cfg);
}

ClassBlocks class_blocks(const VertexPartition& partition, int block_size) {
  if (block_size < 1) throw std::invalid_argument("block size must be positive");
  const int k = partition.class_count;
  std::vector<int> size(static_cast<std::size_t>(k), 0);
  for (int c : partition.class_of) ++size[c];
  std::vector<std::vector<int>> block(static_cast<std::size_t>(k));
  int next = 0;
  for (int c = 0; c < k; ++c) {
    const int width = size[c] == 1 ? 1 : block_size;
    for (int i = 0; i < width; ++i) block[c].push_back(next++);
  }
  ClassBlocks out;
  out.target_order = next;
  for (int c : partition.class_of) out.constraint.allowed.push_back(block[c]);
  return out;
}

std::optional<WitnessCertificate> restricted_witness_search(const SimpleGraph& g, const VertexPartition& partition,
                                                            int block_size, const MinimizerConfig& cfg,
                                                            double cap) {
  if (static_cast<int>(partition.class_of.size()) != g.order()) {
    throw std::invalid_argument("partition does not match graph");
  }
  const ClassBlocks blocks = class_blocks(partition, block_size);
  const HomPolynomial p = hom_polynomial(g, blocks.target_order, blocks.constraint, cap);
  return minimize_and_certify(g, p, blocks.constraint, WitnessMethod::MinimizerRestricted, cfg);
}

SimpleGraph rook_graph_g1() {
  SimpleGraph g(9);
  for (int r = 0; r < 3; ++r) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        g.add_edge(3 * r + a, 3 * r + b);
        g.add_edge(3 * a + r, 3 * b + r);
      }
    }
  }
  return g;
}

WeightedGraph build_paper_witness_H() {
  constexpr int kRows = 3;
  constexpr int kCols = 5;
  WeightedGraph h(kRows * kCols);
  auto id = [](int row, int col) { return row * kCols + col; };
  for (int row = 0; row < kRows; ++row) {
    for (int col = 0; col < kCols; ++col) h.set(id(row, col), id(row, (col + 1) % kCols), 1);
  }
  for (int col = 0; col < kCols; ++col) {
    h.set(id(0, col), id(1, col), 1);
    h.set(id(1, col), id(2, col), 1);
    h.set(id(2, col), id(0, col), col == 2 ? -1 : 1);
  }
  return h;
}

Rational g1_row_assignment_count(const WeightedGraph& h) {
  const int m = h.order();
  // A row of G1 is a triangle (x0, x1, x2); its weight is the product over the three pairs.
  struct RowState {
    std::array<int, 3> x;
    Rational weight;
  };
  std::vector<RowState> states;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      for (int c = 0; c < m; ++c) {
        Rational w = h.at(a, b) * h.at(b, c) * h.at(a, c);
        if (w != 0) states.push_back({{a, b, c}, std::move(w)});
      }
    }
  }
  const double combos = std::pow(static_cast<double>(states.size()), 3);
  if (combos > 1.0e9) throw CapExceeded("row-assignment count above cap", combos);
  // Column edges between two rows: product over the three columns.
  const std::size_t s = states.size();
  std::vector<Rational> link(s * s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      Rational w = 1;
      for (int col = 0; col < 3 && w != 0; ++col) w *= h.at(states[i].x[col], states[j].x[col]);
      link[i * s + j] = std::move(w);
    }
  }
  Rational total = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      const Rational& lij = link[i * s + j];
      if (lij == 0) continue;
      const Rational head = states[i].weight * states[j].weight * lij;
      for (std::size_t k = 0; k < s; ++k) {
        if (link[j * s + k] == 0 || link[i * s + k] == 0) continue;
        total += head * states[k].weight * link[j * s + k] * link[i * s + k];
      }
    }
  }
  total.canonicalize();
  return total;
}

G1Check check_G1(const WeightedGraph& h) {
  const SimpleGraph g1 = rook_graph_g1();
  G1Check out;
  out.dp_value = hom_count(g1, h);
  out.row_value = g1_row_assignment_count(h);
  out.agree = out.dp_value == out.row_value;
  if (out.agree && out.dp_value < 0) {
    WitnessCertificate cert;
    cert.target = h;
    cert.hom_value = out.dp_value;
    cert.method = WitnessMethod::Manual;
    out.certificate = std::move(cert);
  }
  return out;
}

G1Check check_G1() { return check_G1(build_paper_witness_H()); }

SimpleGraph survivor_g2() {
  SimpleGraph g(10);
  for (int i = 0; i < 5; ++i) {
    const int j = (i + 1) % 5;
    g.add_edge(i, j);
    g.add_edge(i, 5 + j);
    g.add_edge(5 + i, j);
    g.add_edge(5 + i, 5 + j);
  }
  return g;
}

SimpleGraph survivor_g3() {
  SimpleGraph g(10);
  constexpr std::array<int, 6> kCycle{0, 1, 3, 5, 4, 2};
  for (std::size_t i = 0; i < kCycle.size(); ++i) g.add_edge(kCycle[i], kCycle[(i + 1) % kCycle.size()]);
  for (int a = 0; a < 6; ++a) {
    for (int b = 6; b < 10; ++b) g.add_edge(a, b);
  }
  return g;
}

SimpleGraph survivor_g4() {
  SimpleGraph g(10);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      if (a != b) g.add_edge(a, 5 + b);
    }
  }
  return g;
}

}  // namespace posgraph
