#include "posgraph/hom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <type_traits>

#include "posgraph/errors.hpp"

namespace posgraph {

__extension__ using Int128 = __int128;
__extension__ using UInt128 = unsigned __int128;

// ---------------------------------------------------------------------------
// Elimination order

EliminationOrder min_fill_order(const SimpleGraph& g) {
  const int n = g.order();
  std::array<VertexMask, kMaxVertices> adj{};
  for (int v = 0; v < n; ++v) adj[v] = g.neighbors(v);
  VertexMask remaining = all_vertices(n);
  EliminationOrder out;
  while (remaining) {
    int best = -1;
    int best_fill = 0;
    for (VertexMask rest = remaining; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      const VertexMask nb = adj[v] & remaining;
      int fill = 0;
      for (VertexMask a = nb; a; a &= a - 1) {
        const int u = std::countr_zero(a);
        fill += std::popcount(nb & ~adj[u] & ~bit(u));
      }
      if (best < 0 || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    const VertexMask nb = adj[best] & remaining;
    for (VertexMask a = nb; a; a &= a - 1) adj[std::countr_zero(a)] |= nb & ~bit(std::countr_zero(a));
    out.width = std::max(out.width, std::popcount(nb) + 1);
    out.order.push_back(best);
    remaining &= ~bit(best);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BlockConstraint

void BlockConstraint::validate(int graph_order, int target_order) const {
  if (allowed.empty()) return;
  if (static_cast<int>(allowed.size()) != graph_order) throw std::invalid_argument("block constraint size mismatch");
  for (const auto& set : allowed) {
    if (set.empty()) throw std::invalid_argument("block constraint with an empty allowed set");
    std::vector<int> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("block constraint with a repeated target vertex");
    }
    if (sorted.front() < 0 || sorted.back() >= target_order) {
      throw std::invalid_argument("block constraint target vertex out of range");
    }
  }
}

double BlockConstraint::map_count() const {
  double count = 1;
  for (const auto& set : allowed) count *= static_cast<double>(set.size());
  return count;
}

namespace {

std::vector<std::vector<int>> domains_for(int n, int m, const BlockConstraint& blocks) {
  if (!blocks.empty()) return blocks.allowed;
  std::vector<int> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), 0);
  return std::vector<std::vector<int>>(static_cast<std::size_t>(n), all);
}

std::vector<int> domain_sizes(const std::vector<std::vector<int>>& domains) {
  std::vector<int> sizes;
  for (const auto& d : domains) sizes.push_back(static_cast<int>(d.size()));
  return sizes;
}

// Target weights scaled to integers: w = numerator / denominator.
struct ScaledTarget {
  int m = 0;
  std::vector<BigInt> numerators;
  BigInt denominator = 1;
  double log2_max_abs = 0;  // log2 of the largest |numerator|, -inf if all zero
};

ScaledTarget scale_target(const WeightedGraph& h) {
  ScaledTarget s;
  s.m = h.order();
  for (const Rational& q : h.entries()) {
    if (q != 0) mpz_lcm(s.denominator.get_mpz_t(), s.denominator.get_mpz_t(), q.get_den_mpz_t());
  }
  s.numerators.reserve(h.entries().size());
  BigInt max_abs = 0;
  for (const Rational& q : h.entries()) {
    BigInt a = q.get_num() * (s.denominator / q.get_den());
    if (abs(a) > max_abs) max_abs = abs(a);
    s.numerators.push_back(std::move(a));
  }
  s.log2_max_abs = max_abs == 0 ? -1.0 : std::log2(mpz_get_d(max_abs.get_mpz_t()));
  return s;
}

template <typename T>
T from_big(const BigInt& z) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return z;
  } else if constexpr (std::is_same_v<T, Int128>) {
    // Callers guarantee |z| < 2^63.
    return static_cast<Int128>(z.get_si());
  } else {
    return static_cast<T>(z.get_si());
  }
}

template <typename T>
BigInt to_big(const T& v) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return v;
  } else if constexpr (std::is_same_v<T, Int128>) {
    const bool neg = v < 0;
    UInt128 u = neg ? static_cast<UInt128>(-(v + 1)) + 1 : static_cast<UInt128>(v);
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
    BigInt out = (hi << 64) + lo;
    return neg ? BigInt(-out) : out;
  } else {
    return BigInt(static_cast<long>(v));
  }
}

template <typename T>
bool is_zero(const T& v) {
  if constexpr (std::is_same_v<T, BigInt>) {
    return sgn(v) == 0;
  } else {
    return v == 0;
  }
}

struct Factor {
  std::vector<int> scope;  // vertices of G; scope[0] is the least significant digit
  std::size_t size = 1;
};

template <typename T>
struct TypedFactor : Factor {
  std::vector<T> table;
};

template <typename T>
std::vector<T> typed_weights(const ScaledTarget& target) {
  std::vector<T> weight(target.numerators.size());
  for (std::size_t i = 0; i < weight.size(); ++i) weight[i] = from_big<T>(target.numerators[i]);
  return weight;
}

template <typename T>
T dp_count(const SimpleGraph& g, int m, const std::vector<T>& weight, const std::vector<std::vector<int>>& domains,
           const EliminationOrder& order) {

  std::vector<TypedFactor<T>> factors;
  for (auto [u, v] : g.edges()) {
    TypedFactor<T> f;
    f.scope = {u, v};
    const auto& du = domains[u];
    const auto& dv = domains[v];
    f.size = du.size() * dv.size();
    f.table.resize(f.size);
    for (std::size_t b = 0; b < dv.size(); ++b) {
      for (std::size_t a = 0; a < du.size(); ++a) {
        f.table[b * du.size() + a] = weight[static_cast<std::size_t>(du[a] * m + dv[b])];
      }
    }
    factors.push_back(std::move(f));
  }

  T scalar = 1;
  for (int v : order.order) {
    std::vector<TypedFactor<T>> touching;
    std::vector<TypedFactor<T>> rest;
    for (auto& f : factors) {
      if (std::find(f.scope.begin(), f.scope.end(), v) != f.scope.end()) {
        touching.push_back(std::move(f));
      } else {
        rest.push_back(std::move(f));
      }
    }
    factors = std::move(rest);
    if (touching.empty()) {
      scalar *= static_cast<T>(static_cast<long>(domains[v].size()));
      continue;
    }
    // Union scope with v first.
    std::vector<int> scope{v};
    for (const auto& f : touching) {
      for (int u : f.scope) {
        if (std::find(scope.begin(), scope.end(), u) == scope.end()) scope.push_back(u);
      }
    }
    std::sort(scope.begin() + 1, scope.end());
    const std::size_t k = scope.size();
    std::vector<std::size_t> radix(k);
    for (std::size_t p = 0; p < k; ++p) radix[p] = domains[scope[p]].size();

    // stride[f][p]: step in factor f's table when digit p of the union advances.
    const std::size_t nf = touching.size();
    std::vector<std::vector<std::size_t>> stride(nf, std::vector<std::size_t>(k, 0));
    for (std::size_t fi = 0; fi < nf; ++fi) {
      std::size_t s = 1;
      for (int u : touching[fi].scope) {
        const auto p = static_cast<std::size_t>(std::find(scope.begin(), scope.end(), u) - scope.begin());
        stride[fi][p] = s;
        s *= domains[u].size();
      }
    }

    TypedFactor<T> out;
    out.scope.assign(scope.begin() + 1, scope.end());
    out.size = 1;
    for (std::size_t p = 1; p < k; ++p) out.size *= radix[p];
    out.table.assign(out.size, T(0));

    std::vector<std::size_t> digit(k, 0);
    std::vector<std::size_t> offset(nf, 0);
    const std::size_t inner = radix[0];
    for (std::size_t cell = 0; cell < out.size; ++cell) {
      T sum = 0;
      for (std::size_t x = 0; x < inner; ++x) {
        T prod = touching[0].table[offset[0] + x * stride[0][0]];
        for (std::size_t fi = 1; fi < nf && !is_zero(prod); ++fi) {
          prod *= touching[fi].table[offset[fi] + x * stride[fi][0]];
        }
        if (!is_zero(prod)) sum += prod;
      }
      out.table[cell] = std::move(sum);
      for (std::size_t p = 1; p < k; ++p) {
        ++digit[p];
        for (std::size_t fi = 0; fi < nf; ++fi) offset[fi] += stride[fi][p];
        if (digit[p] < radix[p]) break;
        for (std::size_t fi = 0; fi < nf; ++fi) offset[fi] -= stride[fi][p] * radix[p];
        digit[p] = 0;
      }
    }
    if (out.scope.empty()) {
      scalar *= out.table[0];
    } else {
      factors.push_back(std::move(out));
    }
  }
  return scalar;
}

template <typename T>
T brute_count(const SimpleGraph& g, const ScaledTarget& target, const std::vector<std::vector<int>>& domains) {
  const int n = g.order();
  const int m = target.m;
  std::vector<T> weight(target.numerators.size());
  for (std::size_t i = 0; i < weight.size(); ++i) weight[i] = from_big<T>(target.numerators[i]);
  std::vector<int> image(static_cast<std::size_t>(n), 0);
  // Only neighbours with smaller index are multiplied in at each level.
  T total = 0;
  auto rec = [&](auto&& self, int v, const T& partial) -> void {
    if (v == n) {
      total += partial;
      return;
    }
    const VertexMask earlier = g.neighbors(v) & all_vertices(v);
    for (int x : domains[v]) {
      T prod = partial;
      for (VertexMask a = earlier; a && !is_zero(prod); a &= a - 1) {
        prod *= weight[static_cast<std::size_t>(image[std::countr_zero(a)] * m + x)];
      }
      if (is_zero(prod)) continue;
      image[v] = x;
      self(self, v + 1, prod);
    }
  };
  rec(rec, 0, T(1));
  return total;
}

// log2 bound on |any partial sum| for the integer kernels.
double magnitude_bits(const SimpleGraph& g, const ScaledTarget& target, const std::vector<std::vector<int>>& domains) {
  if (!(target.log2_max_abs < 60)) return 1.0e9;  // entries alone need big integers
  double bits = 2;
  for (const auto& d : domains) bits += std::log2(static_cast<double>(d.size()));
  if (target.log2_max_abs > 0) bits += target.log2_max_abs * g.edge_count();
  return bits;
}

template <template <typename> class Kernel, typename... Args>
BigInt dispatch(double bits, Args&&... args) {
  if (bits < 62) return to_big(Kernel<long>::run(std::forward<Args>(args)...));
  if (bits < 126) return to_big(Kernel<Int128>::run(std::forward<Args>(args)...));
  return Kernel<BigInt>::run(std::forward<Args>(args)...);
}

template <typename T>
struct DpKernel {
  static T run(const SimpleGraph& g, const ScaledTarget& t, const std::vector<std::vector<int>>& d,
               const EliminationOrder& o) {
    return dp_count<T>(g, t.m, typed_weights<T>(t), d, o);
  }
};

template <typename T>
struct BruteKernel {
  static T run(const SimpleGraph& g, const ScaledTarget& t, const std::vector<std::vector<int>>& d) {
    return brute_count<T>(g, t, d);
  }
};

Rational unscale(const BigInt& count, const ScaledTarget& target, int edges) {
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), target.denominator.get_mpz_t(), static_cast<unsigned long>(edges));
  Rational q(count, den);
  q.canonicalize();
  return q;
}

Rational count_with(const SimpleGraph& g, const WeightedGraph& h, const BlockConstraint& blocks,
                    const HomOptions& options) {
  blocks.validate(g.order(), h.order());
  const auto domains = domains_for(g.order(), h.order(), blocks);
  const ScaledTarget target = scale_target(h);
  const double bits = magnitude_bits(g, target, domains);
  const double peak = dp_peak_cells(g, domain_sizes(domains));
  if (peak <= options.max_table_cells) {
    const EliminationOrder order = min_fill_order(g);
    return unscale(dispatch<DpKernel>(bits, g, target, domains, order), target, g.edge_count());
  }
  double maps = 1;
  for (const auto& d : domains) maps *= static_cast<double>(d.size());
  if (maps <= options.brute_force_cap) {
    return unscale(dispatch<BruteKernel>(bits, g, target, domains), target, g.edge_count());
  }
  throw CapExceeded("homomorphism DP table above memory budget", peak);
}

}  // namespace

BigInt hom_count_integer(const SimpleGraph& g, int m, std::span<const long> weights, const EliminationOrder& order) {
  if (m < 1 || weights.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw std::invalid_argument("weight matrix size mismatch");
  }
  long max_abs = 0;
  for (long w : weights) max_abs = std::max(max_abs, w < 0 ? -w : w);
  const auto domains = domains_for(g.order(), m, BlockConstraint{});
  double bits = 2 + g.order() * std::log2(static_cast<double>(m));
  if (max_abs > 1) bits += std::log2(static_cast<double>(max_abs)) * g.edge_count();
  if (max_abs >= (1L << 60)) bits = 1.0e9;
  if (bits < 62) {
    return BigInt(dp_count<long>(g, m, std::vector<long>(weights.begin(), weights.end()), domains, order));
  }
  if (bits < 126) {
    return to_big(dp_count<Int128>(g, m, std::vector<Int128>(weights.begin(), weights.end()), domains, order));
  }
  std::vector<BigInt> big;
  for (long w : weights) big.emplace_back(w);
  return dp_count<BigInt>(g, m, big, domains, order);
}

double dp_peak_cells(const SimpleGraph& g, const std::vector<int>& sizes) {
  const EliminationOrder order = min_fill_order(g);
  std::array<VertexMask, kMaxVertices> adj{};
  for (int v = 0; v < g.order(); ++v) adj[v] = g.neighbors(v);
  VertexMask remaining = all_vertices(g.order());
  double peak = 1;
  for (int v : order.order) {
    const VertexMask nb = adj[v] & remaining;
    double cells = static_cast<double>(sizes[v]);
    for (VertexMask a = nb; a; a &= a - 1) cells *= sizes[std::countr_zero(a)];
    peak = std::max(peak, cells);
    for (VertexMask a = nb; a; a &= a - 1) adj[std::countr_zero(a)] |= nb & ~bit(std::countr_zero(a));
    remaining &= ~bit(v);
  }
  return peak;
}

Rational hom_count(const SimpleGraph& g, const WeightedGraph& h, const HomOptions& options) {
  return count_with(g, h, BlockConstraint{}, options);
}

Rational hom_count_restricted(const SimpleGraph& g, const WeightedGraph& h, const BlockConstraint& blocks,
                              const HomOptions& options) {
  return count_with(g, h, blocks, options);
}

Rational hom_bruteforce(const SimpleGraph& g, const WeightedGraph& h, const BlockConstraint& blocks, double cap) {
  blocks.validate(g.order(), h.order());
  const auto domains = domains_for(g.order(), h.order(), blocks);
  double maps = 1;
  for (const auto& d : domains) maps *= static_cast<double>(d.size());
  if (maps > cap) throw CapExceeded("brute-force map count above cap", maps);
  const ScaledTarget target = scale_target(h);
  const double bits = magnitude_bits(g, target, domains);
  return unscale(dispatch<BruteKernel>(bits, g, target, domains), target, g.edge_count());
}

Rational t_density(const SimpleGraph& g, const WeightedGraph& h, const HomOptions& options) {
  BigInt total;
  mpz_ui_pow_ui(total.get_mpz_t(), static_cast<unsigned long>(h.order()), static_cast<unsigned long>(g.order()));
  Rational t = hom_count(g, h, options) / Rational(total);
  t.canonicalize();
  return t;
}

IdentityReport hom_dp_vs_bruteforce(const SimpleGraph& g, const WeightedGraph& h) {
  IdentityReport r;
  HomOptions dp_only;
  dp_only.brute_force_cap = 0;
  r.lhs = hom_count(g, h, dp_only);
  r.rhs = hom_bruteforce(g, h);
  r.holds = r.lhs == r.rhs;
  return r;
}

IdentityReport product_law_check(const SimpleGraph& g1, const SimpleGraph& g2, const WeightedGraph& h) {
  IdentityReport r;
  r.lhs = t_density(disjoint_union(g1, g2), h);
  r.rhs = t_density(g1, h) * t_density(g2, h);
  r.holds = r.lhs == r.rhs;
  return r;
}

IdentityReport power_law_check(const SimpleGraph& g, const LoopedGraph& pattern, const WeightedGraph& h) {
  IdentityReport r;
  const SimpleGraph product = categorical_product(LoopedGraph::from_simple(g), pattern).to_simple();
  r.lhs = t_density(product, h);
  r.rhs = t_density(g, target_power(h, pattern));
  r.holds = r.lhs == r.rhs;
  return r;
}

WeightedGraph target_power(const WeightedGraph& h, const LoopedGraph& pattern, int max_order) {
  const int m = h.order();
  const int k = pattern.order();
  const double order = std::pow(static_cast<double>(m), k);
  if (order > max_order) throw CapExceeded("target_power order above cap", order);
  const int size = static_cast<int>(order);
  std::vector<Edge> arcs;  // ordered pattern edges
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (pattern.adjacent(i, j)) arcs.emplace_back(i, j);
    }
  }
  auto digit = [m](int x, int i) {
    for (int s = 0; s < i; ++s) x /= m;
    return x % m;
  };
  WeightedGraph out(size);
  for (int x = 0; x < size; ++x) {
    for (int y = x; y < size; ++y) {
      Rational w = 1;
      for (auto [i, j] : arcs) {
        w *= h.at(digit(x, i), digit(y, j));
        if (w == 0) break;
      }
      out.set(x, y, w);
    }
  }
  return out;
}

}  // namespace posgraph
