#include "posgraph/structure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "posgraph/canonical.hpp"
#include "posgraph/errors.hpp"

namespace posgraph {

// ---------------------------------------------------------------------------
// Symmetry

namespace {

class InvolutionSearch {
 public:
  InvolutionSearch(const SimpleGraph& g, const VertexPartition& classes)
      : g_(g), n_(g.order()), classes_(classes), sigma_(static_cast<std::size_t>(g.order()), -1) {}

  std::optional<SymmetryWitness> run() {
    if (rec(0)) return found_;
    return std::nullopt;
  }

 private:
  bool consistent(int a) const {
    for (int y = 0; y < n_; ++y) {
      if (sigma_[y] < 0) continue;
      if (g_.adjacent(a, y) != g_.adjacent(sigma_[a], sigma_[y])) return false;
    }
    return true;
  }

  bool rec(int v) {
    while (v < n_ && sigma_[v] >= 0) ++v;
    if (v == n_) return split_sides();
    // Fixed point: must not touch another fixed point.
    if ((g_.neighbors(v) & fixed_) == 0) {
      sigma_[v] = v;
      fixed_ |= bit(v);
      if (consistent(v) && rec(v + 1)) return true;
      fixed_ &= ~bit(v);
      sigma_[v] = -1;
    }
    for (int w = v + 1; w < n_; ++w) {
      if (sigma_[w] >= 0 || g_.adjacent(v, w)) continue;
      if (classes_.class_of[w] != classes_.class_of[v]) continue;
      sigma_[v] = w;
      sigma_[w] = v;
      if (consistent(v) && consistent(w) && rec(v + 1)) return true;
      sigma_[v] = sigma_[w] = -1;
    }
    return false;
  }

  // side(x) != side(sigma x) for moved x; side(u) == side(w) on every edge between moved vertices.
  bool split_sides() {
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::vector<int> parity(static_cast<std::size_t>(n_), 0);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      int p = 0;
      while (parent[x] != x) {
        p ^= parity[x];
        x = parent[x];
      }
      return std::pair{x, p};
    };
    auto unite = [&](int x, int y, int diff) {
      auto [rx, px] = find(x);
      auto [ry, py] = find(y);
      if (rx == ry) return (px ^ py) == diff;
      parent[rx] = ry;
      parity[rx] = px ^ py ^ diff;
      return true;
    };
    const VertexMask moved = all_vertices(n_) & ~fixed_;
    for (VertexMask r = moved; r; r &= r - 1) {
      const int x = std::countr_zero(r);
      if (x < sigma_[x] && !unite(x, sigma_[x], 1)) return false;
      for (VertexMask nb = g_.neighbors(x) & moved & ~all_vertices(x + 1); nb; nb &= nb - 1) {
        if (!unite(x, std::countr_zero(nb), 0)) return false;
      }
    }
    SymmetryWitness w;
    w.s = fixed_;
    for (VertexMask r = moved; r; r &= r - 1) {
      const int x = std::countr_zero(r);
      (find(x).second == 0 ? w.a : w.b) |= bit(x);
    }
    w.sigma = sigma_;
    found_ = std::move(w);
    return true;
  }

  const SimpleGraph& g_;
  int n_;
  const VertexPartition& classes_;
  std::vector<int> sigma_;
  VertexMask fixed_ = 0;
  SymmetryWitness found_;
};

}  // namespace

std::optional<SymmetryWitness> symmetry_witness(const SimpleGraph& g) {
  const VertexPartition classes = wl_partition(g);
  auto w = InvolutionSearch(g, classes).run();
  if (w && !verify_symmetry_witness(g, *w)) throw InvariantViolation("symmetry search produced an invalid witness");
  return w;
}

bool verify_symmetry_witness(const SimpleGraph& g, const SymmetryWitness& w) {
  const int n = g.order();
  if (w.sigma.size() != static_cast<std::size_t>(n)) return false;
  if ((w.s & w.a) || (w.s & w.b) || (w.a & w.b)) return false;
  if ((w.s | w.a | w.b) != all_vertices(n)) return false;
  for (int v = 0; v < n; ++v) {
    const int image = w.sigma[v];
    if (image < 0 || image >= n || w.sigma[image] != v) return false;
    if ((w.s & bit(v)) && image != v) return false;
    if ((w.a & bit(v)) && !(w.b & bit(image))) return false;
    if ((w.s & bit(v)) && (g.neighbors(v) & w.s)) return false;
    if ((w.a & bit(v)) && (g.neighbors(v) & w.b)) return false;
  }
  const VertexMask left = w.s | w.a;
  for (int x = 0; x < n; ++x) {
    if (!(left & bit(x))) continue;
    for (int y = 0; y < n; ++y) {
      if (!(left & bit(y))) continue;
      if (g.adjacent(x, y) != g.adjacent(w.sigma[x], w.sigma[y])) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Walk-tree partition

VertexMask VertexPartition::members(int c) const {
  VertexMask m = 0;
  for (std::size_t v = 0; v < class_of.size(); ++v) {
    if (class_of[v] == c) m |= bit(static_cast<int>(v));
  }
  return m;
}

VertexMask VertexPartition::members(const std::vector<int>& classes) const {
  VertexMask m = 0;
  for (int c : classes) m |= members(c);
  return m;
}

namespace {

VertexPartition renumber(const std::vector<std::vector<int>>& signatures) {
  std::map<std::vector<int>, int> ids;
  VertexPartition p;
  for (const auto& sig : signatures) {
    auto [it, inserted] = ids.emplace(sig, static_cast<int>(ids.size()));
    p.class_of.push_back(it->second);
  }
  p.class_count = static_cast<int>(ids.size());
  return p;
}

}  // namespace

VertexPartition refine_once(const SimpleGraph& g, const VertexPartition& p) {
  std::vector<std::vector<int>> signatures;
  for (int v = 0; v < g.order(); ++v) {
    std::vector<int> sig{p.class_of[v]};
    std::vector<int> around;
    for (VertexMask nb = g.neighbors(v); nb; nb &= nb - 1) around.push_back(p.class_of[std::countr_zero(nb)]);
    std::sort(around.begin(), around.end());
    sig.insert(sig.end(), around.begin(), around.end());
    signatures.push_back(std::move(sig));
  }
  return renumber(signatures);
}

VertexPartition wl_partition(const SimpleGraph& g, const VertexPartition& start) {
  VertexPartition current = renumber([&] {
    std::vector<std::vector<int>> s;
    for (int c : start.class_of) s.push_back({c});
    return s;
  }());
  while (true) {
    VertexPartition next = refine_once(g, current);
    if (next.class_count == current.class_count) return next;
    current = std::move(next);
  }
}

VertexPartition wl_partition(const SimpleGraph& g) {
  VertexPartition trivial;
  trivial.class_of.assign(static_cast<std::size_t>(g.order()), 0);
  trivial.class_count = 1;
  return wl_partition(g, trivial);
}

VertexPartition degree_partition(const SimpleGraph& g) {
  std::vector<std::vector<int>> s;
  for (int v = 0; v < g.order(); ++v) s.push_back({g.degree(v)});
  return renumber(s);
}

// ---------------------------------------------------------------------------
// Parity filters

ParityVerdict edge_parity_filter(const SimpleGraph& g) {
  ParityVerdict out;
  if (g.edge_count() % 2 == 0) return out;
  out.passed = false;
  WitnessCertificate cert;
  cert.target = WeightedGraph(1);
  cert.target.set(0, 0, -1);
  cert.hom_value = -1;
  cert.method = WitnessMethod::Manual;
  out.witness = std::move(cert);
  return out;
}

ParityVerdict degree_parity_filter(const SimpleGraph& g) {
  ParityVerdict out;
  std::map<int, int> count;
  for (int v = 0; v < g.order(); ++v) ++count[g.degree(v)];
  for (auto [k, c] : count) {
    if (k % 2 == 1 && c % 2 == 1) {
      out.passed = false;
      out.degree = k;
      break;
    }
  }
  if (out.passed) return out;
  WitnessCertificate cert;
  cert.target = WeightedGraph(2);
  cert.target.set(0, 0, 1);
  cert.target.set(1, 1, 1);
  cert.target.set(0, 1, -1);
  cert.method = WitnessMethod::Manual;
  for (int v = 0; v < g.order(); ++v) cert.restriction.allowed.push_back({g.degree(v) == out.degree ? 0 : 1});
  cert.hom_value = -1;
  out.witness = std::move(cert);
  return out;
}

namespace {

int edges_between(const SimpleGraph& g, VertexMask x, VertexMask y) {
  int count = 0;
  for (VertexMask r = x; r; r &= r - 1) count += std::popcount(g.neighbors(std::countr_zero(r)) & y);
  return count;
}

int spanned_edges(const SimpleGraph& g, VertexMask x) { return edges_between(g, x, x) / 2; }

}  // namespace

WitnessCertificate class_union_witness(const SimpleGraph& g, const VertexPartition& partition,
                                       const std::vector<int>& classes) {
  const int k = partition.class_count;
  WitnessCertificate cert;
  cert.target = WeightedGraph(k);
  std::vector<bool> in_union(static_cast<std::size_t>(k), false);
  for (int c : classes) in_union[c] = true;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) cert.target.set(i, j, in_union[i] && in_union[j] ? -1 : 1);
  }
  for (int v = 0; v < g.order(); ++v) cert.restriction.allowed.push_back({partition.class_of[v]});
  cert.method = WitnessMethod::Manual;
  cert.hom_value = spanned_edges(g, partition.members(classes)) % 2 == 1 ? -1 : 1;
  return cert;
}

ParityVerdict wl_class_parity_check(const SimpleGraph& g, const VertexPartition& partition) {
  ParityVerdict out;
  const int k = partition.class_count;
  for (int c = 0; c < k && out.passed; ++c) {
    if (spanned_edges(g, partition.members(c)) % 2 == 1) {
      out.passed = false;
      out.classes = {c};
    }
  }
  for (int c = 0; c < k && out.passed; ++c) {
    for (int d = c + 1; d < k && out.passed; ++d) {
      if (edges_between(g, partition.members(c), partition.members(d)) % 2 == 1) {
        // Both classes span an even number of edges here, so the union is odd.
        out.passed = false;
        out.classes = {c, d};
      }
    }
  }
  if (!out.passed) out.witness = class_union_witness(g, partition, out.classes);
  return out;
}

std::optional<std::vector<int>> subgraph_minimality_filter(const SimpleGraph& g, const VertexPartition& partition,
                                                           int max_classes) {
  const int k = partition.class_count;
  if (k > max_classes) {
    throw CapExceeded("minimality filter refuses " + std::to_string(k) + " classes", std::ldexp(1.0, k));
  }
  std::vector<VertexMask> members(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) members[c] = partition.members(c);
  for (int size = 1; size < k; ++size) {
    // Subsets of `size` classes in lexicographic order.
    std::vector<int> pick(static_cast<std::size_t>(size));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      VertexMask vertices = 0;
      for (int c : pick) vertices |= members[c];
      if (!is_symmetric(induced_subgraph(g, vertices))) return pick;
      int i = size - 1;
      while (i >= 0 && pick[i] == k - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

SimpleGraph degree_subgraph(const SimpleGraph& g, int k) {
  VertexMask vertices = 0;
  for (int v = 0; v < g.order(); ++v) {
    if (g.degree(v) == k) vertices |= bit(v);
  }
  if (!vertices) throw std::invalid_argument("no vertex of degree " + std::to_string(k));
  return induced_subgraph(g, vertices);
}

// ---------------------------------------------------------------------------
// Trees

namespace {

// Vertex set of the branch hanging off `root` away from `parent`.
VertexMask branch(const SimpleGraph& t, int root, int parent) {
  VertexMask seen = bit(root) | bit(parent);
  VertexMask frontier = bit(root);
  VertexMask out = bit(root);
  while (frontier) {
    const int v = std::countr_zero(frontier);
    frontier &= frontier - 1;
    const VertexMask fresh = t.neighbors(v) & ~seen;
    seen |= fresh;
    out |= fresh;
    frontier |= fresh;
  }
  return out;
}

// AHU code of the rooted subtree at v (parent excluded).
std::string rooted_code(const SimpleGraph& t, int v, int parent) {
  std::vector<std::string> kids;
  for (VertexMask nb = t.neighbors(v); nb; nb &= nb - 1) {
    const int c = std::countr_zero(nb);
    if (c != parent) kids.push_back(rooted_code(t, c, v));
  }
  std::sort(kids.begin(), kids.end());
  std::string out = "(";
  for (const auto& k : kids) out += k;
  return out + ")";
}

// Extends sigma with an isomorphism of the rooted subtrees at x and y (equal codes).
void match_rooted(const SimpleGraph& t, int x, int px, int y, int py, std::vector<int>& sigma) {
  sigma[x] = y;
  sigma[y] = x;
  std::vector<std::pair<std::string, int>> xs;
  std::vector<std::pair<std::string, int>> ys;
  for (VertexMask nb = t.neighbors(x); nb; nb &= nb - 1) {
    const int c = std::countr_zero(nb);
    if (c != px) xs.emplace_back(rooted_code(t, c, x), c);
  }
  for (VertexMask nb = t.neighbors(y); nb; nb &= nb - 1) {
    const int c = std::countr_zero(nb);
    if (c != py) ys.emplace_back(rooted_code(t, c, y), c);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  for (std::size_t i = 0; i < xs.size(); ++i) match_rooted(t, xs[i].second, x, ys[i].second, y, sigma);
}

}  // namespace

TreeVerdict classify_tree(const SimpleGraph& t) {
  if (!is_tree(t)) throw std::invalid_argument("classify_tree needs a tree");
  const int n = t.order();
  std::vector<int> central;
  for (int v = 0; v < n; ++v) {
    bool ok = true;
    for (VertexMask nb = t.neighbors(v); nb && ok; nb &= nb - 1) {
      ok = 2 * std::popcount(branch(t, std::countr_zero(nb), v)) <= n;
    }
    if (ok) central.push_back(v);
  }
  const VertexPartition classes = wl_partition(t);
  TreeVerdict out;
  if (central.size() == 2) {
    std::set<int> cs{classes.class_of[central[0]], classes.class_of[central[1]]};
    out.odd_classes.assign(cs.begin(), cs.end());
    return out;
  }
  const int c = central.front();
  std::map<int, std::vector<int>> by_class;
  for (VertexMask nb = t.neighbors(c); nb; nb &= nb - 1) {
    const int x = std::countr_zero(nb);
    by_class[classes.class_of[x]].push_back(x);
  }
  for (const auto& [k, members] : by_class) {
    if (members.size() % 2 == 1) {
      out.odd_classes = {std::min(classes.class_of[c], k), std::max(classes.class_of[c], k)};
      return out;
    }
  }
  SymmetryWitness w;
  w.sigma.resize(static_cast<std::size_t>(n));
  std::iota(w.sigma.begin(), w.sigma.end(), 0);
  w.s = bit(c);
  for (const auto& [k, members] : by_class) {
    for (std::size_t i = 0; i < members.size(); i += 2) {
      w.a |= branch(t, members[i], c);
      w.b |= branch(t, members[i + 1], c);
      match_rooted(t, members[i], c, members[i + 1], c, w.sigma);
    }
  }
  out.symmetric = true;
  out.witness = std::move(w);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<SimpleGraph> enumerate_symmetric_graphs(int n) {
  if (n < 1 || n > 10) throw std::invalid_argument("symmetric enumeration supports 1..10 vertices");
  std::set<std::string> keys;
  for (int a = 0; 2 * a <= n; ++a) {
    const int s = n - 2 * a;
    // Free bits: pairs inside A, then S-A pairs. S occupies 0..s-1, A s..s+a-1, B after.
    std::vector<Edge> slots;
    for (int i = 0; i < a; ++i) {
      for (int j = i + 1; j < a; ++j) slots.emplace_back(s + i, s + j);
    }
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < a; ++j) slots.emplace_back(i, s + j);
    }
    const std::uint64_t limit = std::uint64_t{1} << slots.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      SimpleGraph g(n);
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if (!((mask >> k) & 1)) continue;
        auto [u, v] = slots[k];
        g.add_edge(u, v);
        const int u2 = u < s ? u : u + a;
        g.add_edge(u2, v + a);
      }
      keys.insert(canonical_key(g));
    }
  }
  std::vector<SimpleGraph> out;
  for (const auto& k : keys) out.push_back(parse_graph6(k));
  return out;
}

}  // namespace posgraph
