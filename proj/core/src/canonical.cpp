#include "posgraph/canonical.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <numeric>

namespace posgraph {

namespace {

using Cells = std::vector<VertexMask>;
using Code = std::array<std::uint32_t, kMaxVertices>;
using Perm = std::array<int, kMaxVertices>;

// Split every cell by neighbour counts into every other cell until stable.
// Sub-cells are ordered by increasing count, so the result depends only on
// the structure of (g, cells) and not on vertex names.
void refine(const SimpleGraph& g, Cells& cells) {
  const int n = g.order();
  bool changed = true;
  while (changed && static_cast<int>(cells.size()) < n) {
    changed = false;
    for (std::size_t s = 0; s < cells.size() && !changed; ++s) {
      const VertexMask splitter = cells[s];
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const VertexMask cell = cells[c];
        if (std::has_single_bit(cell)) continue;
        std::array<VertexMask, kMaxVertices + 1> by_count{};
        int distinct = 0;
        for (VertexMask rest = cell; rest; rest &= rest - 1) {
          const int v = std::countr_zero(rest);
          const int k = std::popcount(g.neighbors(v) & splitter);
          if (by_count[k] == 0) ++distinct;
          by_count[k] |= bit(v);
        }
        if (distinct == 1) continue;
        Cells pieces;
        for (VertexMask piece : by_count) {
          if (piece) pieces.push_back(piece);
        }
        cells.erase(cells.begin() + static_cast<long>(c));
        cells.insert(cells.begin() + static_cast<long>(c), pieces.begin(), pieces.end());
        changed = true;
        break;
      }
    }
  }
}

class LabelSearch {
 public:
  explicit LabelSearch(const SimpleGraph& g) : g_(g), n_(g.order()) {}

  void run() {
    Cells cells{all_vertices(n_)};
    visit(std::move(cells));
  }

  const Perm& best_lab() const { return best_lab_; }

 private:
  static constexpr int kContinue = INT_MAX;

  int visit(Cells cells) {
    refine(g_, cells);
    if (static_cast<int>(cells.size()) == n_) return leaf(cells);
    const int depth = static_cast<int>(path_.size());
    std::size_t target = 0;
    while (std::has_single_bit(cells[target])) ++target;
    const VertexMask cell = cells[target];
    VertexMask tried = 0;
    for (VertexMask rest = cell; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if (tried && equivalent_to_tried(v, tried)) continue;
      tried |= bit(v);
      Cells child = cells;
      child[target] = cell & ~bit(v);
      child.insert(child.begin() + static_cast<long>(target), bit(v));
      path_.push_back(v);
      const int back_to = visit(std::move(child));
      path_.pop_back();
      if (back_to < depth) return back_to;
    }
    return kContinue;
  }

  int leaf(const Cells& cells) {
    Perm lab{};
    for (int i = 0; i < n_; ++i) lab[i] = std::countr_zero(cells[i]);
    Code code{};
    for (int i = 0; i < n_; ++i) {
      std::uint32_t row = 0;
      for (int j = 0; j < n_; ++j) {
        if (g_.adjacent(lab[i], lab[j])) row |= 1U << (n_ - 1 - j);
      }
      code[i] = row;
    }
    if (!have_first_) {
      have_first_ = true;
      first_code_ = best_code_ = code;
      first_lab_ = best_lab_ = lab;
      first_path_ = best_path_ = path_;
      return kContinue;
    }
    if (code == first_code_) {
      record_automorphism(first_lab_, lab);
      return common_prefix(first_path_);
    }
    if (code == best_code_) {
      record_automorphism(best_lab_, lab);
      return common_prefix(best_path_);
    }
    if (code < best_code_) {
      best_code_ = code;
      best_lab_ = lab;
      best_path_ = path_;
    }
    return kContinue;
  }

  void record_automorphism(const Perm& from, const Perm& to) {
    Perm gamma{};
    for (int i = 0; i < n_; ++i) gamma[from[i]] = to[i];
    automorphisms_.push_back(gamma);
  }

  int common_prefix(const std::vector<int>& other) const {
    std::size_t c = 0;
    while (c < path_.size() && c < other.size() && path_[c] == other[c]) ++c;
    return static_cast<int>(c);
  }

  // Orbit test under the automorphisms found so far that fix the current path
  // pointwise; such automorphisms map the subtree under v onto an explored one.
  bool equivalent_to_tried(int v, VertexMask tried) const {
    std::array<int, kMaxVertices> parent{};
    std::iota(parent.begin(), parent.begin() + n_, 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const Perm& gamma : automorphisms_) {
      bool fixes = true;
      for (int p : path_) {
        if (gamma[p] != p) {
          fixes = false;
          break;
        }
      }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < n_; ++x) parent[find(x)] = find(gamma[x]);
    }
    if (!any) return false;
    const int root = find(v);
    for (VertexMask rest = tried; rest; rest &= rest - 1) {
      if (find(std::countr_zero(rest)) == root) return true;
    }
    return false;
  }

  const SimpleGraph& g_;
  int n_;
  std::vector<int> path_;
  std::vector<Perm> automorphisms_;
  bool have_first_ = false;
  Code first_code_{}, best_code_{};
  Perm first_lab_{}, best_lab_{};
  std::vector<int> first_path_, best_path_;
};

}  // namespace

CanonicalForm canonical_form(const SimpleGraph& g) {
  LabelSearch search(g);
  search.run();
  const Perm& lab = search.best_lab();
  CanonicalForm out;
  out.relabeling.assign(static_cast<std::size_t>(g.order()), 0);
  for (int i = 0; i < g.order(); ++i) out.relabeling[lab[i]] = i;
  out.graph6 = write_graph6(relabel(g, out.relabeling));
  return out;
}

bool are_isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
  if (a.order() != b.order() || a.edge_count() != b.edge_count()) return false;
  return canonical_key(a) == canonical_key(b);
}

}  // namespace posgraph
