#include "posgraph/even_hom.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

#include "posgraph/errors.hpp"
#include "posgraph/hom.hpp"

namespace posgraph {

namespace {

constexpr int kMaxQuotientOrder = 10;

void fill_multiplicity(const SimpleGraph& g, QuotientMap& q) {
  const int k = q.class_count;
  q.multiplicity.assign(static_cast<std::size_t>(k * k), 0);
  for (auto [u, v] : g.edges()) {
    const int a = q.class_of[u];
    const int b = q.class_of[v];
    if (a == b) throw std::invalid_argument("adjacent vertices share a quotient class");
    ++q.multiplicity[a * k + b];
    ++q.multiplicity[b * k + a];
  }
}

}  // namespace

QuotientMap quotient_from_labels(const SimpleGraph& g, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != g.order()) throw std::invalid_argument("label count mismatch");
  QuotientMap q;
  std::map<int, int> renumber;
  for (int label : labels) {
    auto [it, inserted] = renumber.emplace(label, q.class_count);
    if (inserted) ++q.class_count;
    q.class_of.push_back(it->second);
  }
  fill_multiplicity(g, q);
  return q;
}

void for_each_quotient(const SimpleGraph& g, const std::function<void(const QuotientMap&)>& sink) {
  const int n = g.order();
  if (n > kMaxQuotientOrder) throw CapExceeded("quotient enumeration limited to 10 vertices", n);
  QuotientMap q;
  q.class_of.assign(static_cast<std::size_t>(n), 0);
  std::array<VertexMask, kMaxVertices> members{};
  auto rec = [&](auto&& self, int v, int classes) -> void {
    if (v == n) {
      q.class_count = classes;
      fill_multiplicity(g, q);
      sink(q);
      return;
    }
    for (int c = 0; c <= classes; ++c) {
      if (c < classes && (members[c] & g.neighbors(v))) continue;
      members[c] |= bit(v);
      q.class_of[v] = c;
      self(self, v + 1, std::max(classes, c + 1));
      members[c] &= ~bit(v);
    }
  };
  rec(rec, 0, 0);
}

std::vector<QuotientMap> enumerate_quotients(const SimpleGraph& g) {
  std::vector<QuotientMap> out;
  for_each_quotient(g, [&](const QuotientMap& q) { out.push_back(q); });
  return out;
}

bool is_even(const QuotientMap& q) {
  return std::all_of(q.multiplicity.begin(), q.multiplicity.end(), [](int m) { return m % 2 == 0; });
}

OddnessProfile oddness(const QuotientMap& q) {
  OddnessProfile out;
  const int k = q.class_count;
  std::vector<bool> odd(static_cast<std::size_t>(k), false);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      if (q.between(a, b) % 2 != 0) {
        out.odd_edges.emplace_back(a, b);
        odd[a] = odd[b] = true;
      }
    }
  }
  for (int a = 0; a < k; ++a) {
    if (odd[a]) out.odd_vertices.push_back(a);
  }
  const int n = static_cast<int>(q.class_of.size());
  out.r_doubled = 2 * (n - k) + static_cast<int>(out.odd_vertices.size());
  return out;
}

std::optional<int> p_value(const SimpleGraph& g) {
  std::optional<int> best;
  for_each_quotient(g, [&](const QuotientMap& q) {
    if (!is_even(q)) return;
    const int deficiency = g.order() - q.class_count;
    if (!best || deficiency < *best) best = deficiency;
  });
  return best;
}

int rbar_doubled(const SimpleGraph& g) {
  int best = 2 * g.order();
  for_each_quotient(g, [&](const QuotientMap& q) { best = std::min(best, oddness(q).r_doubled); });
  return best;
}

EvenReport check_p2_identity(const SimpleGraph& g) {
  if (2 * g.order() > kMaxQuotientOrder) throw CapExceeded("g + g above 10 vertices", 2 * g.order());
  const SimpleGraph g2 = power(g, 2);
  EvenReport r;
  const std::optional<int> p = p_value(g2);
  r.lhs = p ? 2L * *p : -1;
  r.rhs = rbar_doubled(g2);
  r.holds = p.has_value() && r.lhs == r.rhs;
  return r;
}

EvenReport check_rbar_power(const SimpleGraph& g) {
  if (2 * g.order() > kMaxQuotientOrder) throw CapExceeded("g + g above 10 vertices", 2 * g.order());
  EvenReport r;
  r.lhs = rbar_doubled(power(g, 2));
  r.rhs = 2L * rbar_doubled(g);
  r.holds = r.lhs == r.rhs;
  return r;
}

std::optional<QuotientMap> check_evenhalf(const SimpleGraph& g) {
  std::optional<QuotientMap> best;
  for_each_quotient(g, [&](const QuotientMap& q) {
    if (2 * q.class_count < g.order() || !is_even(q)) return;
    if (!best || q.class_count > best->class_count) best = q;
  });
  return best;
}

namespace {

// Homomorphism from the simple quotient graph of q into g, by backtracking.
bool quotient_maps_into(const QuotientMap& q, const SimpleGraph& g) {
  const int k = q.class_count;
  std::vector<int> image(static_cast<std::size_t>(k), -1);
  auto rec = [&](auto&& self, int a) -> bool {
    if (a == k) return true;
    for (int x = 0; x < g.order(); ++x) {
      bool ok = true;
      for (int b = 0; b < a && ok; ++b) {
        if (q.between(a, b) > 0 && !g.adjacent(x, image[b])) ok = false;
      }
      if (!ok) continue;
      image[a] = x;
      if (self(self, a + 1)) return true;
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

std::optional<QuotientMap> check_even_selfhom(const SimpleGraph& g) {
  std::optional<QuotientMap> found;
  for_each_quotient(g, [&](const QuotientMap& q) {
    if (found || !is_even(q)) return;
    if (quotient_maps_into(q, g)) found = q;
  });
  return found;
}

QuotientMap folding_quotient(const SimpleGraph& g, const SymmetryWitness& w) {
  std::vector<int> labels(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) labels[v] = (w.b & bit(v)) ? w.sigma[v] : v;
  return quotient_from_labels(g, labels);
}

ExpectationReport expectation_identity_check(const SimpleGraph& g, int m) {
  if (m < 1) throw std::invalid_argument("target order must be positive");
  const int n = g.order();
  const int pairs = m * (m - 1) / 2;
  const double work = std::ldexp(1.0, pairs) * std::pow(static_cast<double>(m), n);
  if (work > 1.0e7) throw CapExceeded("expectation identity above work cap", work);

  std::vector<Edge> target_edges;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) target_edges.emplace_back(i, j);
  }
  Rational sum = 0;
  for (std::uint32_t pattern = 0; pattern < (1U << pairs); ++pattern) {
    WeightedGraph h(m);
    for (int e = 0; e < pairs; ++e) {
      h.set(target_edges[e].first, target_edges[e].second, (pattern >> e) & 1U ? -1 : 1);
    }
    sum += hom_count(g, h);
  }
  ExpectationReport r;
  r.average = sum / Rational(BigInt(1) << pairs);
  r.average.canonicalize();

  std::vector<int> image(static_cast<std::size_t>(n), 0);
  std::vector<int> count(static_cast<std::size_t>(m * m), 0);
  const auto edges = g.edges();
  while (true) {
    bool proper = true;
    std::fill(count.begin(), count.end(), 0);
    for (auto [u, v] : edges) {
      if (image[u] == image[v]) {
        proper = false;
        break;
      }
      ++count[std::min(image[u], image[v]) * m + std::max(image[u], image[v])];
    }
    if (proper && std::all_of(count.begin(), count.end(), [](int c) { return c % 2 == 0; })) ++r.even_maps;
    int v = 0;
    while (v < n && image[v] == m - 1) image[v++] = 0;
    if (v == n) break;
    ++image[v];
  }
  r.holds = r.average == Rational(r.even_maps);
  return r;
}

}  // namespace posgraph
