#include "posgraph/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "posgraph/errors.hpp"

namespace posgraph {

HomPolynomial::HomPolynomial(int target_order, std::vector<VarPair> variables, std::vector<Term> terms)
    : target_order_(target_order), variables_(std::move(variables)), terms_(std::move(terms)) {
  for (const VarPair& p : variables_) {
    if (p.i < 0 || p.i > p.j || p.j >= target_order_) throw std::invalid_argument("bad polynomial variable");
  }
  std::erase_if(terms_, [](const Term& t) { return t.coefficient == 0; });
  for (const Term& t : terms_) {
    if (t.exponents.size() != variables_.size()) throw std::invalid_argument("exponent vector length mismatch");
    const int d = std::accumulate(t.exponents.begin(), t.exponents.end(), 0);
    if (degree_ >= 0 && d != degree_) throw std::invalid_argument("polynomial is not homogeneous");
    degree_ = d;
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.exponents > b.exponents; });
  build_sparse();
}

void HomPolynomial::build_sparse() {
  sparse_offset_.assign(1, 0);
  sparse_var_.clear();
  sparse_exp_.clear();
  coefficient_d_.clear();
  for (const Term& t : terms_) {
    for (std::size_t v = 0; v < t.exponents.size(); ++v) {
      if (t.exponents[v] == 0) continue;
      sparse_var_.push_back(static_cast<std::uint16_t>(v));
      sparse_exp_.push_back(t.exponents[v]);
    }
    sparse_offset_.push_back(static_cast<std::uint32_t>(sparse_var_.size()));
    coefficient_d_.push_back(static_cast<double>(t.coefficient));
  }
}

Rational HomPolynomial::evaluate(const WeightedGraph& matrix) const {
  if (matrix.order() < target_order_) throw std::invalid_argument("matrix smaller than polynomial target");
  std::vector<Rational> values;
  values.reserve(variables_.size());
  for (const VarPair& p : variables_) values.push_back(matrix.at(p.i, p.j));
  return evaluate(values);
}

Rational HomPolynomial::evaluate(std::span<const Rational> values) const {
  if (values.size() != variables_.size()) throw std::invalid_argument("point dimension mismatch");
  Rational sum = 0;
  Rational power;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    Rational prod = static_cast<long>(terms_[t].coefficient);
    for (std::uint32_t k = sparse_offset_[t]; k < sparse_offset_[t + 1] && prod != 0; ++k) {
      mpz_pow_ui(power.get_num_mpz_t(), values[sparse_var_[k]].get_num_mpz_t(), sparse_exp_[k]);
      mpz_pow_ui(power.get_den_mpz_t(), values[sparse_var_[k]].get_den_mpz_t(), sparse_exp_[k]);
      prod *= power;
    }
    sum += prod;
  }
  sum.canonicalize();
  return sum;
}

double HomPolynomial::value(std::span<const double> point) const {
  if (point.size() != variables_.size()) throw std::invalid_argument("point dimension mismatch");
  double sum = 0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double prod = coefficient_d_[t];
    for (std::uint32_t k = sparse_offset_[t]; k < sparse_offset_[t + 1]; ++k) {
      double x = point[sparse_var_[k]];
      double p = x;
      for (int e = 1; e < sparse_exp_[k]; ++e) p *= x;
      prod *= p;
    }
    sum += prod;
  }
  return sum;
}

double HomPolynomial::value_and_gradient(std::span<const double> point, std::span<double> gradient) const {
  const std::size_t nv = variables_.size();
  if (point.size() != nv || gradient.size() != nv) throw std::invalid_argument("point dimension mismatch");
  std::fill(gradient.begin(), gradient.end(), 0.0);
  const int d = std::max(degree_, 0);
  std::vector<double> powers(nv * static_cast<std::size_t>(d + 1));
  for (std::size_t v = 0; v < nv; ++v) {
    double p = 1;
    for (int e = 0; e <= d; ++e) {
      powers[v * (d + 1) + e] = p;
      p *= point[v];
    }
  }
  std::vector<double> prefix;
  double sum = 0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const std::uint32_t lo = sparse_offset_[t];
    const std::uint32_t hi = sparse_offset_[t + 1];
    const std::size_t len = hi - lo;
    prefix.assign(len + 1, 1.0);
    for (std::size_t k = 0; k < len; ++k) {
      prefix[k + 1] = prefix[k] * powers[sparse_var_[lo + k] * (d + 1) + sparse_exp_[lo + k]];
    }
    const double c = coefficient_d_[t];
    sum += c * prefix[len];
    double suffix = 1;
    for (std::size_t k = len; k-- > 0;) {
      const std::size_t v = sparse_var_[lo + k];
      const int e = sparse_exp_[lo + k];
      gradient[v] += c * e * powers[v * (d + 1) + e - 1] * prefix[k] * suffix;
      suffix *= powers[v * (d + 1) + e];
    }
  }
  return sum;
}

WeightedGraph HomPolynomial::to_target(std::span<const Rational> values) const {
  if (values.size() != variables_.size()) throw std::invalid_argument("point dimension mismatch");
  WeightedGraph h(std::max(target_order_, 1));
  for (std::size_t k = 0; k < variables_.size(); ++k) h.set(variables_[k].i, variables_[k].j, values[k]);
  return h;
}

std::string HomPolynomial::serialize() const {
  std::ostringstream out;
  out << "vars";
  for (const VarPair& p : variables_) out << ' ' << p.i << ',' << p.j;
  out << '\n';
  for (const Term& t : terms_) {
    out << t.coefficient;
    for (auto e : t.exponents) out << ' ' << static_cast<int>(e);
    out << '\n';
  }
  return out.str();
}

HomPolynomial HomPolynomial::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("vars")) throw ParseError("missing 'vars' header", 0);
  std::istringstream header(line.substr(4));
  std::vector<VarPair> vars;
  int order = 0;
  std::string token;
  std::size_t offset = line.size() + 1;
  while (header >> token) {
    VarPair p;
    const auto comma = token.find(',');
    if (comma == std::string::npos) throw ParseError("variable must be 'i,j'", 0);
    auto r1 = std::from_chars(token.data(), token.data() + comma, p.i);
    auto r2 = std::from_chars(token.data() + comma + 1, token.data() + token.size(), p.j);
    if (r1.ec != std::errc{} || r2.ec != std::errc{}) throw ParseError("bad variable index", 0);
    order = std::max(order, p.j + 1);
    vars.push_back(p);
  }
  std::vector<Term> terms;
  while (std::getline(in, line)) {
    if (line.empty()) {
      offset += 1;
      continue;
    }
    std::istringstream row(line);
    Term t;
    if (!(row >> t.coefficient)) throw ParseError("bad coefficient", offset);
    int e = 0;
    while (row >> e) {
      if (e < 0 || e > 255) throw ParseError("exponent out of range", offset);
      t.exponents.push_back(static_cast<std::uint8_t>(e));
    }
    if (t.exponents.size() != vars.size()) throw ParseError("exponent count does not match header", offset);
    terms.push_back(std::move(t));
    offset += line.size() + 1;
  }
  return HomPolynomial(order, std::move(vars), std::move(terms));
}

HomPolynomial hom_polynomial(const SimpleGraph& g, int m, const BlockConstraint& blocks, double cap) {
  if (m < 1) throw std::invalid_argument("target order must be positive");
  const int n = g.order();
  blocks.validate(n, m);
  std::vector<std::vector<int>> domains;
  if (blocks.empty()) {
    std::vector<int> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);
    domains.assign(static_cast<std::size_t>(n), all);
  } else {
    domains = blocks.allowed;
  }
  double maps = 1;
  for (const auto& d : domains) maps *= static_cast<double>(d.size());
  if (maps > cap) throw CapExceeded("symbolic map enumeration above cap", maps);

  std::vector<VarPair> vars;
  if (blocks.empty()) {
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) vars.push_back({i, j});
    }
  } else {
    std::vector<bool> touched(static_cast<std::size_t>(m * m), false);
    for (auto [u, v] : g.edges()) {
      for (int a : domains[u]) {
        for (int b : domains[v]) touched[std::min(a, b) * m + std::max(a, b)] = true;
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        if (touched[i * m + j]) vars.push_back({i, j});
      }
    }
  }
  std::vector<int> var_index(static_cast<std::size_t>(m * m), -1);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    var_index[vars[k].i * m + vars[k].j] = var_index[vars[k].j * m + vars[k].i] = static_cast<int>(k);
  }

  std::unordered_map<std::string, std::int64_t> table;
  std::string exponents(vars.size(), '\0');
  std::vector<int> image(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      ++table[exponents];
      return;
    }
    const VertexMask earlier = g.neighbors(v) & all_vertices(v);
    for (int x : domains[v]) {
      for (VertexMask a = earlier; a; a &= a - 1) {
        ++exponents[static_cast<std::size_t>(var_index[image[std::countr_zero(a)] * m + x])];
      }
      image[v] = x;
      self(self, v + 1);
      for (VertexMask a = earlier; a; a &= a - 1) {
        --exponents[static_cast<std::size_t>(var_index[image[std::countr_zero(a)] * m + x])];
      }
    }
  };
  rec(rec, 0);

  std::vector<HomPolynomial::Term> terms;
  terms.reserve(table.size());
  for (auto& [key, coeff] : table) {
    HomPolynomial::Term t;
    t.exponents.assign(key.begin(), key.end());
    t.coefficient = coeff;
    terms.push_back(std::move(t));
  }
  return HomPolynomial(m, std::move(vars), std::move(terms));
}

}  // namespace posgraph
