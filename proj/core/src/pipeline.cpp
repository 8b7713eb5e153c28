#include "posgraph/pipeline.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/errors.hpp"

#ifndef POSGRAPH_VERSION
#define POSGRAPH_VERSION "0.0.0"
#endif

namespace posgraph {

using Json = nlohmann::ordered_json;

std::string_view toolkit_version() { return POSGRAPH_VERSION; }

// ---------------------------------------------------------------------------
// Names

namespace {

constexpr std::array<std::pair<Verdict, std::string_view>, 4> kVerdictNames{{
    {Verdict::Symmetric, "SYMMETRIC"},
    {Verdict::Nonpositive, "NONPOSITIVE"},
    {Verdict::ExcludedNonminimal, "EXCLUDED_NONMINIMAL"},
    {Verdict::Undecided, "UNDECIDED"},
}};

constexpr std::array<std::pair<Stage, std::string_view>, 11> kStageNames{{
    {Stage::Components, "components"},
    {Stage::EdgeParity, "edge-parity"},
    {Stage::DegreeParity, "degree-parity"},
    {Stage::Symmetry, "symmetry"},
    {Stage::ClassParity, "class-parity"},
    {Stage::MatrixEnum, "matrix-enum"},
    {Stage::SubgraphMinimality, "subgraph-minimality"},
    {Stage::MinimizerFull, "minimizer-full"},
    {Stage::MinimizerRestricted, "minimizer-restricted"},
    {Stage::PaperG1, "paper-g1"},
    {Stage::None, "none"},
}};

}  // namespace

std::string_view to_string(Verdict v) {
  for (auto [value, name] : kVerdictNames) {
    if (value == v) return name;
  }
  return "UNDECIDED";
}

Verdict parse_verdict(std::string_view name) {
  for (auto [value, n] : kVerdictNames) {
    if (n == name) return value;
  }
  throw std::invalid_argument("unknown verdict '" + std::string(name) + "'");
}

std::string_view to_string(Stage s) {
  for (auto [value, name] : kStageNames) {
    if (value == s) return name;
  }
  return "none";
}

Stage parse_stage(std::string_view name) {
  for (auto [value, n] : kStageNames) {
    if (n == name) return value;
  }
  throw std::invalid_argument("unknown stage '" + std::string(name) + "'");
}

std::vector<Stage> default_stages() {
  return {Stage::Components,  Stage::EdgeParity,         Stage::DegreeParity,  Stage::Symmetry,
          Stage::ClassParity, Stage::MatrixEnum,         Stage::SubgraphMinimality,
          Stage::MinimizerFull, Stage::MinimizerRestricted};
}

// ---------------------------------------------------------------------------
// Configuration

void PipelineConfig::validate() const {
  if (stages.empty()) throw std::invalid_argument("at least one stage must be enabled");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i] == Stage::None) throw std::invalid_argument("'none' is not a stage");
    if (std::find(stages.begin(), stages.begin() + static_cast<long>(i), stages[i]) != stages.begin() + static_cast<long>(i)) {
      throw std::invalid_argument("stage listed twice: " + std::string(to_string(stages[i])));
    }
  }
  if (matrix_sizes.empty()) throw std::invalid_argument("matrix_sizes must not be empty");
  for (int s : matrix_sizes) {
    if (s < 1 || s > 4) throw std::invalid_argument("matrix sizes must lie in 1..4");
  }
  if (entry_lo > entry_hi) throw std::invalid_argument("entry_lo above entry_hi");
  if (minimizer.restarts < 0 || minimizer.max_iters < 0) throw std::invalid_argument("negative minimizer budget");
  if (!(minimizer.box > 0)) throw std::invalid_argument("box must be positive");
  if (!(minimizer.backtrack > 0 && minimizer.backtrack < 1)) throw std::invalid_argument("backtrack must lie in (0,1)");
  if (full_orders.empty()) throw std::invalid_argument("full_orders must not be empty");
  for (int m : full_orders) {
    if (m < 1 || m > 6) throw std::invalid_argument("full orders must lie in 1..6");
  }
  if (block_size < 1) throw std::invalid_argument("block_size must be positive");
  if (max_minimality_classes < 1) throw std::invalid_argument("max_minimality_classes must be positive");
  if (!(polynomial_cap > 0)) throw std::invalid_argument("polynomial_cap must be positive");
  if (workers < 1) throw std::invalid_argument("workers must be positive");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
  return value;
}

double parse_double(std::string_view key, std::string_view text) {
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
  }
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw std::invalid_argument("bad value for " + std::string(key) + ": '" + std::string(text) + "'");
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "stages") {
    cfg.stages.clear();
    for (auto name : split(value, ',')) cfg.stages.push_back(parse_stage(name));
  } else if (key == "paper_g1") {
    std::erase(cfg.stages, Stage::PaperG1);
    if (parse_bool(key, value)) cfg.stages.push_back(Stage::PaperG1);
  } else if (key == "matrix_sizes") {
    cfg.matrix_sizes.clear();
    for (auto s : split(value, ',')) cfg.matrix_sizes.push_back(parse_number<int>(key, s));
  } else if (key == "entry_lo") {
    cfg.entry_lo = parse_number<int>(key, value);
  } else if (key == "entry_hi") {
    cfg.entry_hi = parse_number<int>(key, value);
  } else if (key == "restarts") {
    cfg.minimizer.restarts = parse_number<int>(key, value);
  } else if (key == "max_iters") {
    cfg.minimizer.max_iters = parse_number<int>(key, value);
  } else if (key == "armijo") {
    cfg.minimizer.armijo = parse_double(key, value);
  } else if (key == "backtrack") {
    cfg.minimizer.backtrack = parse_double(key, value);
  } else if (key == "box") {
    cfg.minimizer.box = parse_double(key, value);
  } else if (key == "threshold") {
    cfg.minimizer.threshold = parse_double(key, value);
  } else if (key == "full_orders") {
    cfg.full_orders.clear();
    for (auto s : split(value, ',')) cfg.full_orders.push_back(parse_number<int>(key, s));
  } else if (key == "block_size") {
    cfg.block_size = parse_number<int>(key, value);
  } else if (key == "max_minimality_classes") {
    cfg.max_minimality_classes = parse_number<int>(key, value);
  } else if (key == "polynomial_cap") {
    cfg.polynomial_cap = parse_double(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "consistency_checks") {
    cfg.consistency_checks = parse_bool(key, value);
  } else if (key == "record_timing") {
    cfg.record_timing = parse_bool(key, value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(PipelineConfig& cfg, std::string_view text) {
  std::size_t offset = 0;
  long line_no = 0;
  while (offset <= text.size()) {
    const auto end = text.find('\n', offset);
    std::string_view line = text.substr(offset, end == std::string_view::npos ? std::string_view::npos : end - offset);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("config line " + std::to_string(line_no) + ": expected 'key = value'", offset);
      }
      try {
        apply_config_entry(cfg, line.substr(0, eq), line.substr(eq + 1));
      } catch (const std::invalid_argument& e) {
        throw ParseError("config line " + std::to_string(line_no) + ": " + e.what(), offset);
      }
    }
    if (end == std::string_view::npos) break;
    offset = end + 1;
  }
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  PipelineConfig cfg;
  apply_config_text(cfg, buffer.str());
  return cfg;
}

std::uint64_t graph_seed(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Classification

namespace {

struct Outcome {
  Verdict verdict = Verdict::Undecided;
  Stage stage = Stage::None;
  Evidence evidence;
  std::vector<std::string> refusals;
};

std::vector<int> members_of(VertexMask mask) {
  std::vector<int> out;
  for (; mask; mask &= mask - 1) out.push_back(std::countr_zero(mask));
  return out;
}

VertexMask mask_of(const std::vector<int>& vertices) {
  VertexMask m = 0;
  for (int v : vertices) m |= bit(v);
  return m;
}

Outcome nonpositive(Stage stage, WitnessCertificate cert) {
  Outcome o;
  o.verdict = Verdict::Nonpositive;
  o.stage = stage;
  o.evidence = std::move(cert);
  return o;
}

Outcome classify_connected(const SimpleGraph& g, const PipelineConfig& cfg, std::uint64_t seed) {
  std::optional<VertexPartition> wl;
  auto partition = [&]() -> const VertexPartition& {
    if (!wl) wl = wl_partition(g);
    return *wl;
  };
  MinimizerConfig mcfg = cfg.minimizer;
  mcfg.seed = seed;
  bool symmetry_known = false;
  Outcome result;
  std::vector<std::string> refusals;
  auto decided = [&](Outcome o) {
    o.refusals = refusals;
    result = std::move(o);
    return true;
  };

  for (Stage stage : cfg.stages) {
    bool done = false;
    try {
      switch (stage) {
        case Stage::Components:
        case Stage::None:
          break;
        case Stage::EdgeParity: {
          ParityVerdict v = edge_parity_filter(g);
          if (!v.passed) done = decided(nonpositive(stage, std::move(*v.witness)));
          break;
        }
        case Stage::DegreeParity: {
          ParityVerdict v = degree_parity_filter(g);
          if (!v.passed) done = decided(nonpositive(stage, std::move(*v.witness)));
          break;
        }
        case Stage::Symmetry: {
          symmetry_known = true;
          if (auto w = symmetry_witness(g)) {
            Outcome o;
            o.verdict = Verdict::Symmetric;
            o.stage = stage;
            o.evidence = std::move(*w);
            done = decided(std::move(o));
          }
          break;
        }
        case Stage::ClassParity: {
          ParityVerdict v = wl_class_parity_check(g, partition());
          if (!v.passed) done = decided(nonpositive(stage, std::move(*v.witness)));
          break;
        }
        case Stage::MatrixEnum: {
          if (auto c = enumerate_matrix_witness(g, cfg.matrix_sizes, cfg.entry_lo, cfg.entry_hi)) {
            done = decided(nonpositive(stage, std::move(*c)));
          }
          break;
        }
        case Stage::SubgraphMinimality: {
          if (auto classes = subgraph_minimality_filter(g, partition(), cfg.max_minimality_classes)) {
            Outcome o;
            o.verdict = Verdict::ExcludedNonminimal;
            o.stage = stage;
            o.evidence = ClassSubsetEvidence{*classes, partition().members(*classes)};
            done = decided(std::move(o));
          }
          break;
        }
        case Stage::MinimizerFull: {
          for (int m : cfg.full_orders) {
            if (auto c = full_polynomial_witness_search(g, m, mcfg, cfg.polynomial_cap)) {
              done = decided(nonpositive(stage, std::move(*c)));
              break;
            }
          }
          break;
        }
        case Stage::MinimizerRestricted: {
          if (auto c = restricted_witness_search(g, partition(), cfg.block_size, mcfg, cfg.polynomial_cap)) {
            done = decided(nonpositive(stage, std::move(*c)));
          }
          break;
        }
        case Stage::PaperG1: {
          if (g.order() == 9 && g.edge_count() == 18 && are_isomorphic(g, rook_graph_g1())) {
            G1Check check = check_G1();
            if (check.certificate) done = decided(nonpositive(stage, std::move(*check.certificate)));
          }
          break;
        }
      }
    } catch (const CapExceeded&) {
      refusals.emplace_back(to_string(stage));
    }
    if (done) break;
  }
  if (result.verdict == Verdict::Undecided) result.refusals = refusals;
  if (result.verdict == Verdict::Nonpositive && !symmetry_known && cfg.consistency_checks &&
      symmetry_witness(g).has_value()) {
    throw InvariantViolation("graph " + write_graph6(g) + " is symmetric but was found non-positive at stage " +
                             std::string(to_string(result.stage)));
  }
  return result;
}

// Isomorphism from the copy on `from` to the copy on `to`, as global vertex pairs.
std::vector<std::pair<int, int>> copy_isomorphism(const SimpleGraph& g, VertexMask from, VertexMask to) {
  const auto fv = members_of(from);
  const auto tv = members_of(to);
  const CanonicalForm cf = canonical_form(induced_subgraph(g, from));
  const CanonicalForm ct = canonical_form(induced_subgraph(g, to));
  if (cf.graph6 != ct.graph6) throw InvariantViolation("paired components are not isomorphic");
  std::vector<int> by_canonical(tv.size());
  for (std::size_t y = 0; y < tv.size(); ++y) by_canonical[ct.relabeling[y]] = tv[y];
  std::vector<std::pair<int, int>> out;
  for (std::size_t x = 0; x < fv.size(); ++x) out.emplace_back(fv[x], by_canonical[cf.relabeling[x]]);
  return out;
}

Outcome classify_disconnected(const SimpleGraph& g, const PipelineConfig& cfg, std::uint64_t seed) {
  std::vector<std::pair<std::string, std::vector<VertexMask>>> groups;
  for (VertexMask m : component_masks(g)) {
    const std::string key = canonical_key(induced_subgraph(g, m));
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& p) { return p.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {m}});
    } else {
      it->second.push_back(m);
    }
  }

  SymmetryWitness composed;
  composed.sigma.resize(static_cast<std::size_t>(g.order()));
  for (int v = 0; v < g.order(); ++v) composed.sigma[v] = v;
  bool all_symmetric = true;
  std::optional<ComponentEvidence> nonpositive_part;
  std::optional<ComponentEvidence> nonminimal_part;
  std::vector<std::string> refusals;

  for (const auto& [key, masks] : groups) {
    const std::size_t first_pair = masks.size() % 2;
    for (std::size_t i = first_pair; i + 1 < masks.size(); i += 2) {
      for (auto [x, y] : copy_isomorphism(g, masks[i], masks[i + 1])) {
        composed.sigma[x] = y;
        composed.sigma[y] = x;
      }
      composed.a |= masks[i];
      composed.b |= masks[i + 1];
    }
    if (first_pair == 0) continue;

    const VertexMask m = masks.front();
    const SimpleGraph sub = induced_subgraph(g, m);
    Outcome o = classify_connected(sub, cfg, seed);
    refusals.insert(refusals.end(), o.refusals.begin(), o.refusals.end());
    std::optional<SymmetryWitness> local;
    if (o.verdict == Verdict::Symmetric) {
      local = std::get<SymmetryWitness>(o.evidence);
    } else if (o.verdict == Verdict::Nonpositive) {
      all_symmetric = false;
      if (!nonpositive_part) {
        nonpositive_part = ComponentEvidence{m, o.stage, std::get<WitnessCertificate>(std::move(o.evidence))};
      }
      continue;
    } else {
      local = symmetry_witness(sub);
      if (!local) {
        all_symmetric = false;
        if (!nonminimal_part) nonminimal_part = ComponentEvidence{m, o.stage, std::nullopt};
        continue;
      }
    }
    const auto global = members_of(m);
    auto lift = [&](VertexMask local_mask) {
      VertexMask out = 0;
      for (int v : members_of(local_mask)) out |= bit(global[v]);
      return out;
    };
    composed.s |= lift(local->s);
    composed.a |= lift(local->a);
    composed.b |= lift(local->b);
    for (std::size_t v = 0; v < global.size(); ++v) composed.sigma[global[v]] = global[local->sigma[v]];
  }

  Outcome out;
  out.stage = Stage::Components;
  out.refusals = refusals;
  if (nonpositive_part) {
    out.verdict = Verdict::Nonpositive;
    out.evidence = std::move(*nonpositive_part);
  } else if (all_symmetric) {
    if (!verify_symmetry_witness(g, composed)) throw InvariantViolation("composed symmetry witness failed to verify");
    out.verdict = Verdict::Symmetric;
    out.evidence = std::move(composed);
  } else {
    out.verdict = Verdict::ExcludedNonminimal;
    out.evidence = std::move(*nonminimal_part);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

ClassificationRecord classify_canonical(const SimpleGraph& g, const std::string& key, const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ClassificationRecord r;
  r.key = key;
  r.n = g.order();
  r.edges = g.edge_count();
  r.seed = graph_seed(cfg.seed, key);
  r.version = std::string(toolkit_version());
  const bool split = std::find(cfg.stages.begin(), cfg.stages.end(), Stage::Components) != cfg.stages.end() &&
                     !is_connected(g);
  Outcome o = split ? classify_disconnected(g, cfg, r.seed) : classify_connected(g, cfg, r.seed);
  r.verdict = o.verdict;
  r.stage = o.stage;
  r.evidence = std::move(o.evidence);
  r.note = join(o.refusals, ',');
  if (cfg.record_timing) {
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

}  // namespace

ClassificationRecord classify(const SimpleGraph& g, const PipelineConfig& cfg) {
  cfg.validate();
  const CanonicalForm cf = canonical_form(g);
  return classify_canonical(parse_graph6(cf.graph6), cf.graph6, cfg);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json certificate_json(const WitnessCertificate& c) {
  Json j;
  j["kind"] = "certificate";
  j["method"] = std::string(to_string(c.method));
  j["hom"] = to_string(c.hom_value);
  const int m = c.target.order();
  Json rows = Json::array();
  for (int i = 0; i < m; ++i) {
    Json row = Json::array();
    for (int k = 0; k < m; ++k) row.push_back(to_string(c.target.at(i, k)));
    rows.push_back(std::move(row));
  }
  j["target"] = std::move(rows);
  j["restriction"] = c.restriction.empty() ? Json(nullptr) : Json(c.restriction.allowed);
  j["seed"] = c.seed;
  return j;
}

WitnessCertificate certificate_from_json(const Json& j) {
  WitnessCertificate c;
  c.method = parse_witness_method(j.at("method").get<std::string>());
  c.hom_value = parse_rational(j.at("hom").get<std::string>());
  const auto& rows = j.at("target");
  const int m = static_cast<int>(rows.size());
  if (m < 1) throw std::invalid_argument("empty target");
  std::vector<Rational> entries;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("target is not square");
    for (const auto& cell : row) entries.push_back(parse_rational(cell.get<std::string>()));
  }
  c.target = WeightedGraph::from_matrix(m, std::move(entries));
  if (!j.at("restriction").is_null()) c.restriction.allowed = j.at("restriction").get<std::vector<std::vector<int>>>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Json evidence_json(const Evidence& e) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, SymmetryWitness>) {
          Json j;
          j["kind"] = "symmetry";
          j["s"] = members_of(x.s);
          j["a"] = members_of(x.a);
          j["b"] = members_of(x.b);
          j["sigma"] = x.sigma;
          return j;
        } else if constexpr (std::is_same_v<T, WitnessCertificate>) {
          return certificate_json(x);
        } else if constexpr (std::is_same_v<T, ClassSubsetEvidence>) {
          Json j;
          j["kind"] = "class-subset";
          j["classes"] = x.classes;
          j["vertices"] = members_of(x.vertices);
          return j;
        } else {
          Json j;
          j["kind"] = "component";
          j["vertices"] = members_of(x.vertices);
          j["stage"] = std::string(to_string(x.stage));
          j["certificate"] = x.certificate ? certificate_json(*x.certificate) : Json(nullptr);
          return j;
        }
      },
      e);
}

VertexMask checked_mask(const Json& j) {
  std::vector<int> vs = j.get<std::vector<int>>();
  for (int v : vs) {
    if (v < 0 || v >= kMaxVertices) throw std::invalid_argument("vertex out of range");
  }
  return mask_of(vs);
}

Evidence evidence_from_json(const Json& j) {
  if (j.is_null()) return std::monostate{};
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "symmetry") {
    SymmetryWitness w;
    w.s = checked_mask(j.at("s"));
    w.a = checked_mask(j.at("a"));
    w.b = checked_mask(j.at("b"));
    w.sigma = j.at("sigma").get<std::vector<int>>();
    return w;
  }
  if (kind == "certificate") return certificate_from_json(j);
  if (kind == "class-subset") {
    return ClassSubsetEvidence{j.at("classes").get<std::vector<int>>(), checked_mask(j.at("vertices"))};
  }
  if (kind == "component") {
    ComponentEvidence c;
    c.vertices = checked_mask(j.at("vertices"));
    c.stage = parse_stage(j.at("stage").get<std::string>());
    if (!j.at("certificate").is_null()) c.certificate = certificate_from_json(j.at("certificate"));
    return c;
  }
  throw std::invalid_argument("unknown evidence kind '" + kind + "'");
}

}  // namespace

std::string record_to_json(const ClassificationRecord& r) {
  Json j;
  j["key"] = r.key;
  j["n"] = r.n;
  j["edges"] = r.edges;
  j["verdict"] = std::string(to_string(r.verdict));
  j["stage"] = std::string(to_string(r.stage));
  j["evidence"] = evidence_json(r.evidence);
  j["note"] = r.note;
  std::ostringstream ms;
  ms << std::fixed << std::setprecision(3) << r.millis;
  j["ms"] = ms.str();
  j["seed"] = r.seed;
  j["version"] = r.version;
  return j.dump();
}

ClassificationRecord record_from_json(std::string_view line) {
  try {
    const Json j = Json::parse(line);
    ClassificationRecord r;
    r.key = j.at("key").get<std::string>();
    r.n = j.at("n").get<int>();
    r.edges = j.at("edges").get<int>();
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    r.stage = parse_stage(j.at("stage").get<std::string>());
    r.evidence = evidence_from_json(j.at("evidence"));
    r.note = j.at("note").get<std::string>();
    r.millis = std::stod(j.at("ms").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad ledger record: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad ledger record: ") + e.what(), 0);
  } catch (const std::out_of_range& e) {
    throw ParseError(std::string("bad ledger record: ") + e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// Verification

namespace {

CheckResult fail(std::string reason) { return {false, std::move(reason)}; }

// The mask must be one component of g occurring an odd number of times.
std::optional<std::string> check_odd_component(const SimpleGraph& g, VertexMask vertices) {
  const auto masks = component_masks(g);
  if (std::find(masks.begin(), masks.end(), vertices) == masks.end()) return "vertex set is not a component";
  const std::string key = canonical_key(induced_subgraph(g, vertices));
  long copies = 0;
  for (VertexMask m : masks) {
    if (std::popcount(m) == std::popcount(vertices) && canonical_key(induced_subgraph(g, m)) == key) ++copies;
  }
  if (copies % 2 == 0) return "component occurs an even number of times";
  return std::nullopt;
}

CheckResult check_certificate(const SimpleGraph& g, const WitnessCertificate& c) {
  try {
    const CertificateCheck check = verify_certificate(g, c);
    return {check.valid, check.reason};
  } catch (const std::exception& e) {
    return fail(std::string("certificate unusable: ") + e.what());
  }
}

}  // namespace

CheckResult verify_record(const ClassificationRecord& r) {
  SimpleGraph g;
  try {
    g = parse_graph6(r.key);
  } catch (const ParseError& e) {
    return fail(std::string("key is not graph6: ") + e.what());
  }
  if (canonical_key(g) != r.key) return fail("key is not in canonical form");
  if (g.order() != r.n || g.edge_count() != r.edges) return fail("order or edge count mismatch");
  const VertexMask all = all_vertices(g.order());

  switch (r.verdict) {
    case Verdict::Symmetric: {
      const auto* w = std::get_if<SymmetryWitness>(&r.evidence);
      if (w == nullptr) return fail("SYMMETRIC without a symmetry witness");
      if (static_cast<int>(w->sigma.size()) != g.order()) return fail("sigma has the wrong length");
      if (!verify_symmetry_witness(g, *w)) return fail("symmetry witness does not verify");
      return {true, {}};
    }
    case Verdict::Nonpositive: {
      if (const auto* c = std::get_if<WitnessCertificate>(&r.evidence)) return check_certificate(g, *c);
      if (const auto* part = std::get_if<ComponentEvidence>(&r.evidence)) {
        if (!part->certificate) return fail("NONPOSITIVE component evidence without a certificate");
        if ((part->vertices & ~all) != 0 || part->vertices == 0) return fail("component vertices out of range");
        if (auto why = check_odd_component(g, part->vertices)) return fail(*why);
        return check_certificate(induced_subgraph(g, part->vertices), *part->certificate);
      }
      return fail("NONPOSITIVE without a certificate");
    }
    case Verdict::ExcludedNonminimal: {
      if (const auto* s = std::get_if<ClassSubsetEvidence>(&r.evidence)) {
        const VertexPartition p = wl_partition(g);
        std::vector<int> classes = s->classes;
        std::sort(classes.begin(), classes.end());
        if (classes.empty() || std::adjacent_find(classes.begin(), classes.end()) != classes.end() ||
            classes.front() < 0 || classes.back() >= p.class_count) {
          return fail("class subset is not a set of walk-tree classes");
        }
        const VertexMask union_mask = p.members(classes);
        if (union_mask != s->vertices) return fail("vertex set is not the union of the listed classes");
        if (union_mask == all) return fail("class subset is not proper");
        if (is_symmetric(induced_subgraph(g, union_mask))) return fail("induced subgraph is symmetric");
        return {true, {}};
      }
      if (const auto* part = std::get_if<ComponentEvidence>(&r.evidence)) {
        if (part->certificate) return fail("EXCLUDED_NONMINIMAL component evidence carries a certificate");
        if ((part->vertices & ~all) != 0 || part->vertices == 0) return fail("component vertices out of range");
        if (part->vertices == all) return fail("component is the whole graph");
        if (auto why = check_odd_component(g, part->vertices)) return fail(*why);
        if (is_symmetric(induced_subgraph(g, part->vertices))) return fail("component is symmetric");
        return {true, {}};
      }
      return fail("EXCLUDED_NONMINIMAL without a class subset or component");
    }
    case Verdict::Undecided:
      if (!std::holds_alternative<std::monostate>(r.evidence)) return fail("UNDECIDED with evidence");
      return {true, {}};
  }
  return fail("unknown verdict");
}

// ---------------------------------------------------------------------------
// Input, ledger, pipeline

namespace {

struct BuiltinRange {
  bool trees = false;
  int lo = 0;
  int hi = 0;
};

std::optional<BuiltinRange> parse_builtin(std::string_view input) {
  constexpr std::string_view kPrefix = "builtin:";
  if (!input.starts_with(kPrefix)) return std::nullopt;
  std::string_view rest = input.substr(kPrefix.size());
  BuiltinRange r;
  if (rest.starts_with("trees")) {
    r.trees = true;
    rest.remove_prefix(5);
  } else if (rest.starts_with("n")) {
    rest.remove_prefix(1);
  } else {
    throw std::invalid_argument("unknown builtin input '" + std::string(input) + "'");
  }
  const auto dash = rest.find('-');
  r.lo = parse_number<int>("builtin order", rest.substr(0, dash));
  r.hi = dash == std::string_view::npos ? r.lo : parse_number<int>("builtin order", rest.substr(dash + 1));
  const int max = r.trees ? kMaxVertices : 7;
  if (r.lo < 1 || r.hi < r.lo || r.hi > max) {
    throw std::invalid_argument("builtin order range must lie in 1.." + std::to_string(max));
  }
  return r;
}

}  // namespace

void for_each_input_graph(const std::string& input, const std::function<void(const SimpleGraph&)>& sink,
                          const std::function<void(long, const std::string&)>& bad) {
  if (auto builtin = parse_builtin(input)) {
    for (int n = builtin->lo; n <= builtin->hi; ++n) {
      for (const SimpleGraph& g : builtin->trees ? enumerate_trees(n) : enumerate_graphs(n)) sink(g);
    }
    return;
  }
  std::ifstream in(input);
  if (!in) throw std::runtime_error("cannot read input " + input);
  read_graph6_stream(
      in, [&](std::size_t, const SimpleGraph& g) { sink(g); },
      [&](std::size_t line, const std::string& err) { bad(static_cast<long>(line), err); });
}

std::vector<LedgerEntry> read_ledger(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read ledger " + path);
  std::vector<LedgerEntry> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    LedgerEntry e;
    e.line = line_no;
    try {
      e.record = record_from_json(line);
    } catch (const ParseError& err) {
      e.error = err.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

void classify_batch(const std::vector<std::pair<SimpleGraph, std::string>>& batch, const PipelineConfig& cfg,
                    std::vector<ClassificationRecord>& results) {
  results.assign(batch.size(), {});
  const int workers = std::min<int>(cfg.workers, static_cast<int>(batch.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < batch.size(); ++i) results[i] = classify_canonical(batch[i].first, batch[i].second, cfg);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= batch.size()) break;
        try {
          results[i] = classify_canonical(batch[i].first, batch[i].second, cfg);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

PipelineSummary run_pipeline(const std::string& input, const PipelineConfig& cfg, const std::string& ledger_path,
                             const PipelineOptions& options) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  PipelineSummary summary;
  std::unordered_set<std::string> seen;
  if (std::ifstream probe(ledger_path); probe) {
    for (const LedgerEntry& e : read_ledger(ledger_path)) {
      if (e.record) seen.insert(e.record->key);
    }
  }
  std::ofstream ledger(ledger_path, std::ios::app);
  if (!ledger) throw std::runtime_error("cannot open ledger " + ledger_path + " for writing");

  const std::size_t batch_size = cfg.workers <= 1 ? 1 : static_cast<std::size_t>(cfg.workers) * 16;
  std::vector<std::pair<SimpleGraph, std::string>> batch;
  std::vector<ClassificationRecord> results;
  bool stop = false;

  auto flush = [&] {
    if (batch.empty()) return;
    classify_batch(batch, cfg, results);
    for (const ClassificationRecord& r : results) {
      ledger << record_to_json(r) << '\n';
      ledger.flush();
      if (!ledger) throw std::runtime_error("ledger write failed for " + ledger_path);
      ++summary.classified;
      ++summary.by_verdict[r.verdict];
      ++summary.by_stage[r.stage];
      if (r.verdict == Verdict::Undecided) summary.undecided.push_back(r.key);
      if (options.on_record) options.on_record(r);
    }
    batch.clear();
  };

  struct Stop {};
  try {
    for_each_input_graph(
        input,
        [&](const SimpleGraph& g) {
          ++summary.read;
          const CanonicalForm cf = canonical_form(g);
          if (!seen.insert(cf.graph6).second) {
            ++summary.skipped;
            return;
          }
          batch.emplace_back(parse_graph6(cf.graph6), cf.graph6);
          if (batch.size() >= batch_size) flush();
          if (options.limit >= 0 && summary.classified + static_cast<long>(batch.size()) >= options.limit) {
            flush();
            stop = true;
            throw Stop{};
          }
        },
        [&](long line, const std::string& err) {
          ++summary.read;
          ++summary.malformed;
          summary.malformed_lines.push_back("line " + std::to_string(line) + ": " + err);
        });
  } catch (const Stop&) {
  }
  if (!stop) flush();
  summary.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

// ---------------------------------------------------------------------------
// Report

std::optional<std::vector<std::string>> expected_survivors(int n) {
  if (n < 1) return std::nullopt;
  if (n <= 8) return std::vector<std::string>{};
  if (n == 9) return std::vector<std::string>{canonical_key(rook_graph_g1())};
  if (n == 10) {
    std::vector<std::string> keys{canonical_key(survivor_g2()), canonical_key(survivor_g3()),
                                  canonical_key(survivor_g4())};
    std::sort(keys.begin(), keys.end());
    return keys;
  }
  return std::nullopt;
}

LedgerReport build_report(const std::string& ledger_path) {
  LedgerReport rep;
  std::map<int, std::vector<std::string>> undecided_by_order;
  for (const LedgerEntry& e : read_ledger(ledger_path)) {
    if (!e.record) {
      rep.corrupt.push_back("line " + std::to_string(e.line) + ": " + e.error);
      continue;
    }
    const ClassificationRecord& r = *e.record;
    ++rep.records;
    ++rep.by_order[r.n][r.verdict];
    ++rep.by_stage[r.stage];
    if (r.verdict == Verdict::Undecided) {
      rep.undecided.push_back(r.key);
      undecided_by_order[r.n].push_back(r.key);
    }
  }
  for (const auto& [n, counts] : rep.by_order) {
    SurvivorCheck s;
    s.n = n;
    s.found = undecided_by_order[n];
    std::sort(s.found.begin(), s.found.end());
    if (auto expected = expected_survivors(n)) {
      s.complete_expected = true;
      s.expected = *expected;
      s.matches = s.found == s.expected;
    }
    rep.survivors.push_back(std::move(s));
  }
  return rep;
}

void print_report_text(const LedgerReport& r, std::ostream& out) {
  out << "records: " << r.records << "\n\n";
  out << std::left << std::setw(6) << "n" << std::right << std::setw(12) << "symmetric" << std::setw(13)
      << "nonpositive" << std::setw(10) << "excluded" << std::setw(11) << "undecided" << std::setw(9) << "total"
      << '\n';
  for (const auto& [n, counts] : r.by_order) {
    auto get = [&](Verdict v) {
      auto it = counts.find(v);
      return it == counts.end() ? 0L : it->second;
    };
    const long total = get(Verdict::Symmetric) + get(Verdict::Nonpositive) + get(Verdict::ExcludedNonminimal) +
                       get(Verdict::Undecided);
    out << std::left << std::setw(6) << n << std::right << std::setw(12) << get(Verdict::Symmetric) << std::setw(13)
        << get(Verdict::Nonpositive) << std::setw(10) << get(Verdict::ExcludedNonminimal) << std::setw(11)
        << get(Verdict::Undecided) << std::setw(9) << total << '\n';
  }
  out << "\ndeciding stage:\n";
  for (const auto& [stage, count] : r.by_stage) {
    out << "  " << std::left << std::setw(22) << to_string(stage) << std::right << count << '\n';
  }
  out << "\nundecided (" << r.undecided.size() << "):\n";
  for (const auto& k : r.undecided) out << "  " << k << '\n';
  out << "\nsurvivor check:\n";
  for (const auto& s : r.survivors) {
    out << "  n=" << s.n << ": " << s.found.size() << " undecided";
    if (s.complete_expected) {
      out << ", expected " << s.expected.size() << (s.matches ? " (match)" : " (MISMATCH)");
    }
    out << '\n';
  }
  if (!r.corrupt.empty()) {
    out << "\ncorrupt records (" << r.corrupt.size() << "):\n";
    for (const auto& c : r.corrupt) out << "  " << c << '\n';
  }
}

void print_report_json_lines(const LedgerReport& r, std::ostream& out) {
  for (const auto& [n, counts] : r.by_order) {
    Json j;
    j["type"] = "order";
    j["n"] = n;
    for (auto [v, name] : kVerdictNames) {
      auto it = counts.find(v);
      j[std::string(name)] = it == counts.end() ? 0L : it->second;
    }
    out << j.dump() << '\n';
  }
  for (const auto& [stage, count] : r.by_stage) {
    Json j;
    j["type"] = "stage";
    j["stage"] = std::string(to_string(stage));
    j["count"] = count;
    out << j.dump() << '\n';
  }
  for (const auto& k : r.undecided) {
    Json j;
    j["type"] = "undecided";
    j["key"] = k;
    out << j.dump() << '\n';
  }
  for (const auto& s : r.survivors) {
    Json j;
    j["type"] = "survivors";
    j["n"] = s.n;
    j["found"] = s.found;
    j["expected"] = s.complete_expected ? Json(s.expected) : Json(nullptr);
    j["match"] = s.complete_expected ? Json(s.matches) : Json(nullptr);
    out << j.dump() << '\n';
  }
  for (const auto& c : r.corrupt) {
    Json j;
    j["type"] = "corrupt";
    j["detail"] = c;
    out << j.dump() << '\n';
  }
  Json total;
  total["type"] = "total";
  total["records"] = r.records;
  total["undecided"] = r.undecided.size();
  total["corrupt"] = r.corrupt.size();
  out << total.dump() << '\n';
}

LedgerVerification verify_ledger(const std::string& ledger_path) {
  LedgerVerification v;
  std::unordered_set<std::string> keys;
  for (const LedgerEntry& e : read_ledger(ledger_path)) {
    if (!e.record) {
      v.passed = false;
      v.failures.push_back("line " + std::to_string(e.line) + ": " + e.error);
      continue;
    }
    ++v.checked;
    const ClassificationRecord& r = *e.record;
    if (!keys.insert(r.key).second) {
      v.passed = false;
      v.failures.push_back(r.key + ": duplicate record");
      continue;
    }
    const CheckResult c = verify_record(r);
    if (!c.valid) {
      v.passed = false;
      v.failures.push_back(r.key + ": " + c.reason);
    }
  }
  return v;
}

}  // namespace posgraph
