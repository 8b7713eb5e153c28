#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "posgraph/certificate.hpp"
#include "posgraph/graph.hpp"
#include "posgraph/structure.hpp"
#include "posgraph/witness.hpp"

namespace posgraph {

std::string_view toolkit_version();

enum class Verdict { Symmetric, Nonpositive, ExcludedNonminimal, Undecided };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view name);

enum class Stage {
  Components,
  EdgeParity,
  DegreeParity,
  Symmetry,
  ClassParity,
  MatrixEnum,
  SubgraphMinimality,
  MinimizerFull,
  MinimizerRestricted,
  PaperG1,
  None,
};
std::string_view to_string(Stage s);
Stage parse_stage(std::string_view name);
/// Default order; PaperG1 is not part of it.
std::vector<Stage> default_stages();

/// Proper union of walk-tree classes whose induced subgraph is not symmetric.
struct ClassSubsetEvidence {
  std::vector<int> classes;
  VertexMask vertices = 0;
};

/// A component occurring an odd number of times, identified by its vertex set in the
/// record's graph. With a certificate (for the induced subgraph on `vertices`, vertex
/// order preserved) it proves non-positivity; without one it is a smaller
/// non-symmetric component, ruling out minimality.
struct ComponentEvidence {
  VertexMask vertices = 0;
  Stage stage = Stage::None;
  std::optional<WitnessCertificate> certificate;
};

using Evidence =
    std::variant<std::monostate, SymmetryWitness, WitnessCertificate, ClassSubsetEvidence, ComponentEvidence>;

/// Every field refers to the canonical labelling, i.e. to parse_graph6(key).
struct ClassificationRecord {
  std::string key;
  int n = 0;
  int edges = 0;
  Verdict verdict = Verdict::Undecided;
  Stage stage = Stage::None;
  Evidence evidence;
  /// Stages that refused on a cap, comma separated.
  std::string note;
  double millis = 0;
  std::uint64_t seed = 0;
  std::string version;
};

struct PipelineConfig {
  std::vector<Stage> stages = default_stages();
  std::vector<int> matrix_sizes{1, 2, 3};
  int entry_lo = -2;
  int entry_hi = 2;
  MinimizerConfig minimizer;
  /// Target orders for the full-polynomial minimizer, tried in turn.
  std::vector<int> full_orders{3, 4};
  int block_size = 3;
  int max_minimality_classes = 12;
  double polynomial_cap = 1.0e7;
  int workers = 1;
  std::uint64_t seed = 1;
  /// Re-run the symmetry search on graphs found non-positive before the symmetry stage.
  bool consistency_checks = true;
  bool record_timing = true;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

/// Applies "key = value" lines ('#' starts a comment). Throws ParseError naming the
/// offending line on an unknown key or bad value.
void apply_config_text(PipelineConfig& cfg, std::string_view text);
void apply_config_entry(PipelineConfig& cfg, std::string_view key, std::string_view value);
PipelineConfig load_config(const std::string& path);

/// Per-graph seed from the configured seed and the canonical key.
std::uint64_t graph_seed(std::uint64_t seed, std::string_view key);

/// Classifies g (any labelling); the record is expressed in canonical labels.
/// Throws InvariantViolation if a graph is found both symmetric and non-positive.
ClassificationRecord classify(const SimpleGraph& g, const PipelineConfig& cfg);

std::string record_to_json(const ClassificationRecord& r);
/// Throws ParseError on malformed text.
ClassificationRecord record_from_json(std::string_view line);

struct CheckResult {
  bool valid = false;
  std::string reason;
};
/// Re-verifies the record's evidence from scratch against its key.
CheckResult verify_record(const ClassificationRecord& r);

struct PipelineSummary {
  long read = 0;
  long malformed = 0;
  long skipped = 0;  // already in the ledger or repeated in the input
  long classified = 0;
  std::map<Verdict, long> by_verdict;
  std::map<Stage, long> by_stage;
  std::vector<std::string> undecided;
  std::vector<std::string> malformed_lines;  // "line N: reason"
  double seconds = 0;
};

struct PipelineOptions {
  /// Stop after classifying this many new graphs (negative: no limit).
  long limit = -1;
  std::function<void(const ClassificationRecord&)> on_record;
};

/// Input is a file path or "builtin:nK", "builtin:nA-B", "builtin:treesK", "builtin:treesA-B".
/// Appends one JSON line per new graph to the ledger, in input order.
PipelineSummary run_pipeline(const std::string& input, const PipelineConfig& cfg, const std::string& ledger_path,
                             const PipelineOptions& options = {});

/// Streams every input graph; `bad` receives unreadable lines.
void for_each_input_graph(const std::string& input, const std::function<void(const SimpleGraph&)>& sink,
                          const std::function<void(long, const std::string&)>& bad);

struct LedgerEntry {
  long line = 0;
  std::optional<ClassificationRecord> record;
  std::string error;
};
std::vector<LedgerEntry> read_ledger(const std::string& path);

struct SurvivorCheck {
  int n = 0;
  bool complete_expected = false;  // an expected set is known for this n
  std::vector<std::string> expected;
  std::vector<std::string> found;
  bool matches = false;
};

struct LedgerReport {
  long records = 0;
  std::map<int, std::map<Verdict, long>> by_order;
  std::map<Stage, long> by_stage;
  std::vector<std::string> undecided;
  std::vector<std::string> corrupt;  // "line N: reason"
  std::vector<SurvivorCheck> survivors;
};
LedgerReport build_report(const std::string& ledger_path);
void print_report_text(const LedgerReport& r, std::ostream& out);
void print_report_json_lines(const LedgerReport& r, std::ostream& out);

struct LedgerVerification {
  bool passed = true;
  long checked = 0;
  std::vector<std::string> failures;  // "key: reason" or "line N: reason"
};
LedgerVerification verify_ledger(const std::string& ledger_path);

/// Expected undecided keys before the G1 stage: n <= 8 none, n = 9 {G1}, n = 10 {G2, G3, G4}.
std::optional<std::vector<std::string>> expected_survivors(int n);

}  // namespace posgraph
