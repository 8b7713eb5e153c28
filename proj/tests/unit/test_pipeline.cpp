#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/errors.hpp"
#include "posgraph/pipeline.hpp"

using namespace posgraph;

namespace {

PipelineConfig untimed() {
  PipelineConfig cfg;
  cfg.record_timing = false;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("K3 is non-positive at the edge parity stage") {
  const ClassificationRecord r = classify(complete_graph(3), untimed());
  CHECK(r.verdict == Verdict::Nonpositive);
  CHECK(r.stage == Stage::EdgeParity);
  REQUIRE(std::holds_alternative<WitnessCertificate>(r.evidence));
  CHECK(std::get<WitnessCertificate>(r.evidence).hom_value == -1);
  CHECK(r.key == "Bw");
  CHECK(r.n == 3);
  CHECK(r.edges == 3);
  CHECK(verify_record(r).valid);
}

TEST_CASE("C4 is symmetric at the symmetry stage") {
  const ClassificationRecord r = classify(cycle_graph(4), untimed());
  CHECK(r.verdict == Verdict::Symmetric);
  CHECK(r.stage == Stage::Symmetry);
  REQUIRE(std::holds_alternative<SymmetryWitness>(r.evidence));
  CHECK(verify_symmetry_witness(parse_graph6(r.key), std::get<SymmetryWitness>(r.evidence)));
  CHECK(verify_record(r).valid);
}

TEST_CASE("G1 survives every automated stage") {
  const ClassificationRecord r = classify(rook_graph_g1(), untimed());
  CHECK(r.verdict == Verdict::Undecided);
  CHECK(r.stage == Stage::None);
  CHECK(std::holds_alternative<std::monostate>(r.evidence));
  CHECK(r.note.empty());
  CHECK(verify_record(r).valid);
}

TEST_CASE("the G1 stage alone does not decide G1 with the fixed target H") {
  PipelineConfig cfg = untimed();
  apply_config_text(cfg, "stages = paper-g1\n");
  const ClassificationRecord r = classify(rook_graph_g1(), cfg);
  CHECK(r.verdict == Verdict::Undecided);
  // Any other graph passes through the stage untouched.
  CHECK(classify(complete_bipartite(3, 3), cfg).verdict == Verdict::Undecided);
}

TEST_CASE("disconnected graphs are judged by their odd-multiplicity components") {
  const SimpleGraph k3 = complete_graph(3);
  const ClassificationRecord twice = classify(disjoint_union(k3, k3), untimed());
  CHECK(twice.verdict == Verdict::Symmetric);
  CHECK(twice.stage == Stage::Components);
  REQUIRE(std::holds_alternative<SymmetryWitness>(twice.evidence));
  CHECK(verify_record(twice).valid);

  const ClassificationRecord mixed = classify(disjoint_union(cycle_graph(4), k3), untimed());
  CHECK(mixed.verdict == Verdict::Nonpositive);
  CHECK(mixed.stage == Stage::Components);
  REQUIRE(std::holds_alternative<ComponentEvidence>(mixed.evidence));
  const auto& ce = std::get<ComponentEvidence>(mixed.evidence);
  REQUIRE(ce.certificate.has_value());
  CHECK(are_isomorphic(induced_subgraph(parse_graph6(mixed.key), ce.vertices), k3));
  CHECK(verify_record(mixed).valid);

  const ClassificationRecord sym = classify(disjoint_union(cycle_graph(4), path_graph(3)), untimed());
  CHECK(sym.verdict == Verdict::Symmetric);
  CHECK(verify_record(sym).valid);
}

TEST_CASE("cap refusals are noted and later stages still run") {
  PipelineConfig cfg = untimed();
  cfg.polynomial_cap = 10;
  const ClassificationRecord r = classify(rook_graph_g1(), cfg);
  CHECK(r.verdict == Verdict::Undecided);
  CHECK(r.note == "minimizer-full,minimizer-restricted");
}

TEST_CASE("configuration text") {
  PipelineConfig cfg;
  apply_config_text(cfg,
                    "# comment\n"
                    "stages = edge-parity, symmetry\n"
                    "matrix_sizes = 1,2\n"
                    "entry_lo = -1\n"
                    "restarts = 7   # trailing comment\n"
                    "threshold = -1e-6\n"
                    "full_orders = 3\n"
                    "seed = 42\n"
                    "consistency_checks = false\n"
                    "\n");
  CHECK(cfg.stages == std::vector<Stage>{Stage::EdgeParity, Stage::Symmetry});
  CHECK(cfg.matrix_sizes == std::vector<int>{1, 2});
  CHECK(cfg.entry_lo == -1);
  CHECK(cfg.minimizer.restarts == 7);
  CHECK(cfg.minimizer.threshold == doctest::Approx(-1e-6));
  CHECK(cfg.full_orders == std::vector<int>{3});
  CHECK(cfg.seed == 42);
  CHECK_FALSE(cfg.consistency_checks);
  CHECK_NOTHROW(cfg.validate());

  apply_config_entry(cfg, "paper_g1", "true");
  CHECK(cfg.stages.back() == Stage::PaperG1);
  apply_config_entry(cfg, "paper_g1", "false");
  CHECK(cfg.stages.back() == Stage::Symmetry);

  PipelineConfig defaults;
  CHECK(defaults.stages == default_stages());
  CHECK(defaults.full_orders == std::vector<int>{3, 4});
  CHECK(defaults.block_size == 3);
}

TEST_CASE("configuration errors name the line") {
  PipelineConfig cfg;
  try {
    apply_config_text(cfg, "seed = 1\nbogus = 3\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_config_text(cfg, "restarts = many\n"), ParseError);
  CHECK_THROWS_AS(apply_config_text(cfg, "stages = everything\n"), ParseError);
  CHECK_THROWS_AS(apply_config_text(cfg, "no equals sign\n"), ParseError);

  PipelineConfig bad;
  bad.workers = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = PipelineConfig{};
  bad.stages = {Stage::Symmetry, Stage::Symmetry};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = PipelineConfig{};
  bad.full_orders = {};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS(load_config(fixture::path("missing.conf")));
}

TEST_CASE("seeds depend on the key and the base seed only") {
  CHECK(graph_seed(1, "Bw") == graph_seed(1, "Bw"));
  CHECK(graph_seed(1, "Bw") != graph_seed(2, "Bw"));
  CHECK(graph_seed(1, "Bw") != graph_seed(1, "A_"));
}

TEST_CASE("records round trip through JSON") {
  PipelineConfig cfg = untimed();
  std::vector<ClassificationRecord> records;
  for (const SimpleGraph& g : {complete_graph(3), cycle_graph(4), star_graph(3), disjoint_union(cycle_graph(4), complete_graph(3)),
                               rook_graph_g1()}) {
    records.push_back(classify(g, cfg));
  }
  for (const std::string& key : {std::string("G??^~w"), std::string("G?~v~w")}) records.push_back(classify(parse_graph6(key), cfg));
  for (const ClassificationRecord& r : records) {
    const std::string line = record_to_json(r);
    CHECK(line.find('\n') == std::string::npos);
    const ClassificationRecord back = record_from_json(line);
    CHECK(record_to_json(back) == line);
    CHECK(back.key == r.key);
    CHECK(back.verdict == r.verdict);
    CHECK(back.stage == r.stage);
    CHECK(verify_record(back).valid);
  }
  CHECK_THROWS_AS(record_from_json("{not json"), ParseError);
  CHECK_THROWS_AS(record_from_json(R"({"key":"Bw"})"), ParseError);
}

TEST_CASE("verification catches tampered evidence") {
  ClassificationRecord r = classify(star_graph(3), untimed());
  REQUIRE(r.verdict == Verdict::Nonpositive);
  CHECK(verify_record(r).valid);

  ClassificationRecord wrong_key = r;
  wrong_key.key = write_graph6(cycle_graph(4));
  CHECK_FALSE(verify_record(wrong_key).valid);

  ClassificationRecord sym = classify(cycle_graph(4), untimed());
  std::get<SymmetryWitness>(sym.evidence).sigma = {0, 1, 2, 3};
  CHECK_FALSE(verify_record(sym).valid);

  ClassificationRecord symmetric_claim = classify(complete_graph(3), untimed());
  symmetric_claim.verdict = Verdict::Symmetric;
  CHECK_FALSE(verify_record(symmetric_claim).valid);
}

TEST_CASE("pipeline over a file: summary, ledger and verification") {
  fixture::TempFile input("posgraph_input");
  fixture::TempFile ledger("posgraph_ledger");
  write_file(input.str(), "Bw\nA_\nnot-graph6\nBW\nB!\nC~\n\nBw\n");
  const PipelineSummary s = run_pipeline(input.str(), untimed(), ledger.str());
  CHECK(s.read == 7);
  CHECK(s.malformed == 2);
  CHECK(s.skipped == 1);
  CHECK(s.classified == 4);
  long total = 0;
  for (const auto& [v, c] : s.by_verdict) total += c;
  CHECK(total == s.classified);
  CHECK(s.malformed_lines.size() == 2);

  const auto entries = read_ledger(ledger.str());
  CHECK(entries.size() == 4);
  for (const auto& e : entries) CHECK(e.record.has_value());
  CHECK(verify_ledger(ledger.str()).passed);

  // Rerunning adds nothing.
  const PipelineSummary again = run_pipeline(input.str(), untimed(), ledger.str());
  CHECK(again.classified == 0);
  CHECK(again.skipped == 5);
  CHECK(again.malformed == 2);
  CHECK(read_ledger(ledger.str()).size() == 4);
}

TEST_CASE("empty input and empty ledger") {
  fixture::TempFile input("posgraph_empty_input");
  fixture::TempFile ledger("posgraph_empty_ledger");
  write_file(input.str(), "");
  const PipelineSummary s = run_pipeline(input.str(), untimed(), ledger.str());
  CHECK(s.read == 0);
  CHECK(s.classified == 0);
  CHECK(s.by_verdict.empty());
  write_file(ledger.str(), "");
  const LedgerVerification v = verify_ledger(ledger.str());
  CHECK(v.passed);
  CHECK(v.checked == 0);
}

TEST_CASE("tampered ledgers fail verification with the offending key") {
  fixture::TempFile ledger("posgraph_tamper");
  run_pipeline("builtin:n4", untimed(), ledger.str());
  REQUIRE(verify_ledger(ledger.str()).passed);

  std::string text = slurp(ledger.str());
  const std::string original = "\"target\":[[\"-1\"]]";
  const auto at = text.find(original);
  REQUIRE(at != std::string::npos);
  text.replace(at, original.size(), "\"target\":[[\"-2\"]]");
  const auto line_start = text.rfind('\n', at) == std::string::npos ? 0 : text.rfind('\n', at) + 1;
  const std::string key = record_from_json(text.substr(line_start, text.find('\n', at) - line_start)).key;
  write_file(ledger.str(), text);

  const LedgerVerification v = verify_ledger(ledger.str());
  CHECK_FALSE(v.passed);
  REQUIRE(v.failures.size() == 1);
  CHECK(v.failures[0].find(key) != std::string::npos);

  write_file(ledger.str(), slurp(ledger.str()) + "{garbage\n");
  CHECK(verify_ledger(ledger.str()).failures.size() == 2);
}

TEST_CASE("duplicate keys in a ledger fail verification") {
  fixture::TempFile ledger("posgraph_dup");
  const std::string line = record_to_json(classify(complete_graph(3), untimed()));
  write_file(ledger.str(), line + "\n" + line + "\n");
  CHECK_FALSE(verify_ledger(ledger.str()).passed);
}

TEST_CASE("an interrupted run resumes to the same ledger") {
  fixture::TempFile whole("posgraph_whole");
  fixture::TempFile parts("posgraph_parts");
  const PipelineConfig cfg = untimed();
  run_pipeline("builtin:n1-6", cfg, whole.str());
  PipelineOptions first;
  first.limit = 57;
  CHECK(run_pipeline("builtin:n1-6", cfg, parts.str(), first).classified == 57);
  run_pipeline("builtin:n1-6", cfg, parts.str());
  CHECK(slurp(parts.str()) == slurp(whole.str()));
}

TEST_CASE("parallel workers produce the same ledger as one worker") {
  fixture::TempFile one("posgraph_one");
  fixture::TempFile many("posgraph_many");
  PipelineConfig cfg = untimed();
  run_pipeline("builtin:n1-6", cfg, one.str());
  cfg.workers = 3;
  run_pipeline("builtin:n1-6", cfg, many.str());
  CHECK(slurp(one.str()) == slurp(many.str()));
}

TEST_CASE("verdicts are isomorphism invariant") {
  oracle::Rng rng(606);
  const auto graphs = enumerate_graphs(6);
  const PipelineConfig cfg = untimed();
  for (int trial = 0; trial < 40; ++trial) {
    const SimpleGraph& g = graphs[(trial * 13) % graphs.size()];
    const ClassificationRecord base = classify(g, cfg);
    for (int k = 0; k < 3; ++k) {
      const ClassificationRecord r = classify(relabel(g, oracle::random_permutation(rng, 6)), cfg);
      CHECK(r.key == base.key);
      CHECK(r.verdict == base.verdict);
      CHECK(r.stage == base.stage);
      CHECK(record_to_json(r) == record_to_json(base));
    }
  }
}

TEST_CASE("disabling a later stage never changes an earlier decision") {
  const PipelineConfig full = untimed();
  for (const SimpleGraph& g : enumerate_graphs(6)) {
    const ClassificationRecord r = classify(g, full);
    if (r.verdict == Verdict::Undecided) continue;
    const auto& stages = full.stages;
    const auto pos = std::find(stages.begin(), stages.end(), r.stage);
    if (pos == stages.end() || pos + 1 == stages.end()) continue;
    PipelineConfig trimmed = full;
    trimmed.stages.erase(std::remove(trimmed.stages.begin(), trimmed.stages.end(), *(pos + 1)), trimmed.stages.end());
    const ClassificationRecord t = classify(g, trimmed);
    REQUIRE(t.verdict == r.verdict);
    REQUIRE(t.stage == r.stage);
  }
}

TEST_CASE("reports") {
  fixture::TempFile ledger("posgraph_report");
  write_file(ledger.str(), record_to_json(classify(rook_graph_g1(), untimed())) + "\n");
  const LedgerReport r = build_report(ledger.str());
  CHECK(r.records == 1);
  CHECK(r.undecided == std::vector<std::string>{canonical_key(rook_graph_g1())});
  REQUIRE(r.survivors.size() == 1);
  CHECK(r.survivors[0].n == 9);
  CHECK(r.survivors[0].matches);

  std::ostringstream text;
  print_report_text(r, text);
  CHECK(text.str().find(canonical_key(rook_graph_g1())) != std::string::npos);
  std::ostringstream jl;
  print_report_json_lines(r, jl);
  CHECK_FALSE(jl.str().empty());

  CHECK(expected_survivors(8)->empty());
  CHECK(*expected_survivors(9) == std::vector<std::string>{canonical_key(rook_graph_g1())});
  CHECK(expected_survivors(10)->size() == 3);
  CHECK_FALSE(expected_survivors(11).has_value());
}

TEST_CASE("builtin inputs") {
  long count = 0;
  long bad = 0;
  for_each_input_graph("builtin:n1-5", [&](const SimpleGraph&) { ++count; }, [&](long, const std::string&) { ++bad; });
  CHECK(count == 1 + 2 + 4 + 11 + 34);
  count = 0;
  for_each_input_graph("builtin:trees1-10", [&](const SimpleGraph&) { ++count; }, [&](long, const std::string&) { ++bad; });
  CHECK(count == 201);
  CHECK(bad == 0);
  CHECK_THROWS(for_each_input_graph("builtin:n9", [](const SimpleGraph&) {}, [](long, const std::string&) {}));
  CHECK_THROWS(for_each_input_graph("builtin:nonsense", [](const SimpleGraph&) {}, [](long, const std::string&) {}));
}
