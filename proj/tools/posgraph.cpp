// posgraph command-line front end.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>

#include "posgraph/canonical.hpp"
#include "posgraph/enumerate.hpp"
#include "posgraph/errors.hpp"
#include "posgraph/pipeline.hpp"
#include "posgraph/witness.hpp"

namespace {

using namespace posgraph;

enum Exit { kOk = 0, kFailed = 1, kBadInput = 2, kCapRefused = 3 };

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  int workers = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool with_g1 = false;
};

PipelineConfig make_config(const CommonOptions& o) {
  PipelineConfig cfg = o.config_path.empty() ? PipelineConfig{} : load_config(o.config_path);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.seed_given) cfg.seed = o.seed;
  if (o.with_g1) apply_config_entry(cfg, "paper_g1", "true");
  cfg.validate();
  return cfg;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value configuration file");
  cmd->add_option("--set", o.overrides, "configuration override key=value (repeatable)");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&o](std::uint64_t s) {
        o.seed = s;
        o.seed_given = true;
      },
      "base seed");
  cmd->add_flag("--with-g1", o.with_g1, "append the G1 witness stage");
}

void print_certificate(const WitnessCertificate& c, std::ostream& out) {
  out << "method: " << to_string(c.method) << "\nhom: " << to_string(c.hom_value) << "\ntarget:\n";
  for (int i = 0; i < c.target.order(); ++i) {
    out << ' ';
    for (int j = 0; j < c.target.order(); ++j) out << ' ' << to_string(c.target.at(i, j));
    out << '\n';
  }
  if (!c.restriction.empty()) {
    out << "restriction:";
    for (const auto& set : c.restriction.allowed) {
      out << " {";
      for (std::size_t k = 0; k < set.size(); ++k) out << (k ? "," : "") << set[k];
      out << '}';
    }
    out << '\n';
  }
}

int cmd_check(const std::string& g6, const CommonOptions& o) {
  const PipelineConfig cfg = make_config(o);
  const ClassificationRecord r = classify(parse_graph6(g6), cfg);
  std::cout << record_to_json(r) << '\n';
  std::cerr << r.key << ": " << to_string(r.verdict) << " (" << to_string(r.stage) << ")\n";
  return kOk;
}

int cmd_pipeline(const std::string& input, const std::string& ledger, long limit, const CommonOptions& o) {
  const PipelineConfig cfg = make_config(o);
  PipelineOptions opts;
  opts.limit = limit;
  const PipelineSummary s = run_pipeline(input, cfg, ledger, opts);
  std::cout << "read " << s.read << ", classified " << s.classified << ", skipped " << s.skipped << ", malformed "
            << s.malformed << " in " << s.seconds << " s\n";
  for (const auto& [v, c] : s.by_verdict) std::cout << "  " << to_string(v) << ' ' << c << '\n';
  for (const auto& [st, c] : s.by_stage) std::cout << "  stage " << to_string(st) << ' ' << c << '\n';
  for (const auto& k : s.undecided) std::cout << "  undecided " << k << '\n';
  for (const auto& m : s.malformed_lines) std::cerr << "malformed " << m << '\n';
  return kOk;
}

int cmd_report(const std::string& ledger, const std::string& format) {
  const LedgerReport r = build_report(ledger);
  if (format == "json-lines") {
    print_report_json_lines(r, std::cout);
  } else {
    print_report_text(r, std::cout);
  }
  return kOk;
}

int cmd_verify(const std::string& ledger) {
  const LedgerVerification v = verify_ledger(ledger);
  for (const auto& f : v.failures) std::cout << "FAIL " << f << '\n';
  std::cout << (v.passed ? "pass" : "fail") << ": " << v.checked << " records checked, " << v.failures.size()
            << " failures\n";
  return v.passed ? kOk : kFailed;
}

int cmd_witness(const std::string& g6, const std::string& method, int order, const CommonOptions& o) {
  const PipelineConfig cfg = make_config(o);
  const SimpleGraph g = parse_graph6(g6);
  MinimizerConfig mcfg = cfg.minimizer;
  mcfg.seed = cfg.seed;
  std::optional<WitnessCertificate> c;
  if (method == "enum") {
    c = enumerate_matrix_witness(g, cfg.matrix_sizes, cfg.entry_lo, cfg.entry_hi);
  } else if (method == "minimize") {
    const std::vector<int> orders = order > 0 ? std::vector<int>{order} : cfg.full_orders;
    for (std::size_t i = 0; i < orders.size() && !c; ++i) {
      c = full_polynomial_witness_search(g, orders[i], mcfg, cfg.polynomial_cap);
    }
  } else {
    c = restricted_witness_search(g, wl_partition(g), cfg.block_size, mcfg, cfg.polynomial_cap);
  }
  if (!c) {
    std::cout << "no witness found\n";
    return kOk;
  }
  print_certificate(*c, std::cout);
  const CertificateCheck check = verify_certificate(g, *c);
  std::cout << "verified: " << (check.valid ? "yes" : "no " + check.reason) << '\n';
  return check.valid ? kOk : kFailed;
}

int cmd_paper_g1() {
  const auto start = std::chrono::steady_clock::now();
  const G1Check c = check_G1();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "G1 key: " << canonical_key(rook_graph_g1()) << '\n';
  std::cout << "hom(G1, H) by elimination DP:   " << to_string(c.dp_value) << '\n';
  std::cout << "hom(G1, H) by row assignments:  " << to_string(c.row_value) << '\n';
  std::cout << "methods agree: " << (c.agree ? "yes" : "no") << '\n';
  std::cout << "time: " << secs << " s\n";
  if (!c.agree) return kFailed;
  if (!c.certificate) {
    std::cout << "hom(G1, H) is not negative: H is not a non-positivity witness for G1\n";
    return kFailed;
  }
  std::cout << "hom(G1, H) is negative: G1 is not positive\n";
  return kOk;
}

int cmd_generate(int n, const std::string& out_path) {
  if (n < 1 || n > 10) throw std::invalid_argument("generate supports 1 <= n <= 10");
  std::vector<std::string> keys;
  if (n <= 7) {
    for (const SimpleGraph& g : enumerate_graphs(n)) keys.push_back(write_graph6(g));
  } else {
    std::vector<SimpleGraph> reps = enumerate_graphs(7);
    for (int k = 8; k <= n; ++k) {
      keys = extend_by_vertex(reps);
      std::cerr << "n=" << k << ": " << keys.size() << " graphs\n";
      if (k < n) {
        reps.clear();
        for (const auto& key : keys) reps.push_back(parse_graph6(key));
      }
    }
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  for (const auto& k : keys) out << k << '\n';
  std::cout << keys.size() << " graphs written to " << out_path << '\n';
  return kOk;
}

int cmd_polynomial(const std::string& g6, int order) {
  std::cout << hom_polynomial(parse_graph6(g6), order).serialize();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posgraph: symmetry, witness search and classification for the positive graph conjecture"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(posgraph::toolkit_version()));

  CommonOptions common;
  std::string graph6;
  std::string input;
  std::string ledger;
  std::string format = "text";
  std::string method = "enum";
  std::string out_path;
  long limit = -1;
  int order = 0;
  int gen_n = 0;

  auto* check = app.add_subcommand("check", "classify one graph and print its record");
  check->add_option("graph6", graph6, "graph in graph6")->required();
  add_common(check, common);

  auto* pipeline = app.add_subcommand("pipeline", "classify a graph stream into a ledger");
  pipeline->add_option("--input", input, "graph6 file or builtin:nK, builtin:nA-B, builtin:treesK, builtin:treesA-B")
      ->required();
  pipeline->add_option("--ledger", ledger, "ledger path (JSON lines, appended)")->required();
  pipeline->add_option("--limit", limit, "stop after this many new graphs");
  add_common(pipeline, common);

  auto* report = app.add_subcommand("report", "summarize a ledger");
  report->add_option("--ledger", ledger)->required();
  report->add_option("--format", format)->check(CLI::IsMember({"text", "json-lines"}));

  auto* verify = app.add_subcommand("verify", "re-verify every record of a ledger");
  verify->add_option("--ledger", ledger)->required();

  auto* witness = app.add_subcommand("witness", "search for a non-positivity witness");
  witness->add_option("--graph", graph6)->required();
  witness->add_option("--method", method)->check(CLI::IsMember({"enum", "minimize", "restricted"}));
  witness->add_option("--order", order, "target order for --method minimize (default: full_orders)");
  add_common(witness, common);

  auto* paper = app.add_subcommand("paper-g1", "evaluate hom(G1, H) for the fixed 15-vertex target H");

  auto* generate = app.add_subcommand("generate", "write all graphs on n vertices as graph6");
  generate->add_option("--n", gen_n)->required();
  generate->add_option("--out", out_path)->required();

  auto* poly = app.add_subcommand("polynomial", "print the symbolic hom polynomial");
  poly->add_option("--graph", graph6)->required();
  poly->add_option("--order", order)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*check) return cmd_check(graph6, common);
    if (*pipeline) return cmd_pipeline(input, ledger, limit, common);
    if (*report) return cmd_report(ledger, format);
    if (*verify) return cmd_verify(ledger);
    if (*witness) return cmd_witness(graph6, method, order, common);
    if (*paper) return cmd_paper_g1();
    if (*generate) return cmd_generate(gen_n, out_path);
    if (*poly) return cmd_polynomial(graph6, order);
  } catch (const posgraph::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kFailed;
  } catch (const posgraph::CapExceeded& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kCapRefused;
  } catch (const posgraph::ParseError& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad input: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kOk;
}
