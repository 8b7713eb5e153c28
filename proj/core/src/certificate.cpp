#include "posgraph/certificate.hpp"

#include <algorithm>
#include <stdexcept>

#include "posgraph/errors.hpp"
#include "posgraph/structure.hpp"

namespace posgraph {

std::string_view to_string(WitnessMethod method) {
  switch (method) {
    case WitnessMethod::MatrixEnum: return "matrix-enum";
    case WitnessMethod::MinimizerFull: return "minimizer-full";
    case WitnessMethod::MinimizerRestricted: return "minimizer-restricted";
    case WitnessMethod::Manual: return "manual";
  }
  return "manual";
}

WitnessMethod parse_witness_method(std::string_view name) {
  if (name == "matrix-enum") return WitnessMethod::MatrixEnum;
  if (name == "minimizer-full") return WitnessMethod::MinimizerFull;
  if (name == "minimizer-restricted") return WitnessMethod::MinimizerRestricted;
  if (name == "manual") return WitnessMethod::Manual;
  throw std::invalid_argument("unknown witness method '" + std::string(name) + "'");
}

namespace {

std::string check_blocks(const SimpleGraph& g, const BlockConstraint& blocks) {
  const VertexPartition classes = wl_partition(g);
  std::vector<std::vector<int>> sorted;
  for (auto set : blocks.allowed) {
    std::sort(set.begin(), set.end());
    sorted.push_back(std::move(set));
  }
  for (int u = 0; u < g.order(); ++u) {
    for (int v = u + 1; v < g.order(); ++v) {
      const auto& a = sorted[u];
      const auto& b = sorted[v];
      if (classes.class_of[u] == classes.class_of[v] && a != b) {
        return "blocks differ inside a walk-tree class";
      }
      if (a == b) continue;
      std::vector<int> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
      if (!common.empty()) return "blocks overlap without being equal";
    }
  }
  return {};
}

}  // namespace

CertificateCheck verify_certificate(const SimpleGraph& g, const WitnessCertificate& cert) {
  CertificateCheck out;
  if (cert.hom_value >= 0) {
    out.reason = "recorded value is not negative";
    return out;
  }
  Rational recomputed;
  try {
    if (cert.restriction.empty()) {
      recomputed = hom_count(g, cert.target);
    } else {
      cert.restriction.validate(g.order(), cert.target.order());
      if (auto why = check_blocks(g, cert.restriction); !why.empty()) {
        out.reason = why;
        return out;
      }
      recomputed = hom_count_restricted(g, cert.target, cert.restriction);
    }
  } catch (const std::exception& e) {
    out.reason = std::string("recomputation failed: ") + e.what();
    return out;
  }
  if (recomputed != cert.hom_value) {
    out.reason = "recomputed value " + to_string(recomputed) + " differs from recorded " + to_string(cert.hom_value);
    return out;
  }
  out.valid = true;
  return out;
}

}  // namespace posgraph
