#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "posgraph/graph.hpp"
#include "posgraph/hom.hpp"
#include "posgraph/rational.hpp"

namespace posgraph {

enum class WitnessMethod { MatrixEnum, MinimizerFull, MinimizerRestricted, Manual };

std::string_view to_string(WitnessMethod method);
/// Throws std::invalid_argument on an unknown name.
WitnessMethod parse_witness_method(std::string_view name);

/// Exact evidence of non-positivity: a weighted target with negative (possibly
/// block-restricted) homomorphism count.
struct WitnessCertificate {
  WeightedGraph target;
  Rational hom_value;
  WitnessMethod method = WitnessMethod::Manual;
  /// Empty for an unrestricted count. Otherwise must be constant on walk-tree classes.
  BlockConstraint restriction;
  std::uint64_t seed = 0;
};

struct CertificateCheck {
  bool valid = false;
  std::string reason;  // empty when valid
};

/// Recomputes the count from scratch and checks it equals hom_value and is negative.
/// For restricted certificates also checks that the blocks are a function of the
/// walk-tree class and that distinct blocks are equal or disjoint.
CertificateCheck verify_certificate(const SimpleGraph& g, const WitnessCertificate& cert);

}  // namespace posgraph
