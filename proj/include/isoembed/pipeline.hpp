#pragma once

#include <string>
#include <vector>

#include "isoembed/config.hpp"
#include "isoembed/construct.hpp"
#include "isoembed/oracle.hpp"
#include "isoembed/spiral.hpp"
#include "isoembed/verify.hpp"

namespace isoembed {

// Picks the oracle named in the config for the first factor q1 of a split.
// "clifford" needs a constant q1: diagonal ones get the product of circles,
// others an integer-direction decomposition.
EmbeddingOracle select_oracle(const RunConfig& config, const MetricSplit& split);

// split -> oracle -> certified oracle -> E and F.
struct Pipeline {
  RunConfig config;
  MetricSplit split;
  VerifiedOracle oracle;
  SpiralCurve curve;
  AmbientMap E;
  AmbientMap F;
};

Pipeline build_pipeline(const RunConfig& config);

// Runs every check the config asks for. Records are appended in a fixed
// order, so the serialized report depends only on config and seed.
VerificationReport run_verification(const Pipeline& pipeline);

}  // namespace isoembed
