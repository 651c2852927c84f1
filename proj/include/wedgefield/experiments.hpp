#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wedgefield/io.hpp"

namespace wedgefield {

/// orbit, identities, npoint, locality, smatrix, limit, oracle.
const std::vector<std::string>& experimentNames();

/// Default configuration of an experiment (every accepted key is present).
Json defaultConfig(const std::string& experiment);

/// Overlays config on the defaults. Objects under "measure" merge key by key;
/// every other key is replaced. Unknown keys raise ConfigError.
Json resolveConfig(const std::string& experiment, const Json& config);

/// Runs an experiment on a resolved configuration. The result holds the
/// config echo under "config" and the findings under "results"; sweeps also
/// carry "rows".
Json runExperiment(const std::string& experiment, const Json& resolved);

/// Randomized replicas of a locality configuration: Lambda from up to three
/// boosts/rotations with parameters in [-0.5, 0.5], a in [-1, 1]^4.
struct LocalityReplica {
  LorentzTransform lambda;
  FourVector translation;
  LocalityConfig config;
};
std::vector<LocalityReplica> localityReplicas(const LocalityConfig& base, std::uint64_t seed,
                                              int count);

/// Reference degree-4 Gaussian tensor used by npoint and limit.
TwistedTensor referenceGaussianTensor();

}  // namespace wedgefield
