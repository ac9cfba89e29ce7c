#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scanorder/model.hpp"

namespace scanorder {

enum class Sampler { random_update, alternating_scan };

const char* to_string(Sampler sampler) noexcept;
Sampler parse_sampler(const std::string& name);

// Throws Error unless the model is Boolean, free of hard constraints, and
// every factor is attractive (f00 + f11 - f01 - f10 >= 0), which makes the
// conditional probability of 1 monotone in the configuration.
void monotonicity_precondition(const BipartiteModel& model);

struct CouplingOptions {
  Sampler sampler = Sampler::random_update;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  std::uint64_t max_updates = 100'000'000;
  // Random update only: hold with probability 1/2 per step.
  bool lazy = false;
  // Extra updates simulated after coalescence to confirm the chains stay
  // together.
  std::uint64_t suffix_check_updates = 0;
};

struct CoupledRun {
  std::uint64_t coalescence_updates = 0;
  bool truncated = false;
  // Updates after which the upper chain was below the lower one somewhere.
  std::uint64_t sandwich_violations = 0;
  // Updates after coalescence at which the chains differed.
  std::uint64_t separations = 0;
};

struct CouplingReport {
  Sampler sampler = Sampler::random_update;
  std::size_t replicates = 0;
  // Coalescence times (variable updates) of non-truncated replicates, in
  // replicate order.
  std::vector<std::uint64_t> samples;
  // Per-replicate outcome, including truncated ones.
  std::vector<CoupledRun> runs;
  double mean = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  std::size_t truncated_count = 0;
  std::uint64_t sandwich_violations = 0;
  std::uint64_t separations = 0;
};

// Runs two copies from `upper` and `lower` under the shared-uniform
// heat-bath coupling: at each site update one u ~ U[0,1) is drawn and the
// site is set to 1 in a chain iff u < that chain's P(site = 1 | rest).
// Random update draws the site uniformly; alternating scan sweeps V1 then
// V2 and tests coalescence at epoch boundaries. Randomness is keyed by
// (seed, replicate, update index).
CoupledRun coupled_run(const BipartiteModel& model, Sampler sampler, Configuration upper,
                       Configuration lower, std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t max_updates, bool lazy = false,
                       std::uint64_t suffix_check_updates = 0);

// Coalescence times from the all-ones and all-zeros starts.
CouplingReport grand_coupling_time(const BipartiteModel& model, const CouplingOptions& options);

}  // namespace scanorder
