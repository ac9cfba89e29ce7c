#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "scanorder/chain.hpp"
#include "scanorder/model.hpp"

namespace scanorder {

// 1/(2e)
inline constexpr double kDefaultThreshold = 0.18393972058572116;
inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000;

// Half the L1 distance. Both inputs must have equal length and sum to one
// within 1e-9.
double tv_distance(std::span<const double> mu, std::span<const double> nu);

// max over rows s of TV(q(s, .), pi).
double worst_start_tv(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi);

struct MixingReport {
  std::uint64_t mixing_time = 0;
  double threshold = kDefaultThreshold;
  // (t, worst-start TV) for t = 0, 1, ..., mixing_time. The doubling method
  // records only the powers it evaluated.
  std::vector<std::pair<std::uint64_t, double>> tv_curve;
  bool truncated = false;
  StepUnit unit = StepUnit::composite;
};

// Iterates Q <- Q P from Q = P until the worst-start TV drops to the
// threshold; flags truncation at t_max. Requires an ergodic kernel.
MixingReport exact_mixing_time(const Kernel& kernel, const Eigen::VectorXd& pi,
                               double threshold = kDefaultThreshold,
                               std::uint64_t t_max = kDefaultMaxSteps);
inline MixingReport exact_mixing_time(const Kernel& kernel, const StateSpace& space,
                                      double threshold = kDefaultThreshold,
                                      std::uint64_t t_max = kDefaultMaxSteps) {
  return exact_mixing_time(kernel, space.pi(), threshold, t_max);
}

// Same quantity by repeated squaring and binary lifting: O(log T) dense
// products. Exact because the worst-start TV is non-increasing in t.
MixingReport mixing_time_by_doubling(const Kernel& kernel, const Eigen::VectorXd& pi,
                                     double threshold = kDefaultThreshold,
                                     std::uint64_t t_max = kDefaultMaxSteps);

// P^t by binary powering.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& p, std::uint64_t t);

struct MixingBoundsReport {
  std::size_t state_count = 0;
  double pi_min = 0.0;
  double t_rel_ru = 0.0;
  double t_rel_as = 0.0;
  std::uint64_t t_mix_ru = 0;
  std::uint64_t t_mix_as = 0;
  bool truncated = false;
  // T_rel(RU) - 1 <= T_mix(RU) <= T_rel(RU) log(2e / pi_min)
  bool relaxation_sandwich = false;
  // T_mix(AS) <= log(4e^2 / pi_min) T_rel(AS)
  bool nonreversible_bound = false;
  // T_mix(AS) <= log(4e^2 / pi_min) (T_mix(RU) + 1)
  bool mixing_comparison = false;
  bool all_hold() const noexcept {
    return !truncated && relaxation_sandwich && nonreversible_bound && mixing_comparison;
  }
};

MixingBoundsReport verify_mixing_bounds(const BipartiteModel& model,
                                        std::size_t cap = kDefaultStateCap,
                                        double threshold = kDefaultThreshold, bool lazy = true,
                                        std::uint64_t t_max = kDefaultMaxSteps);

struct FillPoint {
  std::uint64_t t = 0;
  std::size_t start = 0;
  double tv_squared = 0.0;
  double bound = 0.0;
  double slack() const noexcept { return bound - tv_squared; }
};

struct FillReport {
  double reversibilized_gap = 0.0;
  std::vector<FillPoint> points;
  double min_slack = 0.0;
  bool holds = false;
};

// Checks TV(P^t(s,.), pi)^2 <= (1 - gap(R(P)))^t / pi(s) + 1e-10 for every
// start s and each sampled t.
FillReport verify_fill_inequality(const Kernel& kernel, const Eigen::VectorXd& pi,
                                  const std::vector<std::uint64_t>& t_samples);

}  // namespace scanorder
