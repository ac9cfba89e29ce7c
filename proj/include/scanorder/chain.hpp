#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "scanorder/model.hpp"

namespace scanorder {

inline constexpr std::size_t kDefaultStateCap = 4096;

// Positive-weight configurations in lexicographic order with their
// normalized stationary probabilities.
class StateSpace {
 public:
  StateSpace(std::vector<Configuration> configs, Eigen::VectorXd pi, int domain_size);

  std::size_t size() const noexcept { return configs_.size(); }
  const std::vector<Configuration>& configs() const noexcept { return configs_; }
  const Configuration& config(std::size_t i) const { return configs_.at(i); }
  const Eigen::VectorXd& pi() const noexcept { return pi_; }
  double pi_min() const noexcept { return pi_.minCoeff(); }

  std::optional<std::size_t> find(const Configuration& config) const;
  std::size_t index_of(const Configuration& config) const;

 private:
  std::uint64_t encode(const Configuration& config) const;

  std::vector<Configuration> configs_;
  Eigen::VectorXd pi_;
  int domain_size_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

enum class StepUnit { variable_update, epoch, half_epoch, composite };

const char* to_string(StepUnit unit) noexcept;

// Dense row-stochastic transition matrix.
struct Kernel {
  Eigen::MatrixXd matrix;
  StepUnit unit = StepUnit::composite;
  std::string label;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

StateSpace enumerate_state_space(const BipartiteModel& model, std::size_t cap = kDefaultStateCap);

// Single-site heat-bath update of variable x: T_x(sigma, sigma^{x,s}) is the
// conditional probability of s.
Kernel single_site_kernel(const BipartiteModel& model, const StateSpace& space, std::size_t x);

// Lazy: I/2 + (1/2n) sum_x T_x. Non-lazy: (1/n) sum_x T_x.
Kernel random_update_kernel(const BipartiteModel& model, const StateSpace& space, bool lazy = true);

struct ScanKernels {
  Kernel alternating;   // P_AS = P_AS1 P_AS2, one epoch
  Kernel first_scan;    // P_AS1 = prod over V1 of T_x
  Kernel second_scan;   // P_AS2 = prod over V2 of T_y
  Kernel first_gibbs;   // P_GS1 = I/2 + (1/2n1) sum over V1 of T_x
  Kernel second_gibbs;  // P_GS2 = I/2 + (1/2n2) sum over V2 of T_y
};

// Requires a bipartite model. Each partition is scanned in ascending
// variable index.
ScanKernels scan_kernels(const BipartiteModel& model, const StateSpace& space);

// Sequential scan over an explicit variable order: prod_i T_{order[i]}.
Kernel sequential_scan_kernel(const BipartiteModel& model, const StateSpace& space,
                              const std::vector<std::size_t>& order);

Kernel identity_kernel(std::size_t size);

// S_pi: every row equals pi.
Kernel stationary_projector(const Eigen::VectorXd& pi);

// Kernel product a*b, renormalized against floating-point drift.
Kernel multiply(const Kernel& a, const Kernel& b, std::string label = {});

// Clamps tiny negatives to zero and rescales rows whose sum is within
// `tolerance` of one. Throws NumericalError on larger deviations.
void renormalize_rows(Eigen::MatrixXd& m, double tolerance = 1e-12);

// max_i |(pi^T P)_i - pi_i|
double stationarity_error(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi);

// max_{i,j} |pi_i P_ij - pi_j P_ji|
double detailed_balance_violation(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi);

// P*(s,t) = pi(t) P(t,s) / pi(s). Throws NumericalError when pi is not
// stationary for P within 1e-10.
Kernel adjoint(const Kernel& kernel, const Eigen::VectorXd& pi);
inline Kernel adjoint(const Kernel& kernel, const StateSpace& space) { return adjoint(kernel, space.pi()); }

// R(P) = P P*.
Kernel reversibilization(const Kernel& kernel, const Eigen::VectorXd& pi);
inline Kernel reversibilization(const Kernel& kernel, const StateSpace& space) {
  return reversibilization(kernel, space.pi());
}

struct Ergodicity {
  bool irreducible = false;
  bool aperiodic = false;
  bool ergodic() const noexcept { return irreducible && aperiodic; }
};

// Irreducible iff the support digraph is strongly connected; aperiodic is
// reported true when some diagonal entry is positive (sufficient condition).
Ergodicity ergodicity_check(const Kernel& kernel);

// Writes "row,col,value" for entries above 1e-15.
void write_kernel_csv(const Kernel& kernel, std::ostream& out);

}  // namespace scanorder
