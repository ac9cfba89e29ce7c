#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

#include "scanorder/chain.hpp"
#include "scanorder/model.hpp"

namespace scanorder {

struct SpectralReport {
  // Gap of P when reversible, gap of R(P) = P P* otherwise.
  double gap = 0.0;
  double second_largest_modulus = 1.0;
  double relaxation_time = 0.0;
  bool reversible = false;
  std::string method;
};

// Detailed-balance tolerance used to pick the reversible formula.
inline constexpr double kReversibilityTolerance = 1e-10;

// Largest |eigenvalue| of D^{1/2} (P - S_pi) D^{-1/2}, D = diag(pi). The
// conjugated matrix must be symmetric within 1e-9 (P reversible, or P a
// reversibilization); otherwise throws NumericalError.
double deviation_norm(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi);
inline double deviation_norm(const Kernel& kernel, const StateSpace& space) {
  return deviation_norm(kernel.matrix, space.pi());
}

// Largest singular value of D^{1/2} M D^{-1/2}: the L2(pi) operator norm of
// an arbitrary (not necessarily stochastic or symmetric) operator M.
double general_operator_norm(const Eigen::MatrixXd& op, const Eigen::VectorXd& pi);
inline double general_operator_norm(const Eigen::MatrixXd& op, const StateSpace& space) {
  return general_operator_norm(op, space.pi());
}

// Eigenvalues (ascending) of the symmetrized conjugation of a pi-reversible
// kernel. Exposed for inspection and tests.
Eigen::VectorXd conjugated_spectrum(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi);

// Reversible kernels: 1 / gap(P). Others: 1 / (1 - sqrt(1 - gap(R(P)))).
// Throws NumericalError for non-ergodic kernels or a vanishing gap.
SpectralReport relaxation_time(const Kernel& kernel, const Eigen::VectorXd& pi);
inline SpectralReport relaxation_time(const Kernel& kernel, const StateSpace& space) {
  return relaxation_time(kernel, space.pi());
}

// The non-reversible formula applied unconditionally (for comparing both
// routes on reversible kernels).
double relaxation_time_via_reversibilization(const Kernel& kernel, const Eigen::VectorXd& pi);

struct RelaxationComparison {
  std::size_t state_count = 0;
  double t_rel_as = 0.0;
  double t_rel_ru = 0.0;
  bool holds = false;
  // ||R(P_AS) - S_pi||_pi and ||P_RU - S_pi||_pi.
  double reversibilized_as_norm = 0.0;
  double random_update_norm = 0.0;
  bool contraction_holds = false;
};

// Builds P_RU (lazy by default) and P_AS, then compares relaxation times.
RelaxationComparison compare_relaxation_times(const BipartiteModel& model, std::size_t cap = kDefaultStateCap,
                               bool lazy = true);

}  // namespace scanorder
