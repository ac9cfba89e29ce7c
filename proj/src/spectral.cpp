#include "scanorder/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "scanorder/errors.hpp"

namespace scanorder {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

Eigen::MatrixXd conjugate(const Eigen::MatrixXd& m, const Eigen::VectorXd& pi) {
  if (m.rows() != pi.size() || m.cols() != pi.size()) throw Error("operator and pi sizes differ");
  const Eigen::VectorXd root = pi.cwiseSqrt();
  return root.asDiagonal() * m * root.cwiseInverse().asDiagonal();
}

Eigen::VectorXd symmetric_eigenvalues(Eigen::MatrixXd c) {
  const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTolerance)
    throw NumericalError("kernel not symmetric after conjugation (asymmetry " + std::to_string(asym) + ")");
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

double max_modulus(const Eigen::VectorXd& values) { return values.cwiseAbs().maxCoeff(); }

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

void require_ergodic(const Kernel& kernel) {
  const Ergodicity e = ergodicity_check(kernel);
  if (!e.irreducible) throw NumericalError(kernel.label + " is not irreducible");
  if (!e.aperiodic) throw NumericalError(kernel.label + " is not known to be aperiodic");
}

}  // namespace

Eigen::VectorXd conjugated_spectrum(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi) {
  return symmetric_eigenvalues(conjugate(kernel, pi));
}

double deviation_norm(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd projector = Eigen::VectorXd::Ones(pi.size()) * pi.transpose();
  return max_modulus(symmetric_eigenvalues(conjugate(kernel - projector, pi)));
}

double general_operator_norm(const Eigen::MatrixXd& op, const Eigen::VectorXd& pi) {
  const Eigen::MatrixXd c = conjugate(op, pi);
  Eigen::MatrixXd gram = c.transpose() * c;
  gram = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double relaxation_time_via_reversibilization(const Kernel& kernel, const Eigen::VectorXd& pi) {
  const Kernel r = reversibilization(kernel, pi);
  const double r_gap = clamp_unit(1.0 - deviation_norm(r.matrix, pi));
  const double denom = 1.0 - std::sqrt(1.0 - r_gap);
  if (!(denom > 0.0)) throw NumericalError("spectral gap of " + r.label + " is zero");
  return 1.0 / denom;
}

SpectralReport relaxation_time(const Kernel& kernel, const Eigen::VectorXd& pi) {
  require_ergodic(kernel);
  SpectralReport report;
  report.reversible = detailed_balance_violation(kernel.matrix, pi) <= kReversibilityTolerance;
  if (report.reversible) {
    report.second_largest_modulus = deviation_norm(kernel.matrix, pi);
    report.gap = clamp_unit(1.0 - report.second_largest_modulus);
    report.method = "reversible";
    if (!(report.gap > 0.0)) throw NumericalError("spectral gap of " + kernel.label + " is zero");
    report.relaxation_time = 1.0 / report.gap;
  } else {
    const Kernel r = reversibilization(kernel, pi);
    report.second_largest_modulus = deviation_norm(r.matrix, pi);
    report.gap = clamp_unit(1.0 - report.second_largest_modulus);
    report.method = "multiplicative_reversibilization";
    const double denom = 1.0 - std::sqrt(1.0 - report.gap);
    if (!(denom > 0.0)) throw NumericalError("spectral gap of " + r.label + " is zero");
    report.relaxation_time = 1.0 / denom;
  }
  return report;
}

RelaxationComparison compare_relaxation_times(const BipartiteModel& model, std::size_t cap, bool lazy) {
  const StateSpace space = enumerate_state_space(model, cap);
  const Kernel ru = random_update_kernel(model, space, lazy);
  if (!ergodicity_check(ru).ergodic()) throw NumericalError("random-update kernel is not ergodic");
  ScanKernels scans = scan_kernels(model, space);

  RelaxationComparison out;
  out.state_count = space.size();

  // P_RU is reversible by construction; its deviation norm gives both the
  // Contraction bound and T_rel(P_RU).
  out.random_update_norm = deviation_norm(ru.matrix, space.pi());
  const double ru_gap = clamp_unit(1.0 - out.random_update_norm);
  if (!(ru_gap > 0.0)) throw NumericalError("random-update spectral gap is zero");
  out.t_rel_ru = 1.0 / ru_gap;

  require_ergodic(scans.alternating);
  const Kernel r = reversibilization(scans.alternating, space.pi());
  out.reversibilized_as_norm = deviation_norm(r.matrix, space.pi());
  const double as_denom = 1.0 - std::sqrt(1.0 - clamp_unit(1.0 - out.reversibilized_as_norm));
  if (!(as_denom > 0.0)) throw NumericalError("alternating-scan spectral gap is zero");
  out.t_rel_as = 1.0 / as_denom;

  out.holds = out.t_rel_as <= out.t_rel_ru + 1e-9;
  out.contraction_holds =
      out.reversibilized_as_norm <= out.random_update_norm * out.random_update_norm + 1e-10;
  return out;
}

}  // namespace scanorder
