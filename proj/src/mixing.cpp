#include "scanorder/mixing.hpp"

#include <algorithm>
#include <cmath>

#include "scanorder/errors.hpp"
#include "scanorder/spectral.hpp"

namespace scanorder {

double tv_distance(std::span<const double> mu, std::span<const double> nu) {
  if (mu.size() != nu.size()) throw Error("tv_distance: length mismatch");
  double sum_mu = 0.0, sum_nu = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    sum_mu += mu[i];
    sum_nu += nu[i];
    l1 += std::abs(mu[i] - nu[i]);
  }
  if (std::abs(sum_mu - 1.0) > 1e-9 || std::abs(sum_nu - 1.0) > 1e-9)
    throw Error("tv_distance: inputs must be probability vectors");
  return std::min(1.0, 0.5 * l1);
}

double worst_start_tv(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    worst = std::max(worst, 0.5 * (q.row(i).transpose() - pi).cwiseAbs().sum());
  return worst;
}

namespace {

void require_ergodic(const Kernel& kernel) {
  if (!ergodicity_check(kernel).ergodic())
    throw NumericalError(kernel.label + " is not ergodic; mixing time undefined");
}

// Column-sparse view of a kernel, used when it has few nonzeros (single
// site and random-update chains).
class StepOperator {
 public:
  explicit StepOperator(const Eigen::MatrixXd& p) : p_(p) {
    const Eigen::Index n = p.rows();
    std::size_t nnz = 0;
    columns_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        if (p(k, j) != 0.0) {
          columns_[static_cast<std::size_t>(j)].push_back({k, p(k, j)});
          ++nnz;
        }
    sparse_ = 4 * nnz < static_cast<std::size_t>(n * n);
  }

  // q * P
  Eigen::MatrixXd apply(const Eigen::MatrixXd& q) const {
    if (!sparse_) return q * p_;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(q.rows(), q.cols());
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      auto col = out.col(static_cast<Eigen::Index>(j));
      for (const auto& [k, w] : columns_[j]) col += w * q.col(k);
    }
    return out;
  }

 private:
  struct Entry {
    Eigen::Index row;
    double value;
  };
  const Eigen::MatrixXd& p_;
  std::vector<std::vector<Entry>> columns_;
  bool sparse_ = false;
};

double start_tv(const Eigen::VectorXd& pi) { return 1.0 - pi.minCoeff(); }

}  // namespace

MixingReport exact_mixing_time(const Kernel& kernel, const Eigen::VectorXd& pi, double threshold,
                               std::uint64_t t_max) {
  if (t_max < 1) throw Error("t_max must be at least 1");
  if (kernel.size() != static_cast<std::size_t>(pi.size())) throw Error("kernel and pi sizes differ");
  require_ergodic(kernel);

  MixingReport report;
  report.threshold = threshold;
  report.unit = kernel.unit;
  const double d0 = start_tv(pi);
  report.tv_curve.emplace_back(0, d0);
  if (d0 <= threshold) return report;

  const StepOperator step(kernel.matrix);
  Eigen::MatrixXd q = kernel.matrix;
  for (std::uint64_t t = 1;; ++t) {
    const double d = worst_start_tv(q, pi);
    report.tv_curve.emplace_back(t, d);
    if (d <= threshold) {
      report.mixing_time = t;
      return report;
    }
    if (t == t_max) {
      report.mixing_time = t_max;
      report.truncated = true;
      return report;
    }
    q = step.apply(q);
  }
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& p, std::uint64_t t) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(p.rows(), p.cols());
  Eigen::MatrixXd base = p;
  while (t > 0) {
    if (t & 1U) result = result * base;
    t >>= 1U;
    if (t > 0) base = base * base;
  }
  return result;
}

MixingReport mixing_time_by_doubling(const Kernel& kernel, const Eigen::VectorXd& pi, double threshold,
                                     std::uint64_t t_max) {
  if (t_max < 1) throw Error("t_max must be at least 1");
  if (kernel.size() != static_cast<std::size_t>(pi.size())) throw Error("kernel and pi sizes differ");
  require_ergodic(kernel);

  MixingReport report;
  report.threshold = threshold;
  report.unit = kernel.unit;
  const double d0 = start_tv(pi);
  report.tv_curve.emplace_back(0, d0);
  if (d0 <= threshold) return report;

  // powers[k] = P^(2^k); grow until below threshold or past t_max.
  std::vector<Eigen::MatrixXd> powers{kernel.matrix};
  for (std::uint64_t span = 1;; span *= 2) {
    const double d = worst_start_tv(powers.back(), pi);
    report.tv_curve.emplace_back(span, d);
    if (d <= threshold) break;
    if (span >= t_max || span > (std::uint64_t{1} << 62)) {
      report.mixing_time = t_max;
      report.truncated = true;
      return report;
    }
    powers.push_back(powers.back() * powers.back());
  }

  // d(2^(K-1)) > threshold >= d(2^K): lift the largest t with d(t) > threshold.
  const std::size_t top = powers.size() - 1;
  if (top == 0) {
    report.mixing_time = 1;
    return report;
  }
  Eigen::MatrixXd q = powers[top - 1];
  std::uint64_t t = std::uint64_t{1} << (top - 1);
  for (std::size_t j = top - 1; j-- > 0;) {
    Eigen::MatrixXd candidate = q * powers[j];
    const std::uint64_t t_candidate = t + (std::uint64_t{1} << j);
    const double d = worst_start_tv(candidate, pi);
    report.tv_curve.emplace_back(t_candidate, d);
    if (d > threshold) {
      q = std::move(candidate);
      t = t_candidate;
    }
  }
  std::sort(report.tv_curve.begin(), report.tv_curve.end());
  report.mixing_time = t + 1;
  if (report.mixing_time > t_max) {
    report.mixing_time = t_max;
    report.truncated = true;
  }
  return report;
}

MixingBoundsReport verify_mixing_bounds(const BipartiteModel& model, std::size_t cap, double threshold,
                                        bool lazy, std::uint64_t t_max) {
  const StateSpace space = enumerate_state_space(model, cap);
  const Kernel ru = random_update_kernel(model, space, lazy);
  const ScanKernels scans = scan_kernels(model, space);

  MixingBoundsReport out;
  out.state_count = space.size();
  out.pi_min = space.pi_min();
  out.t_rel_ru = relaxation_time(ru, space).relaxation_time;
  out.t_rel_as = relaxation_time(scans.alternating, space).relaxation_time;
  const MixingReport mix_ru = mixing_time_by_doubling(ru, space.pi(), threshold, t_max);
  const MixingReport mix_as = mixing_time_by_doubling(scans.alternating, space.pi(), threshold, t_max);
  out.t_mix_ru = mix_ru.mixing_time;
  out.t_mix_as = mix_as.mixing_time;
  out.truncated = mix_ru.truncated || mix_as.truncated;

  const double log_rev = std::log(2.0 * M_E / out.pi_min);
  const double log_nonrev = std::log(4.0 * M_E * M_E / out.pi_min);
  const auto mix_ru_d = static_cast<double>(out.t_mix_ru);
  const auto mix_as_d = static_cast<double>(out.t_mix_as);
  out.relaxation_sandwich = out.t_rel_ru - 1.0 <= mix_ru_d && mix_ru_d <= out.t_rel_ru * log_rev;
  out.nonreversible_bound = mix_as_d <= log_nonrev * out.t_rel_as;
  out.mixing_comparison = mix_as_d <= log_nonrev * (mix_ru_d + 1.0);
  return out;
}

FillReport verify_fill_inequality(const Kernel& kernel, const Eigen::VectorXd& pi,
                                  const std::vector<std::uint64_t>& t_samples) {
  if (!ergodicity_check(kernel).ergodic()) throw NumericalError(kernel.label + " is not ergodic");
  FillReport report;
  const Kernel r = reversibilization(kernel, pi);
  report.reversibilized_gap = std::clamp(1.0 - deviation_norm(r.matrix, pi), 0.0, 1.0);
  report.min_slack = INFINITY;

  std::vector<std::uint64_t> times = t_samples;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(kernel.matrix.rows(), kernel.matrix.cols());
  std::uint64_t at = 0;
  for (std::uint64_t t : times) {
    q = q * matrix_power(kernel.matrix, t - at);
    at = t;
    const double decay = std::pow(1.0 - report.reversibilized_gap, static_cast<double>(t));
    for (Eigen::Index s = 0; s < q.rows(); ++s) {
      const double tv = 0.5 * (q.row(s).transpose() - pi).cwiseAbs().sum();
      FillPoint p{t, static_cast<std::size_t>(s), tv * tv, decay / pi(s)};
      report.min_slack = std::min(report.min_slack, p.slack());
      report.points.push_back(p);
    }
  }
  report.holds = report.min_slack >= -1e-10;
  return report;
}

}  // namespace scanorder
