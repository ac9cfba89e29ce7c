#include "scanorder/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

#include "scanorder/errors.hpp"

namespace scanorder {

StateSpace::StateSpace(std::vector<Configuration> configs, Eigen::VectorXd pi, int domain_size)
    : configs_(std::move(configs)), pi_(std::move(pi)), domain_size_(domain_size) {
  if (configs_.empty()) throw Error("state space is empty");
  if (static_cast<std::size_t>(pi_.size()) != configs_.size())
    throw Error("stationary vector length does not match the state count");
  if ((pi_.array() <= 0.0).any()) throw NumericalError("stationary probabilities must be positive");
  if (std::abs(pi_.sum() - 1.0) > 1e-12) throw NumericalError("stationary vector does not sum to one");
  index_.reserve(configs_.size());
  for (std::size_t i = 0; i < configs_.size(); ++i) {
    if (!index_.emplace(encode(configs_[i]), i).second) throw Error("duplicate configuration");
  }
}

std::uint64_t StateSpace::encode(const Configuration& config) const {
  std::uint64_t code = 0;
  for (int s : config) code = code * static_cast<std::uint64_t>(domain_size_) + static_cast<std::uint64_t>(s);
  return code;
}

std::optional<std::size_t> StateSpace::find(const Configuration& config) const {
  if (!configs_.empty() && config.size() != configs_.front().size()) return std::nullopt;
  auto it = index_.find(encode(config));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateSpace::index_of(const Configuration& config) const {
  auto i = find(config);
  if (!i) throw Error("configuration is not in the state space");
  return *i;
}

const char* to_string(StepUnit unit) noexcept {
  switch (unit) {
    case StepUnit::variable_update: return "variable_update";
    case StepUnit::epoch: return "epoch";
    case StepUnit::half_epoch: return "half_epoch";
    case StepUnit::composite: return "composite";
  }
  return "unknown";
}

StateSpace enumerate_state_space(const BipartiteModel& model, std::size_t cap) {
  const std::size_t n = model.size();
  const auto q = static_cast<unsigned>(model.domain_size());
  if (static_cast<double>(n) * std::log2(static_cast<double>(q)) > 62.0)
    throw CapExceeded("state space exceeds cap: too many variables to enumerate", cap + 1);

  std::vector<Configuration> configs;
  std::vector<double> energies;
  Configuration sigma(n, 0);
  for (bool done = false; !done;) {
    if (unnormalized_weight(model, sigma) > 0.0) {
      if (configs.size() == cap)
        throw CapExceeded("state space exceeds cap of " + std::to_string(cap) + " (reached " +
                              std::to_string(cap + 1) + ")",
                          cap + 1);
      configs.push_back(sigma);
      energies.push_back(hamiltonian(model, sigma));
    }
    // Odometer with the last variable fastest: lexicographic order.
    for (std::size_t pos = n;;) {
      if (pos == 0) {
        done = true;
        break;
      }
      --pos;
      if (++sigma[pos] < static_cast<int>(q)) break;
      sigma[pos] = 0;
    }
  }
  if (configs.empty()) throw Error("model has no configuration with positive weight");

  const double top = *std::max_element(energies.begin(), energies.end());
  Eigen::VectorXd pi(static_cast<Eigen::Index>(configs.size()));
  for (std::size_t i = 0; i < configs.size(); ++i) pi(static_cast<Eigen::Index>(i)) = std::exp(energies[i] - top);
  pi /= pi.sum();
  return StateSpace(std::move(configs), std::move(pi), model.domain_size());
}

namespace {

// Row-sparse form of T_x: every row has at most |S| targets.
struct SiteUpdate {
  struct Entry {
    Eigen::Index col;
    double prob;
  };
  std::vector<std::vector<Entry>> rows;
};

SiteUpdate build_site_update(const BipartiteModel& model, const StateSpace& space, std::size_t x) {
  if (x >= model.size()) throw Error("variable index out of range");
  SiteUpdate t;
  t.rows.resize(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    Configuration tau = space.config(i);
    const auto p = conditional_distribution(model, tau, x);
    for (std::size_t s = 0; s < p.size(); ++s) {
      if (p[s] <= 0.0) continue;
      tau[x] = static_cast<int>(s);
      t.rows[i].push_back({static_cast<Eigen::Index>(space.index_of(tau)), p[s]});
    }
  }
  return t;
}

Eigen::MatrixXd to_dense(const SiteUpdate& t) {
  const auto n = static_cast<Eigen::Index>(t.rows.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (const auto& e : t.rows[static_cast<std::size_t>(i)]) m(i, e.col) += e.prob;
  return m;
}

// a * T with T row-sparse: column j of the result accumulates
// T(k, j) * a(:, k) over rows k in ascending order.
Eigen::MatrixXd right_multiply(const Eigen::MatrixXd& a, const SiteUpdate& t) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    for (const auto& e : t.rows[static_cast<std::size_t>(k)]) out.col(e.col) += e.prob * a.col(k);
  return out;
}

void add_scaled(Eigen::MatrixXd& m, const SiteUpdate& t, double scale) {
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (const auto& e : t.rows[i]) m(static_cast<Eigen::Index>(i), e.col) += scale * e.prob;
}

Eigen::MatrixXd scan_product(const BipartiteModel& model, const StateSpace& space,
                             const std::vector<std::size_t>& order, Eigen::MatrixXd start) {
  for (std::size_t x : order) {
    start = right_multiply(start, build_site_update(model, space, x));
    renormalize_rows(start);
  }
  return start;
}

Eigen::MatrixXd lazy_average(const BipartiteModel& model, const StateSpace& space,
                             const std::vector<std::size_t>& vars) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = 0.5 * Eigen::MatrixXd::Identity(n, n);
  const double w = 1.0 / (2.0 * static_cast<double>(vars.size()));
  for (std::size_t x : vars) add_scaled(m, build_site_update(model, space, x), w);
  renormalize_rows(m);
  return m;
}

}  // namespace

void renormalize_rows(Eigen::MatrixXd& m, double tolerance) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      double& v = m(i, j);
      if (v < 0.0) {
        if (v < -1e-12) throw NumericalError("kernel entry " + std::to_string(v) + " is negative");
        v = 0.0;
      }
    }
    const double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > tolerance)
      throw NumericalError("kernel row " + std::to_string(i) + " sums to " + std::to_string(sum));
    m.row(i) /= sum;
  }
}

Kernel single_site_kernel(const BipartiteModel& model, const StateSpace& space, std::size_t x) {
  return Kernel{to_dense(build_site_update(model, space, x)), StepUnit::variable_update,
                "T_" + std::to_string(x)};
}

Kernel random_update_kernel(const BipartiteModel& model, const StateSpace& space, bool lazy) {
  const auto n = static_cast<Eigen::Index>(space.size());
  const double vars = static_cast<double>(model.size());
  Eigen::MatrixXd m = lazy ? Eigen::MatrixXd(0.5 * Eigen::MatrixXd::Identity(n, n))
                           : Eigen::MatrixXd(Eigen::MatrixXd::Zero(n, n));
  const double w = lazy ? 1.0 / (2.0 * vars) : 1.0 / vars;
  for (std::size_t x = 0; x < model.size(); ++x) add_scaled(m, build_site_update(model, space, x), w);
  renormalize_rows(m);
  return Kernel{std::move(m), StepUnit::variable_update, lazy ? "P_RU" : "P_RU_nonlazy"};
}

Kernel sequential_scan_kernel(const BipartiteModel& model, const StateSpace& space,
                              const std::vector<std::size_t>& order) {
  if (order.empty()) return identity_kernel(space.size());
  Eigen::MatrixXd m = to_dense(build_site_update(model, space, order.front()));
  std::vector<std::size_t> rest(order.begin() + 1, order.end());
  return Kernel{scan_product(model, space, rest, std::move(m)), StepUnit::composite, "scan"};
}

ScanKernels scan_kernels(const BipartiteModel& model, const StateSpace& space) {
  validate_bipartite(model);
  const auto& v1 = model.first_partition();
  const auto& v2 = model.second_partition();

  Kernel first = sequential_scan_kernel(model, space, v1);
  first.unit = StepUnit::half_epoch;
  first.label = "P_AS1";
  Kernel second = sequential_scan_kernel(model, space, v2);
  second.unit = StepUnit::half_epoch;
  second.label = "P_AS2";
  // Continue the V1 product through the V2 updates: the same ordered
  // product T_{x_1} ... T_{x_n1} T_{y_1} ... T_{y_n2}.
  Kernel alternating{scan_product(model, space, v2, first.matrix), StepUnit::epoch, "P_AS"};

  Kernel gibbs1{lazy_average(model, space, v1), StepUnit::half_epoch, "P_GS1"};
  Kernel gibbs2{lazy_average(model, space, v2), StepUnit::half_epoch, "P_GS2"};
  return ScanKernels{std::move(alternating), std::move(first), std::move(second), std::move(gibbs1),
                     std::move(gibbs2)};
}

Kernel identity_kernel(std::size_t size) {
  const auto n = static_cast<Eigen::Index>(size);
  return Kernel{Eigen::MatrixXd::Identity(n, n), StepUnit::composite, "I"};
}

Kernel stationary_projector(const Eigen::VectorXd& pi) {
  Eigen::MatrixXd m = Eigen::VectorXd::Ones(pi.size()) * pi.transpose();
  return Kernel{std::move(m), StepUnit::composite, "S_pi"};
}

Kernel multiply(const Kernel& a, const Kernel& b, std::string label) {
  if (a.size() != b.size()) throw Error("kernel sizes differ");
  Eigen::MatrixXd m = a.matrix * b.matrix;
  renormalize_rows(m);
  if (label.empty()) label = a.label + "*" + b.label;
  return Kernel{std::move(m), StepUnit::composite, std::move(label)};
}

double stationarity_error(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi) {
  if (kernel.rows() != pi.size() || kernel.cols() != pi.size()) throw Error("kernel and pi sizes differ");
  return (kernel.transpose() * pi - pi).cwiseAbs().maxCoeff();
}

double detailed_balance_violation(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& pi) {
  if (kernel.rows() != pi.size() || kernel.cols() != pi.size()) throw Error("kernel and pi sizes differ");
  const Eigen::MatrixXd flow = pi.asDiagonal() * kernel;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

Kernel adjoint(const Kernel& kernel, const Eigen::VectorXd& pi) {
  const double err = stationarity_error(kernel.matrix, pi);
  if (err > 1e-10)
    throw NumericalError("pi is not stationary for " + kernel.label + " (error " + std::to_string(err) + ")");
  Eigen::MatrixXd m = pi.cwiseInverse().asDiagonal() * kernel.matrix.transpose() * pi.asDiagonal();
  renormalize_rows(m, 1e-10);
  return Kernel{std::move(m), kernel.unit, kernel.label + "*"};
}

Kernel reversibilization(const Kernel& kernel, const Eigen::VectorXd& pi) {
  return multiply(kernel, adjoint(kernel, pi), "R(" + kernel.label + ")");
}

namespace {

std::vector<bool> reachable(const Eigen::MatrixXd& m, bool forward) {
  const Eigen::Index n = m.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = forward ? m(i, j) : m(j, i);
      if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

Ergodicity ergodicity_check(const Kernel& kernel) {
  Ergodicity out;
  if (kernel.size() == 0) return out;
  const auto all = [](const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); };
  out.irreducible = all(reachable(kernel.matrix, true)) && all(reachable(kernel.matrix, false));
  out.aperiodic = (kernel.matrix.diagonal().array() > 0.0).any();
  return out;
}

void write_kernel_csv(const Kernel& kernel, std::ostream& out) {
  out << "row,col,value\n";
  char buf[64];
  for (Eigen::Index i = 0; i < kernel.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < kernel.matrix.cols(); ++j) {
      const double v = kernel.matrix(i, j);
      if (v <= 1e-15) continue;
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << i << ',' << j << ',' << buf << '\n';
    }
}

}  // namespace scanorder
