#pragma once

// Reference computations used only by the tests. Everything here is built
// from first principles (direct weight ratios, naive products, cyclic
// Jacobi rotations, exact rationals) and shares no code path with the
// library beyond the BipartiteModel data accessors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "scanorder/model.hpp"

namespace oracle {

using scanorder::BipartiteModel;
using scanorder::Configuration;
using Rational = boost::multiprecision::cpp_rational;

inline double raw_weight(const BipartiteModel& m, const Configuration& c) {
  if (m.constraint() == scanorder::HardConstraint::hardcore) {
    for (const auto& e : m.edges())
      if (c[e.u] != 0 && c[e.v] != 0) return 0.0;
  }
  double h = 0.0;
  for (const auto& e : m.edges()) h += e.table[static_cast<std::size_t>(c[e.u] * m.domain_size() + c[e.v])];
  for (std::size_t v = 0; v < m.size(); ++v) h += m.unaries()[v][static_cast<std::size_t>(c[v])];
  return std::exp(h);
}

// All configurations with positive weight, lexicographic, by counting in
// base |S| with the last variable fastest.
inline std::vector<Configuration> support(const BipartiteModel& m) {
  const std::size_t n = m.size();
  const auto q = static_cast<std::size_t>(m.domain_size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= q;
  std::vector<Configuration> out;
  for (std::size_t code = 0; code < total; ++code) {
    Configuration c(n);
    std::size_t rest = code;
    for (std::size_t i = n; i-- > 0;) {
      c[i] = static_cast<int>(rest % q);
      rest /= q;
    }
    if (raw_weight(m, c) > 0.0) out.push_back(c);
  }
  return out;
}

inline Eigen::VectorXd stationary(const BipartiteModel& m, const std::vector<Configuration>& states) {
  Eigen::VectorXd pi(static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) pi(static_cast<Eigen::Index>(i)) = raw_weight(m, states[i]);
  return pi / pi.sum();
}

inline std::size_t locate(const std::vector<Configuration>& states, const Configuration& c) {
  return static_cast<std::size_t>(std::lower_bound(states.begin(), states.end(), c) - states.begin());
}

// T_x by the ratio pi(sigma^{x,s}) / sum_s' pi(sigma^{x,s'}).
inline Eigen::MatrixXd site_kernel(const BipartiteModel& m, const std::vector<Configuration>& states, std::size_t x) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    double z = 0.0;
    std::vector<double> w(static_cast<std::size_t>(m.domain_size()));
    for (int s = 0; s < m.domain_size(); ++s) {
      Configuration c = states[i];
      c[x] = s;
      w[static_cast<std::size_t>(s)] = raw_weight(m, c);
      z += w[static_cast<std::size_t>(s)];
    }
    for (int s = 0; s < m.domain_size(); ++s) {
      if (w[static_cast<std::size_t>(s)] == 0.0) continue;
      Configuration c = states[i];
      c[x] = s;
      t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(locate(states, c))) += w[static_cast<std::size_t>(s)] / z;
    }
  }
  return t;
}

inline Eigen::MatrixXd random_update(const BipartiteModel& m, const std::vector<Configuration>& states, bool lazy) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t x = 0; x < m.size(); ++x) sum += site_kernel(m, states, x);
  sum /= static_cast<double>(m.size());
  if (!lazy) return sum;
  return 0.5 * Eigen::MatrixXd::Identity(n, n) + 0.5 * sum;
}

inline Eigen::MatrixXd scan(const BipartiteModel& m, const std::vector<Configuration>& states,
                            const std::vector<std::size_t>& order) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t x : order) p = p * site_kernel(m, states, x);
  return p;
}

inline Eigen::MatrixXd alternating(const BipartiteModel& m, const std::vector<Configuration>& states) {
  std::vector<std::size_t> order = m.first_partition();
  order.insert(order.end(), m.second_partition().begin(), m.second_partition().end());
  return scan(m, states, order);
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-13) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) < tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

inline Eigen::MatrixXd conjugate(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd r = pi.array().sqrt();
  return r.asDiagonal() * p * r.cwiseInverse().asDiagonal();
}

// Second largest eigenvalue modulus of a pi-reversible kernel via Jacobi on
// the conjugated matrix with the top eigenvalue 1 removed.
inline double slem(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  Eigen::MatrixXd s = conjugate(p, pi);
  s = 0.5 * (s + s.transpose()).eval();
  const Eigen::VectorXd r = pi.array().sqrt();
  s -= r * r.transpose();
  const Eigen::VectorXd ev = jacobi_eigenvalues(s);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

inline Eigen::MatrixXd adjoint(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi) {
  Eigen::MatrixXd a(p.rows(), p.cols());
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j) a(i, j) = pi(j) * p(j, i) / pi(i);
  return a;
}

inline double worst_tv(const Eigen::MatrixXd& q, const Eigen::VectorXd& pi) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) worst = std::max(worst, 0.5 * (q.row(i).transpose() - pi).cwiseAbs().sum());
  return worst;
}

// Least t >= 1 with worst-start TV(P^t) <= threshold, by naive powering.
inline std::uint64_t mixing_time(const Eigen::MatrixXd& p, const Eigen::VectorXd& pi, double threshold,
                                 std::uint64_t t_max = 1'000'000) {
  Eigen::MatrixXd q = p;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    if (worst_tv(q, pi) <= threshold) return t;
    q = q * p;
  }
  return t_max + 1;
}

using RationalMatrix = std::vector<std::vector<Rational>>;

// Lazy random-update kernel of the hardcore model in exact arithmetic: the
// heat-bath conditional is uniform over the allowed values of the site.
inline RationalMatrix hardcore_lazy_ru(const BipartiteModel& m, const std::vector<Configuration>& states) {
  const std::size_t n = states.size();
  RationalMatrix p(n, std::vector<Rational>(n, Rational(0)));
  const Rational half(1, 2);
  const Rational per_site(1, static_cast<long long>(2 * m.size()));
  for (std::size_t i = 0; i < n; ++i) {
    p[i][i] += half;
    for (std::size_t x = 0; x < m.size(); ++x) {
      std::vector<std::size_t> targets;
      for (int s = 0; s < 2; ++s) {
        Configuration c = states[i];
        c[x] = s;
        if (raw_weight(m, c) > 0.0) targets.push_back(locate(states, c));
      }
      for (std::size_t j : targets) p[i][j] += per_site / Rational(static_cast<long long>(targets.size()));
    }
  }
  return p;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size();
  RationalMatrix c(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

// Mixing time with uniform pi in exact arithmetic. The comparison against
// the irrational threshold is decided by rounding the exact TV once.
inline std::uint64_t rational_mixing_time_uniform(const RationalMatrix& p, double threshold,
                                                  std::uint64_t t_max = 100000) {
  const std::size_t n = p.size();
  const Rational pi(1, static_cast<long long>(n));
  RationalMatrix q = p;
  for (std::uint64_t t = 1; t <= t_max; ++t) {
    Rational worst(0);
    for (std::size_t i = 0; i < n; ++i) {
      Rational tv(0);
      for (std::size_t j = 0; j < n; ++j) tv += abs(q[i][j] - pi);
      tv /= 2;
      if (tv > worst) worst = tv;
    }
    if (static_cast<double>(worst) <= threshold) return t;
    q = multiply(q, p);
  }
  return t_max + 1;
}

}  // namespace oracle
