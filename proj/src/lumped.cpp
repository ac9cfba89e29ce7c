#include "scanorder/lumped.hpp"

#include <algorithm>
#include <cmath>

#include "scanorder/errors.hpp"

namespace scanorder {

LumpedSpace::LumpedSpace(std::size_t n) : n_(n) {
  if (n == 0) throw Error("lumped chain needs n >= 1");
  pi_.resize(static_cast<Eigen::Index>(size()));
  // C(n,k) / (2^(n+1) - 1) = binom_half(n,k) / (2 - 2^-n)
  const double norm = 2.0 - std::ldexp(1.0, -static_cast<int>(n));
  for (std::size_t i = 0; i < size(); ++i) pi_(static_cast<Eigen::Index>(i)) = binomial_half(n, state(i).k) / norm;
}

std::size_t LumpedSpace::index(LumpedState s) const {
  if (s.k > n_) throw Error("lumped occupancy out of range");
  if (s.k == 0) return 0;
  return s.side == Side::left ? s.k : n_ + s.k;
}

LumpedState LumpedSpace::state(std::size_t index) const {
  if (index >= size()) throw Error("lumped index out of range");
  if (index <= n_) return {Side::left, index};
  return {Side::right, index - n_};
}

double binomial_half(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) -
                  nd * std::log(2.0));
}

Kernel lumped_ru_kernel(std::size_t n, bool lazy) {
  const LumpedSpace space(n);
  const auto size = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  // Probability that a step resamples a specific vertex and sets it to a
  // specific value, summed over the vertices of one class.
  const double act = lazy ? 0.5 : 1.0;
  const double per_vertex = act / (2.0 * static_cast<double>(n)) * 0.5;
  const auto nd = static_cast<double>(n);

  for (std::size_t i = 0; i < space.size(); ++i) {
    const LumpedState s = space.state(i);
    const auto row = static_cast<Eigen::Index>(i);
    const auto k = static_cast<double>(s.k);
    const Side other = s.side == Side::left ? Side::right : Side::left;
    // Own side is free because the other side is empty: occupied vertices
    // clear, empty vertices fill, each with probability 1/2.
    if (s.k > 0) m(row, static_cast<Eigen::Index>(space.index({s.side, s.k - 1}))) += k * per_vertex;
    if (s.k < n) m(row, static_cast<Eigen::Index>(space.index({s.side, s.k + 1}))) += (nd - k) * per_vertex;
    // Vertices on the other side are forced empty unless the set is empty.
    if (s.k == 0) m(row, static_cast<Eigen::Index>(space.index({other, 1}))) += nd * per_vertex;
    m(row, row) += 1.0 - m.row(row).sum();
  }
  renormalize_rows(m);
  return Kernel{std::move(m), StepUnit::variable_update, lazy ? "P_RU_lumped" : "P_RU_nonlazy_lumped"};
}

Kernel lumped_as_kernel(std::size_t n) {
  const LumpedSpace space(n);
  const auto size = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  const double all_empty = std::ldexp(1.0, -static_cast<int>(n));

  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const LumpedState s = space.state(i);
    // Scanning L: free when R is empty (any Omega_L state), forced empty
    // otherwise. Scanning R afterwards: forced empty unless L came out empty.
    const double l_empty = s.side == Side::left ? all_empty : 1.0;
    if (s.side == Side::left)
      for (std::size_t k1 = 1; k1 <= n; ++k1)
        m(row, static_cast<Eigen::Index>(space.index({Side::left, k1}))) += binomial_half(n, k1);
    m(row, 0) += l_empty * all_empty;
    for (std::size_t k2 = 1; k2 <= n; ++k2)
      m(row, static_cast<Eigen::Index>(space.index({Side::right, k2}))) += l_empty * binomial_half(n, k2);
  }
  renormalize_rows(m);
  return Kernel{std::move(m), StepUnit::epoch, "P_AS_lumped"};
}

std::vector<std::size_t> hardcore_lump_map(const StateSpace& full, std::size_t n) {
  const LumpedSpace lumped(n);
  std::vector<std::size_t> map(full.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    const Configuration& c = full.config(i);
    if (c.size() != 2 * n) throw Error("configuration size does not match K_{n,n}");
    std::size_t left = 0, right = 0;
    for (std::size_t v = 0; v < n; ++v) left += c[v] != 0;
    for (std::size_t v = n; v < 2 * n; ++v) right += c[v] != 0;
    if (left > 0 && right > 0) throw Error("configuration is not an independent set of K_{n,n}");
    map[i] = right > 0 ? lumped.index({Side::right, right}) : lumped.index({Side::left, left});
  }
  return map;
}

namespace {

std::size_t block_count(std::span<const std::size_t> lump_map) {
  return lump_map.empty() ? 0 : *std::max_element(lump_map.begin(), lump_map.end()) + 1;
}

Eigen::MatrixXd block_row_sums(const Eigen::MatrixXd& p, std::span<const std::size_t> lump_map) {
  if (static_cast<std::size_t>(p.rows()) != lump_map.size()) throw Error("lump map size does not match kernel");
  const auto blocks = static_cast<Eigen::Index>(block_count(lump_map));
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(p.rows(), blocks);
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    sums.col(static_cast<Eigen::Index>(lump_map[static_cast<std::size_t>(j)])) += p.col(j);
  return sums;
}

}  // namespace

bool lumpability_check(const Eigen::MatrixXd& full_kernel, std::span<const std::size_t> lump_map,
                       double tolerance) {
  const Eigen::MatrixXd sums = block_row_sums(full_kernel, lump_map);
  std::vector<Eigen::Index> representative(block_count(lump_map), -1);
  for (Eigen::Index i = 0; i < sums.rows(); ++i) {
    Eigen::Index& rep = representative[lump_map[static_cast<std::size_t>(i)]];
    if (rep < 0) {
      rep = i;
      continue;
    }
    if ((sums.row(i) - sums.row(rep)).cwiseAbs().maxCoeff() > tolerance) return false;
  }
  return true;
}

Eigen::MatrixXd quotient_kernel(const Eigen::MatrixXd& full_kernel, std::span<const std::size_t> lump_map) {
  const Eigen::MatrixXd sums = block_row_sums(full_kernel, lump_map);
  const auto blocks = static_cast<Eigen::Index>(block_count(lump_map));
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(blocks, blocks);
  std::vector<bool> filled(static_cast<std::size_t>(blocks), false);
  for (Eigen::Index i = 0; i < sums.rows(); ++i) {
    const std::size_t b = lump_map[static_cast<std::size_t>(i)];
    if (filled[b]) continue;
    q.row(static_cast<Eigen::Index>(b)) = sums.row(i);
    filled[b] = true;
  }
  return q;
}

}  // namespace scanorder
