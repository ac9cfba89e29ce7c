#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "scanorder/chain.hpp"

namespace scanorder {

// Quotient chains for the uniform independent-set distribution on K_{n,n}
// under permutations of L and of R. A state is the occupied side and the
// number of occupied vertices; the empty set is stored once, as (L, 0).
enum class Side { left, right };

struct LumpedState {
  Side side = Side::left;
  std::size_t k = 0;
  friend bool operator==(const LumpedState&, const LumpedState&) = default;
};

// Index layout: (L, k) -> k for k = 0..n, (R, k) -> n + k for k = 1..n.
class LumpedSpace {
 public:
  explicit LumpedSpace(std::size_t n);

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return 2 * n_ + 1; }
  std::size_t index(LumpedState s) const;
  LumpedState state(std::size_t index) const;
  std::size_t empty_index() const noexcept { return 0; }

  // pi(side, k) = C(n, k) / (2^(n+1) - 1).
  const Eigen::VectorXd& pi() const noexcept { return pi_; }

 private:
  std::size_t n_;
  Eigen::VectorXd pi_;
};

// C(n, k) 2^-n via log-gamma.
double binomial_half(std::size_t n, std::size_t k);

Kernel lumped_ru_kernel(std::size_t n, bool lazy = true);
Kernel lumped_as_kernel(std::size_t n);

// Maps every configuration of the full hardcore K_{n,n} state space to its
// lumped index. Variables 0..n-1 are L, n..2n-1 are R.
std::vector<std::size_t> hardcore_lump_map(const StateSpace& full, std::size_t n);

// True iff sum_{t in B} P(s, t) depends only on lump_map(s) for every block
// B, within tolerance.
bool lumpability_check(const Eigen::MatrixXd& full_kernel, std::span<const std::size_t> lump_map,
                       double tolerance = 1e-12);

// Block-row sums taken from the first representative of each block.
Eigen::MatrixXd quotient_kernel(const Eigen::MatrixXd& full_kernel,
                                std::span<const std::size_t> lump_map);

}  // namespace scanorder
