#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace scanorder {

// Assignment of a value in {0, ..., |S|-1} to every variable. Built-in
// models number V1 first (0..n1-1) and V2 after (n1..n-1).
using Configuration = std::vector<int>;

enum class HardConstraint {
  none,
  // Occupied (value 1) endpoints may not share an edge: the support is the
  // set of independent sets of the edge graph.
  hardcore,
};

// Pairwise factor. table[a * |S| + b] = f(sigma(u) = a, sigma(v) = b).
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::vector<double> table;
};

struct EdgeViolation {
  std::size_t edge_index;
  std::size_t u;
  std::size_t v;
  int partition;
};

// Pairwise Markov random field with a two-set variable partition.
//
// Weights are pi(sigma) ~ 1[sigma satisfies the hard constraint] exp(H(sigma))
// with H(sigma) = sum_e f_e(sigma(u), sigma(v)) + sum_v g_v(sigma(v)).
// Construction does not reject intra-partition edges; validate_bipartite()
// reports them so hand-built models can be inspected.
class BipartiteModel {
 public:
  BipartiteModel(std::vector<int> partition, int domain_size, std::vector<Edge> edges,
                 std::vector<std::vector<double>> unaries,
                 HardConstraint constraint = HardConstraint::none);

  std::size_t size() const noexcept { return partition_.size(); }
  std::size_t n1() const noexcept { return first_.size(); }
  std::size_t n2() const noexcept { return second_.size(); }
  int domain_size() const noexcept { return domain_size_; }
  HardConstraint constraint() const noexcept { return constraint_; }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::vector<double>>& unaries() const noexcept { return unaries_; }
  const std::vector<int>& partition() const noexcept { return partition_; }
  int partition_of(std::size_t variable) const { return partition_.at(variable); }

  // Variables of V1 / V2 in ascending index order (the scan order).
  const std::vector<std::size_t>& first_partition() const noexcept { return first_; }
  const std::vector<std::size_t>& second_partition() const noexcept { return second_; }

  // Indices into edges() of the edges touching a variable.
  const std::vector<std::size_t>& incident_edges(std::size_t variable) const {
    return incident_.at(variable);
  }

  double factor(const Edge& e, int a, int b) const {
    return e.table[static_cast<std::size_t>(a * domain_size_ + b)];
  }

  bool is_valid(const Configuration& config) const noexcept;
  void require_valid(const Configuration& config) const;
  bool satisfies_constraints(const Configuration& config) const;

 private:
  std::vector<int> partition_;
  int domain_size_;
  std::vector<Edge> edges_;
  std::vector<std::vector<double>> unaries_;
  HardConstraint constraint_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> second_;
  std::vector<std::vector<std::size_t>> incident_;
};

// Largest |H| accepted before exp(H) is considered out of range.
inline constexpr double kMaxAbsHamiltonian = 700.0;

double hamiltonian(const BipartiteModel& model, const Configuration& config);

// exp(H) or 0 when the hard constraint is violated. Throws RangeError when
// |H| > kMaxAbsHamiltonian.
double unnormalized_weight(const BipartiteModel& model, const Configuration& config);

// Probability of each value for `variable` given the rest of `config`.
// Throws Error("all conditional weights zero") if no value is allowed.
std::vector<double> conditional_distribution(const BipartiteModel& model,
                                             const Configuration& config,
                                             std::size_t variable);

BipartiteModel build_rbm(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias1,
                         const Eigen::VectorXd& bias2);

// Layers with even 0-based index (1st, 3rd, ...) form V1 and are numbered
// first; the remaining layers form V2. weights[l] is sizes[l] x sizes[l+1].
BipartiteModel build_dbm(const std::vector<std::size_t>& layer_sizes,
                         const std::vector<Eigen::MatrixXd>& interlayer_weights,
                         const std::vector<Eigen::VectorXd>& biases);

// Uniform distribution over independent sets of K_{n,n}.
BipartiteModel build_hardcore_complete_bipartite(std::size_t n);

// RBM with m distinct random V1-V2 factors [0,0,0,W], W uniform in
// [weight_low, weight_high], and zero biases. Deterministic in seed.
BipartiteModel random_bipartite_model(std::size_t n1, std::size_t n2, std::size_t m,
                                      double weight_low, double weight_high, std::uint64_t seed);

std::vector<EdgeViolation> bipartite_violations(const BipartiteModel& model);

// Throws Error listing every intra-partition edge.
void validate_bipartite(const BipartiteModel& model);

}  // namespace scanorder
