#include "scanorder/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scanorder/errors.hpp"
#include "scanorder/rng.hpp"

namespace scanorder {

BipartiteModel::BipartiteModel(std::vector<int> partition, int domain_size,
                               std::vector<Edge> edges,
                               std::vector<std::vector<double>> unaries,
                               HardConstraint constraint)
    : partition_(std::move(partition)),
      domain_size_(domain_size),
      edges_(std::move(edges)),
      unaries_(std::move(unaries)),
      constraint_(constraint) {
  if (domain_size_ < 2) throw Error("domain size must be at least 2");
  const std::size_t n = partition_.size();
  for (std::size_t v = 0; v < n; ++v) {
    if (partition_[v] == 0) {
      first_.push_back(v);
    } else if (partition_[v] == 1) {
      second_.push_back(v);
    } else {
      throw Error("partition entries must be 0 or 1 (variable " + std::to_string(v) + ")");
    }
  }
  if (first_.empty() || second_.empty()) throw Error("both partitions must be non-empty");

  if (unaries_.empty()) unaries_.assign(n, std::vector<double>(domain_size_, 0.0));
  if (unaries_.size() != n) throw Error("unary table count does not match variable count");
  for (const auto& g : unaries_) {
    if (g.size() != static_cast<std::size_t>(domain_size_)) throw Error("unary table has wrong size");
    if (!std::all_of(g.begin(), g.end(), [](double x) { return std::isfinite(x); }))
      throw Error("unary table entries must be finite");
  }

  incident_.assign(n, {});
  const auto table_size = static_cast<std::size_t>(domain_size_ * domain_size_);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.u >= n || e.v >= n) throw Error("edge " + std::to_string(i) + " endpoint out of range");
    if (e.u == e.v) throw Error("edge " + std::to_string(i) + " is a self-loop");
    if (e.table.size() != table_size) throw Error("edge " + std::to_string(i) + " table has wrong size");
    if (!std::all_of(e.table.begin(), e.table.end(), [](double x) { return std::isfinite(x); }))
      throw Error("edge " + std::to_string(i) + " table entries must be finite");
    incident_[e.u].push_back(i);
    incident_[e.v].push_back(i);
  }
}

bool BipartiteModel::is_valid(const Configuration& config) const noexcept {
  if (config.size() != size()) return false;
  return std::all_of(config.begin(), config.end(),
                     [&](int s) { return s >= 0 && s < domain_size_; });
}

void BipartiteModel::require_valid(const Configuration& config) const {
  if (config.size() != size())
    throw Error("configuration length " + std::to_string(config.size()) + " does not match " +
                std::to_string(size()) + " variables");
  if (!is_valid(config)) throw Error("configuration entry outside the domain");
}

bool BipartiteModel::satisfies_constraints(const Configuration& config) const {
  if (constraint_ == HardConstraint::none) return true;
  return std::none_of(edges_.begin(), edges_.end(),
                      [&](const Edge& e) { return config[e.u] != 0 && config[e.v] != 0; });
}

double hamiltonian(const BipartiteModel& model, const Configuration& config) {
  model.require_valid(config);
  double h = 0.0;
  for (const Edge& e : model.edges()) h += model.factor(e, config[e.u], config[e.v]);
  for (std::size_t v = 0; v < config.size(); ++v)
    h += model.unaries()[v][static_cast<std::size_t>(config[v])];
  return h;
}

double unnormalized_weight(const BipartiteModel& model, const Configuration& config) {
  model.require_valid(config);
  if (!model.satisfies_constraints(config)) return 0.0;
  const double h = hamiltonian(model, config);
  if (std::abs(h) > kMaxAbsHamiltonian) throw RangeError("hamiltonian out of numeric range");
  return std::exp(h);
}

std::vector<double> conditional_distribution(const BipartiteModel& model,
                                             const Configuration& config,
                                             std::size_t variable) {
  model.require_valid(config);
  if (variable >= model.size()) throw Error("variable index out of range");
  const int q = model.domain_size();
  // Only terms touching `variable` differ between the candidates, so the
  // ratio w(sigma^{x,s}) / sum_t w(sigma^{x,t}) is computed from local
  // energies shifted by their maximum.
  std::vector<double> energy(static_cast<std::size_t>(q));
  std::vector<bool> allowed(static_cast<std::size_t>(q), true);
  for (int s = 0; s < q; ++s) {
    double e_s = model.unaries()[variable][static_cast<std::size_t>(s)];
    for (std::size_t ei : model.incident_edges(variable)) {
      const Edge& e = model.edges()[ei];
      const bool at_u = e.u == variable;
      const int other = at_u ? config[e.v] : config[e.u];
      e_s += at_u ? model.factor(e, s, other) : model.factor(e, other, s);
      if (model.constraint() == HardConstraint::hardcore && s != 0 && other != 0)
        allowed[static_cast<std::size_t>(s)] = false;
    }
    energy[static_cast<std::size_t>(s)] = e_s;
  }
  double top = -INFINITY;
  for (int s = 0; s < q; ++s)
    if (allowed[static_cast<std::size_t>(s)]) top = std::max(top, energy[static_cast<std::size_t>(s)]);
  if (top == -INFINITY) throw Error("all conditional weights zero");

  std::vector<double> p(static_cast<std::size_t>(q), 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    if (!allowed[s]) continue;
    p[s] = std::exp(energy[s] - top);
    total += p[s];
  }
  for (double& x : p) x /= total;
  return p;
}

namespace {

Edge rbm_edge(std::size_t u, std::size_t v, double w) { return Edge{u, v, {0.0, 0.0, 0.0, w}}; }

std::vector<double> rbm_unary(double w) { return {0.0, w}; }

}  // namespace

BipartiteModel build_rbm(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias1,
                         const Eigen::VectorXd& bias2) {
  const auto n1 = static_cast<std::size_t>(weights.rows());
  const auto n2 = static_cast<std::size_t>(weights.cols());
  if (n1 == 0 || n2 == 0) throw Error("rbm needs at least one variable per layer");
  if (static_cast<std::size_t>(bias1.size()) != n1 || static_cast<std::size_t>(bias2.size()) != n2)
    throw Error("rbm dimension mismatch: weights are " + std::to_string(n1) + "x" +
                std::to_string(n2) + ", biases " + std::to_string(bias1.size()) + " and " +
                std::to_string(bias2.size()));

  std::vector<int> partition(n1 + n2, 1);
  std::fill_n(partition.begin(), n1, 0);
  std::vector<Edge> edges;
  edges.reserve(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      edges.push_back(rbm_edge(i, n1 + j, weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
  std::vector<std::vector<double>> unaries;
  for (Eigen::Index i = 0; i < bias1.size(); ++i) unaries.push_back(rbm_unary(bias1(i)));
  for (Eigen::Index j = 0; j < bias2.size(); ++j) unaries.push_back(rbm_unary(bias2(j)));
  return BipartiteModel(std::move(partition), 2, std::move(edges), std::move(unaries));
}

BipartiteModel build_dbm(const std::vector<std::size_t>& layer_sizes,
                         const std::vector<Eigen::MatrixXd>& interlayer_weights,
                         const std::vector<Eigen::VectorXd>& biases) {
  const std::size_t layers = layer_sizes.size();
  if (layers < 2) throw Error("dbm needs at least 2 layers");
  if (interlayer_weights.size() != layers - 1)
    throw Error("dbm needs one weight matrix per consecutive layer pair");
  if (!biases.empty() && biases.size() != layers) throw Error("dbm needs one bias vector per layer");
  for (std::size_t l = 0; l < layers; ++l) {
    if (layer_sizes[l] == 0) throw Error("dbm layer " + std::to_string(l) + " is empty");
    if (!biases.empty() && static_cast<std::size_t>(biases[l].size()) != layer_sizes[l])
      throw Error("dbm bias dimension mismatch at layer " + std::to_string(l));
  }
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const Eigen::MatrixXd& w = interlayer_weights[l];
    if (static_cast<std::size_t>(w.rows()) != layer_sizes[l] ||
        static_cast<std::size_t>(w.cols()) != layer_sizes[l + 1])
      throw Error("dbm weight dimension mismatch between layers " + std::to_string(l) + " and " +
                  std::to_string(l + 1));
  }

  // Number V1 layers (0, 2, ...) first, then V2 layers (1, 3, ...).
  std::vector<std::size_t> offset(layers);
  std::size_t next = 0;
  for (std::size_t parity = 0; parity < 2; ++parity)
    for (std::size_t l = parity; l < layers; l += 2) {
      offset[l] = next;
      next += layer_sizes[l];
    }

  std::vector<int> partition(next);
  std::vector<std::vector<double>> unaries(next);
  for (std::size_t l = 0; l < layers; ++l)
    for (std::size_t i = 0; i < layer_sizes[l]; ++i) {
      partition[offset[l] + i] = static_cast<int>(l % 2);
      unaries[offset[l] + i] =
          rbm_unary(biases.empty() ? 0.0 : biases[l](static_cast<Eigen::Index>(i)));
    }

  std::vector<Edge> edges;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const Eigen::MatrixXd& w = interlayer_weights[l];
    for (std::size_t i = 0; i < layer_sizes[l]; ++i)
      for (std::size_t j = 0; j < layer_sizes[l + 1]; ++j) {
        // Keep u on the V1 side.
        std::size_t a = offset[l] + i;
        std::size_t b = offset[l + 1] + j;
        if (l % 2 == 1) std::swap(a, b);
        edges.push_back(rbm_edge(a, b, w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
  }
  return BipartiteModel(std::move(partition), 2, std::move(edges), std::move(unaries));
}

BipartiteModel build_hardcore_complete_bipartite(std::size_t n) {
  if (n == 0) throw Error("hardcore K_{n,n} needs n >= 1");
  std::vector<int> partition(2 * n, 1);
  std::fill_n(partition.begin(), n, 0);
  std::vector<Edge> edges;
  edges.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) edges.push_back(Edge{i, n + j, {0.0, 0.0, 0.0, 0.0}});
  return BipartiteModel(std::move(partition), 2, std::move(edges), {}, HardConstraint::hardcore);
}

BipartiteModel random_bipartite_model(std::size_t n1, std::size_t n2, std::size_t m,
                                      double weight_low, double weight_high, std::uint64_t seed) {
  if (n1 == 0 || n2 == 0) throw Error("random model needs n1, n2 >= 1");
  if (m > n1 * n2)
    throw Error("requested " + std::to_string(m) + " factors but only " + std::to_string(n1 * n2) +
                " V1-V2 pairs exist");
  if (!(weight_low <= weight_high) || !std::isfinite(weight_low) || !std::isfinite(weight_high))
    throw Error("weight range must be finite with low <= high");

  // Partial Fisher-Yates over pair indices; stream 0 picks pairs, stream 1
  // draws weights.
  std::vector<std::uint64_t> pairs(n1 * n2);
  std::iota(pairs.begin(), pairs.end(), std::uint64_t{0});
  CounterRng pick(seed, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(pick.index(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
  }
  std::sort(pairs.begin(), pairs.begin() + static_cast<std::ptrdiff_t>(m));

  CounterRng draw(seed, 1);
  std::vector<int> partition(n1 + n2, 1);
  std::fill_n(partition.begin(), n1, 0);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t u = pairs[i] / n2;
    const std::size_t v = n1 + pairs[i] % n2;
    edges.push_back(rbm_edge(u, v, draw.uniform(weight_low, weight_high)));
  }
  return BipartiteModel(std::move(partition), 2, std::move(edges), {});
}

std::vector<EdgeViolation> bipartite_violations(const BipartiteModel& model) {
  std::vector<EdgeViolation> out;
  const auto& edges = model.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const int pu = model.partition_of(edges[i].u);
    if (pu == model.partition_of(edges[i].v)) out.push_back({i, edges[i].u, edges[i].v, pu});
  }
  return out;
}

void validate_bipartite(const BipartiteModel& model) {
  const auto violations = bipartite_violations(model);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "model is not bipartite; intra-partition edges:";
  for (const auto& v : violations)
    msg << " #" << v.edge_index << " (" << v.u << "," << v.v << ") in V" << (v.partition + 1);
  throw Error(msg.str());
}

}  // namespace scanorder
