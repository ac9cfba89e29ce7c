#include "scanorder/suites.hpp"

#include "scanorder/rng.hpp"

namespace scanorder {

NamedModel random_rbm_instance(std::uint64_t seed, std::size_t index, std::size_t max_side, double low,
                               double high) {
  CounterRng shape(seed, 2 * index);
  const std::size_t n1 = 1 + static_cast<std::size_t>(shape.index(max_side));
  const std::size_t n2 = 1 + static_cast<std::size_t>(shape.index(max_side));
  const std::uint64_t model_seed = counter_hash({seed, index, 0x52424dULL});
  std::string id = "random_rbm:" + std::to_string(n1) + "x" + std::to_string(n2) + ":seed=" +
                   std::to_string(seed) + ":i=" + std::to_string(index);
  return NamedModel{std::move(id), random_bipartite_model(n1, n2, n1 * n2, low, high, model_seed)};
}

std::vector<NamedModel> random_rbm_suite(std::uint64_t seed, std::size_t count, std::size_t max_side,
                                         double low, double high) {
  std::vector<NamedModel> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_rbm_instance(seed, i, max_side, low, high));
  return out;
}

std::vector<NamedModel> hardcore_suite(std::size_t max_n) {
  std::vector<NamedModel> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    out.push_back({"hardcore_knn:" + std::to_string(n), build_hardcore_complete_bipartite(n)});
  return out;
}

NamedModel random_dbm_instance(std::uint64_t seed, std::size_t layers, std::size_t per_layer, double low,
                               double high) {
  CounterRng draw(counter_hash({seed, 0x44424dULL}));
  std::vector<std::size_t> sizes(layers, per_layer);
  std::vector<Eigen::MatrixXd> weights;
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    Eigen::MatrixXd w(static_cast<Eigen::Index>(per_layer), static_cast<Eigen::Index>(per_layer));
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = draw.uniform(low, high);
    weights.push_back(std::move(w));
  }
  std::string id = "dbm:" + std::to_string(layers) + "x" + std::to_string(per_layer) + ":seed=" + std::to_string(seed);
  return NamedModel{std::move(id), build_dbm(sizes, weights, {})};
}

NamedModel zero_weight_rbm(std::size_t n1, std::size_t n2) {
  return NamedModel{"zero_rbm:" + std::to_string(n1) + "x" + std::to_string(n2),
                    build_rbm(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2)),
                              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n1)),
                              Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n2)))};
}

std::vector<NamedModel> comparison_suite(std::uint64_t seed, std::size_t random_count) {
  std::vector<NamedModel> out = random_rbm_suite(seed, random_count);
  for (auto& m : hardcore_suite(6)) out.push_back(std::move(m));
  out.push_back(random_dbm_instance(seed));
  return out;
}

}  // namespace scanorder
