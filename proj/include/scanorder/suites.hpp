#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scanorder/model.hpp"

namespace scanorder {

struct NamedModel {
  std::string id;
  BipartiteModel model;
};

// Fully connected RBM with n1, n2 uniform in [1, max_side] and weights
// uniform in [low, high]; instance `index` of the stream keyed by seed.
NamedModel random_rbm_instance(std::uint64_t seed, std::size_t index, std::size_t max_side = 5,
                               double low = -2.0, double high = 2.0);

std::vector<NamedModel> random_rbm_suite(std::uint64_t seed, std::size_t count, std::size_t max_side = 5,
                                         double low = -2.0, double high = 2.0);

// hardcore_knn for n = 1..max_n.
std::vector<NamedModel> hardcore_suite(std::size_t max_n);

// DBM with `layers` layers of `per_layer` variables and seeded uniform
// weights in [low, high], zero biases.
NamedModel random_dbm_instance(std::uint64_t seed, std::size_t layers = 4, std::size_t per_layer = 3,
                               double low = -2.0, double high = 2.0);

NamedModel zero_weight_rbm(std::size_t n1, std::size_t n2);

// Random RBMs + hardcore K_{n,n} (n <= 6) + one 4-layer DBM with 3
// variables per layer.
std::vector<NamedModel> comparison_suite(std::uint64_t seed, std::size_t random_count = 200);

}  // namespace scanorder
