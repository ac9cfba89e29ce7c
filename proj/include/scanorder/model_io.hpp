#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scanorder/model.hpp"

namespace scanorder {

// A model together with the JSON it was built from.
//
// Accepted kinds:
//   {"kind":"rbm", "weights":[[..],..], "bias1":[..], "bias2":[..]}
//   {"kind":"dbm", "layer_sizes":[..], "weights":[[[..]],..], "biases":[[..],..]}
//   {"kind":"mrf", "partition":[0|1,..], "domain_size":2,
//    "edges":[{"u":0,"v":3,"table":[f00,f01,f10,f11]},..], "unary":[[g0,g1],..],
//    "hard_constraint":"none"|"hardcore"}
//   {"kind":"hardcore_knn", "n":3}
//   {"kind":"random_rbm", "n1":..,"n2":..,"m":..,"weight_low":..,"weight_high":..,"seed":..}
//   {"kind":"zero_rbm", "n1":..,"n2":..}
// random_rbm weights default to [0, 0.2]; m defaults to n1*n2.
// An optional "id" overrides the generated model id.
struct ModelSpec {
  BipartiteModel model;
  std::string id;
  std::string kind;
  nlohmann::json source;
  // Set for hardcore_knn.
  std::optional<std::size_t> hardcore_n;
};

ModelSpec model_from_json(const nlohmann::json& spec);

// Parses text; syntax errors are reported with their byte offset.
ModelSpec parse_model_json(std::string_view text);

// Serializes any model as an explicit "mrf" document.
nlohmann::json model_to_json(const BipartiteModel& model);

}  // namespace scanorder
