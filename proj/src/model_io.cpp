#include "scanorder/model_io.hpp"

#include <charconv>

#include "scanorder/errors.hpp"

namespace scanorder {

using nlohmann::json;

namespace {

const json& field(const json& spec, const char* name) {
  auto it = spec.find(name);
  if (it == spec.end()) throw Error(std::string("model is missing field '") + name + "'");
  return *it;
}

template <typename T>
T get(const json& spec, const char* name) {
  try {
    return field(spec, name).get<T>();
  } catch (const json::exception& e) {
    throw Error(std::string("model field '") + name + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& spec, const char* name, T fallback) {
  return spec.contains(name) ? get<T>(spec, name) : fallback;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows, const char* what) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(std::string(what) + " rows have unequal length");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace

ModelSpec model_from_json(const json& spec) {
  if (!spec.is_object()) throw Error("model specification must be a JSON object");
  const std::string kind = get<std::string>(spec, "kind");
  std::optional<std::size_t> hardcore_n;
  std::string id;

  auto build = [&]() -> BipartiteModel {
    if (kind == "rbm") {
      const Eigen::MatrixXd w = to_matrix(get<std::vector<std::vector<double>>>(spec, "weights"), "weights");
      const auto n1 = static_cast<std::size_t>(w.rows());
      const auto n2 = static_cast<std::size_t>(w.cols());
      const auto b1 = get_or(spec, "bias1", std::vector<double>(n1, 0.0));
      const auto b2 = get_or(spec, "bias2", std::vector<double>(n2, 0.0));
      id = "rbm:" + std::to_string(n1) + "x" + std::to_string(n2);
      return build_rbm(w, to_vector(b1), to_vector(b2));
    }
    if (kind == "dbm") {
      const auto sizes = get<std::vector<std::size_t>>(spec, "layer_sizes");
      std::vector<Eigen::MatrixXd> weights;
      for (const auto& w : get<std::vector<std::vector<std::vector<double>>>>(spec, "weights"))
        weights.push_back(to_matrix(w, "weights"));
      std::vector<Eigen::VectorXd> biases;
      for (const auto& b : get_or(spec, "biases", std::vector<std::vector<double>>{})) biases.push_back(to_vector(b));
      id = "dbm:";
      for (std::size_t i = 0; i < sizes.size(); ++i) id += (i ? "-" : "") + std::to_string(sizes[i]);
      return build_dbm(sizes, weights, biases);
    }
    if (kind == "mrf") {
      const auto partition = get<std::vector<int>>(spec, "partition");
      const int domain = get_or(spec, "domain_size", 2);
      std::vector<Edge> edges;
      for (const json& e : get_or(spec, "edges", json::array())) {
        edges.push_back(Edge{get<std::size_t>(e, "u"), get<std::size_t>(e, "v"),
                             get<std::vector<double>>(e, "table")});
      }
      const auto unary = get_or(spec, "unary", std::vector<std::vector<double>>{});
      const std::string hc = get_or(spec, "hard_constraint", std::string("none"));
      HardConstraint constraint = HardConstraint::none;
      if (hc == "hardcore") {
        constraint = HardConstraint::hardcore;
      } else if (hc != "none") {
        throw Error("unknown hard_constraint '" + hc + "'");
      }
      id = "mrf:" + std::to_string(partition.size());
      return BipartiteModel(partition, domain, std::move(edges), unary, constraint);
    }
    if (kind == "hardcore_knn") {
      const auto n = get<std::size_t>(spec, "n");
      hardcore_n = n;
      id = "hardcore_knn:" + std::to_string(n);
      return build_hardcore_complete_bipartite(n);
    }
    if (kind == "random_rbm") {
      const auto n1 = get<std::size_t>(spec, "n1");
      const auto n2 = get<std::size_t>(spec, "n2");
      const auto m = get_or<std::size_t>(spec, "m", n1 * n2);
      const double lo = get_or(spec, "weight_low", 0.0);
      const double hi = get_or(spec, "weight_high", 0.2);
      const auto seed = get<std::uint64_t>(spec, "seed");
      id = "random_rbm:" + std::to_string(n1) + "x" + std::to_string(n2) + ":m=" + std::to_string(m) +
           ":low=" + format_double(lo) + ":high=" + format_double(hi) + ":seed=" + std::to_string(seed);
      return random_bipartite_model(n1, n2, m, lo, hi, seed);
    }
    if (kind == "zero_rbm") {
      const auto n1 = get<std::size_t>(spec, "n1");
      const auto n2 = get<std::size_t>(spec, "n2");
      id = "zero_rbm:" + std::to_string(n1) + "x" + std::to_string(n2);
      return random_bipartite_model(n1, n2, 0, 0.0, 0.0, 0);
    }
    throw Error("unknown model kind '" + kind + "'");
  };

  BipartiteModel model = build();
  if (spec.contains("id")) id = get<std::string>(spec, "id");
  return ModelSpec{std::move(model), std::move(id), kind, spec, hardcore_n};
}

ModelSpec parse_model_json(std::string_view text) {
  json spec;
  try {
    spec = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error("model JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  return model_from_json(spec);
}

json model_to_json(const BipartiteModel& model) {
  json edges = json::array();
  for (const Edge& e : model.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"table", e.table}});
  return json{{"kind", "mrf"},
              {"partition", model.partition()},
              {"domain_size", model.domain_size()},
              {"edges", std::move(edges)},
              {"unary", model.unaries()},
              {"hard_constraint", model.constraint() == HardConstraint::hardcore ? "hardcore" : "none"}};
}

}  // namespace scanorder
