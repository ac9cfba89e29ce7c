#include <doctest.h>

#include "scanorder/errors.hpp"
#include "scanorder/model_io.hpp"
#include "support/oracles.hpp"

using namespace scanorder;
using nlohmann::json;

TEST_CASE("rbm document") {
  const ModelSpec s = parse_model_json(R"({"kind":"rbm","weights":[[1.0,-0.5],[0.25,2.0]],"bias1":[0.1,0.2]})");
  CHECK(s.model.n1() == 2);
  CHECK(s.model.n2() == 2);
  CHECK(s.id == "rbm:2x2");
  CHECK(hamiltonian(s.model, {1, 1, 1, 1}) == doctest::Approx(1.0 - 0.5 + 0.25 + 2.0 + 0.3));
}

TEST_CASE("dbm document") {
  const json doc{{"kind", "dbm"},
                 {"layer_sizes", {1, 2, 1}},
                 {"weights", {json::array({json::array({0.5, 0.5})}), json::array({json::array({1.0}), json::array({1.0})})}}};
  const ModelSpec s = model_from_json(doc);
  CHECK(s.model.size() == 4);
  CHECK(s.model.n1() == 2);
  CHECK(s.id == "dbm:1-2-1");
}

TEST_CASE("mrf document round trip") {
  const char* text = R"({"kind":"mrf","partition":[0,1,1],"domain_size":2,
    "edges":[{"u":0,"v":1,"table":[0.7,0,0,0.7]},{"u":0,"v":2,"table":[0,0.1,0.2,0.3]}],
    "unary":[[0,0.5],[0,0],[0.1,0]],"hard_constraint":"none","id":"custom"})";
  const ModelSpec s = parse_model_json(text);
  CHECK(s.id == "custom");
  const ModelSpec again = model_from_json(model_to_json(s.model));
  for (const auto& c : oracle::support(s.model)) CHECK(hamiltonian(s.model, c) == hamiltonian(again.model, c));
}

TEST_CASE("generated kinds") {
  const ModelSpec hc = parse_model_json(R"({"kind":"hardcore_knn","n":3})");
  CHECK(hc.hardcore_n == 3u);
  CHECK(hc.model.constraint() == HardConstraint::hardcore);
  const ModelSpec r = parse_model_json(R"({"kind":"random_rbm","n1":4,"n2":5,"m":7,"seed":3})");
  CHECK(r.model.edges().size() == 7);
  for (const auto& e : r.model.edges()) {
    CHECK(e.table[3] >= 0.0);
    CHECK(e.table[3] <= 0.2);
  }
  CHECK(r.id == "random_rbm:4x5:m=7:low=0:high=0.2:seed=3");
  CHECK(r.id.find(',') == std::string::npos);
  const ModelSpec z = parse_model_json(R"({"kind":"zero_rbm","n1":2,"n2":3})");
  CHECK(z.model.edges().empty());
}

TEST_CASE("model document errors") {
  try {
    parse_model_json("{\"kind\": \"rbm\",\n \"weights\": [[1 2]]}");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("parse error at byte") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_model_json(R"({"kind":"potts"})"), Error);
  CHECK_THROWS_AS(parse_model_json(R"({"weights":[[1]]})"), Error);
  CHECK_THROWS_AS(parse_model_json(R"({"kind":"rbm","weights":[[1,2],[3]]})"), Error);
  CHECK_THROWS_AS(parse_model_json(R"({"kind":"hardcore_knn","n":"three"})"), Error);
  CHECK_THROWS_AS(parse_model_json(R"({"kind":"random_rbm","n1":2,"n2":2})"), Error);
  CHECK_THROWS_AS(parse_model_json(R"({"kind":"mrf","partition":[0,1],"hard_constraint":"softcore"})"), Error);
  CHECK_THROWS_AS(parse_model_json("[1,2]"), Error);
}
