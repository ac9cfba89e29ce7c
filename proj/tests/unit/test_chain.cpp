#include <doctest.h>

#include <sstream>

#include "scanorder/chain.hpp"
#include "scanorder/errors.hpp"
#include "scanorder/suites.hpp"
#include "support/oracles.hpp"

using namespace scanorder;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<NamedModel> small_models() {
  std::vector<NamedModel> out = random_rbm_suite(99, 8, 3);
  out.push_back({"hardcore2", build_hardcore_complete_bipartite(2)});
  out.push_back({"hardcore3", build_hardcore_complete_bipartite(3)});
  out.push_back({"zero", zero_weight_rbm(2, 3).model});
  Eigen::MatrixXd w(2, 2);
  w << 1.0, -0.5, 0.25, 2.0;
  Eigen::VectorXd b1(2), b2(2);
  b1 << 0.3, -0.7;
  b2 << -0.1, 0.4;
  out.push_back({"biased", build_rbm(w, b1, b2)});
  return out;
}

}  // namespace

TEST_CASE("state space enumeration") {
  SUBCASE("zero-weight rbm") {
    const StateSpace s = enumerate_state_space(zero_weight_rbm(1, 2).model);
    CHECK(s.size() == 8);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(s.pi()(i) == doctest::Approx(0.125).epsilon(1e-15));
  }
  SUBCASE("hardcore K33 against brute force") {
    const BipartiteModel m = build_hardcore_complete_bipartite(3);
    const StateSpace s = enumerate_state_space(m);
    CHECK(s.size() == 15);
    CHECK(s.pi_min() == doctest::Approx(1.0 / 15).epsilon(1e-15));
    CHECK(s.configs() == oracle::support(m));
  }
  SUBCASE("pi matches direct weights") {
    for (const auto& nm : small_models()) {
      const StateSpace s = enumerate_state_space(nm.model);
      const auto states = oracle::support(nm.model);
      REQUIRE(s.configs() == states);
      CHECK(max_abs_diff(s.pi(), oracle::stationary(nm.model, states)) < 1e-14);
      CHECK(std::abs(s.pi().sum() - 1.0) < 1e-12);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.index_of(s.config(i)) == i);
    }
  }
  SUBCASE("cap") {
    try {
      enumerate_state_space(zero_weight_rbm(2, 2).model, 10);
      FAIL("expected cap error");
    } catch (const CapExceeded& e) {
      CHECK(std::string(e.what()).find("state space exceeds cap") != std::string::npos);
      CHECK(e.reached() > 10);
    }
  }
  SUBCASE("unknown configuration") {
    const StateSpace s = enumerate_state_space(build_hardcore_complete_bipartite(2));
    CHECK_FALSE(s.find({1, 0, 1, 0}).has_value());
    CHECK_THROWS_AS(s.index_of({1, 0, 1, 0}), Error);
  }
  SUBCASE("invalid pi") {
    Eigen::VectorXd pi(2);
    pi << 0.5, 0.6;
    CHECK_THROWS_AS(StateSpace({{0}, {1}}, pi, 2), Error);
  }
}

TEST_CASE("single-site kernels") {
  for (const auto& nm : small_models()) {
    CAPTURE(nm.id);
    const StateSpace s = enumerate_state_space(nm.model);
    const auto states = oracle::support(nm.model);
    for (std::size_t x = 0; x < nm.model.size(); ++x) {
      const Kernel t = single_site_kernel(nm.model, s, x);
      CHECK(t.unit == StepUnit::variable_update);
      CHECK(max_abs_diff(t.matrix, oracle::site_kernel(nm.model, states, x)) < 1e-14);
      CHECK((t.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);
      CHECK(max_abs_diff(t.matrix * t.matrix, t.matrix) < 1e-12);
      CHECK(detailed_balance_violation(t.matrix, s.pi()) < 1e-12);
    }
  }
  SUBCASE("zero weights give one half") {
    const BipartiteModel m = zero_weight_rbm(2, 2).model;
    const StateSpace s = enumerate_state_space(m);
    const Kernel t = single_site_kernel(m, s, 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
      Configuration c = s.config(i);
      for (int v = 0; v < 2; ++v) {
        c[1] = v;
        CHECK(t.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s.index_of(c))) == doctest::Approx(0.5));
      }
    }
  }
  CHECK_THROWS_AS(single_site_kernel(zero_weight_rbm(1, 1).model, enumerate_state_space(zero_weight_rbm(1, 1).model), 2),
                  Error);
}

TEST_CASE("random-update kernel") {
  for (const auto& nm : small_models()) {
    CAPTURE(nm.id);
    const StateSpace s = enumerate_state_space(nm.model);
    const auto states = oracle::support(nm.model);
    const Kernel lazy = random_update_kernel(nm.model, s, true);
    const Kernel plain = random_update_kernel(nm.model, s, false);
    CHECK(max_abs_diff(lazy.matrix, oracle::random_update(nm.model, states, true)) < 1e-14);
    CHECK(max_abs_diff(plain.matrix, oracle::random_update(nm.model, states, false)) < 1e-14);
    CHECK(lazy.matrix.diagonal().minCoeff() >= 0.5);
    CHECK(detailed_balance_violation(lazy.matrix, s.pi()) < 1e-12);
    CHECK(detailed_balance_violation(plain.matrix, s.pi()) < 1e-12);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(lazy.matrix.rows(), lazy.matrix.cols());
    CHECK(max_abs_diff(plain.matrix, 2.0 * lazy.matrix - identity) < 1e-12);
    CHECK(stationarity_error(lazy.matrix, s.pi()) < 1e-14);
  }
}

TEST_CASE("scan kernels") {
  for (const auto& nm : small_models()) {
    CAPTURE(nm.id);
    const BipartiteModel& m = nm.model;
    const StateSpace s = enumerate_state_space(m);
    const auto states = oracle::support(m);
    const ScanKernels k = scan_kernels(m, s);
    CHECK(k.alternating.unit == StepUnit::epoch);
    CHECK(k.first_scan.unit == StepUnit::half_epoch);
    CHECK(max_abs_diff(k.alternating.matrix, oracle::alternating(m, states)) < 1e-13);
    CHECK(max_abs_diff(k.first_scan.matrix, oracle::scan(m, states, m.first_partition())) < 1e-13);
    CHECK(max_abs_diff(k.second_scan.matrix, oracle::scan(m, states, m.second_partition())) < 1e-13);
    CHECK(max_abs_diff(k.alternating.matrix, k.first_scan.matrix * k.second_scan.matrix) < 1e-12);
    CHECK(stationarity_error(k.alternating.matrix, s.pi()) < 1e-12);

    const double n = static_cast<double>(m.size());
    const Kernel ru = random_update_kernel(m, s, true);
    const Eigen::MatrixXd mix = (static_cast<double>(m.n1()) * k.first_gibbs.matrix +
                                 static_cast<double>(m.n2()) * k.second_gibbs.matrix) / n;
    CHECK(max_abs_diff(ru.matrix, mix) < 1e-12);
    CHECK(max_abs_diff(k.first_scan.matrix * k.first_gibbs.matrix, k.first_scan.matrix) < 1e-12);
    CHECK(max_abs_diff(k.second_gibbs.matrix * k.second_scan.matrix, k.second_scan.matrix) < 1e-12);

    const Kernel seq = sequential_scan_kernel(m, s, m.first_partition());
    CHECK(max_abs_diff(seq.matrix, k.first_scan.matrix) < 1e-14);
  }
  SUBCASE("zero weights give the projector") {
    const BipartiteModel m = zero_weight_rbm(2, 2).model;
    const StateSpace s = enumerate_state_space(m);
    CHECK(max_abs_diff(scan_kernels(m, s).alternating.matrix, stationary_projector(s.pi()).matrix) < 1e-12);
  }
  SUBCASE("non-bipartite model is rejected") {
    const BipartiteModel m({0, 0, 1}, 2, {Edge{0, 1, {0, 0, 0, 1}}}, {});
    CHECK_THROWS_AS(scan_kernels(m, enumerate_state_space(m)), Error);
  }
}

TEST_CASE("adjoints and reversibilizations") {
  for (const auto& nm : small_models()) {
    CAPTURE(nm.id);
    const BipartiteModel& m = nm.model;
    const StateSpace s = enumerate_state_space(m);
    const ScanKernels k = scan_kernels(m, s);
    const Kernel ru = random_update_kernel(m, s);
    CHECK(max_abs_diff(adjoint(ru, s).matrix, ru.matrix) < 1e-12);
    const Kernel as_star = adjoint(k.alternating, s);
    CHECK(max_abs_diff(as_star.matrix, oracle::adjoint(k.alternating.matrix, s.pi())) < 1e-13);
    CHECK(max_abs_diff(adjoint(as_star, s).matrix, k.alternating.matrix) < 1e-12);
    CHECK(max_abs_diff(as_star.matrix, k.second_scan.matrix * k.first_scan.matrix) < 1e-12);
    CHECK(max_abs_diff(reversibilization(ru, s).matrix, ru.matrix * ru.matrix) < 1e-12);
    const Kernel r = reversibilization(k.alternating, s);
    CHECK(detailed_balance_violation(r.matrix, s.pi()) < 1e-12);
  }
  SUBCASE("projector") {
    const StateSpace s = enumerate_state_space(build_hardcore_complete_bipartite(2));
    const Kernel sp = stationary_projector(s.pi());
    CHECK(max_abs_diff(reversibilization(sp, s).matrix, sp.matrix) < 1e-14);
  }
  SUBCASE("non-stationary pi is rejected") {
    const StateSpace s = enumerate_state_space(build_hardcore_complete_bipartite(2));
    const Kernel ru = random_update_kernel(build_hardcore_complete_bipartite(2), s);
    const Eigen::VectorXd uniform_wrong = Eigen::VectorXd::Constant(7, 1.0 / 7.0).cwiseProduct(Eigen::VectorXd::LinSpaced(7, 0.5, 1.5));
    CHECK_THROWS_AS(adjoint(ru, uniform_wrong / uniform_wrong.sum()), NumericalError);
  }
}

TEST_CASE("ergodicity") {
  const BipartiteModel m = build_hardcore_complete_bipartite(3);
  const StateSpace s = enumerate_state_space(m);
  const Ergodicity ru = ergodicity_check(random_update_kernel(m, s));
  CHECK(ru.irreducible);
  CHECK(ru.aperiodic);
  CHECK(ergodicity_check(scan_kernels(m, s).alternating).ergodic());
  const Ergodicity id = ergodicity_check(identity_kernel(4));
  CHECK_FALSE(id.irreducible);
  CHECK(id.aperiodic);
  Kernel flip;
  flip.matrix = Eigen::MatrixXd{{0.0, 1.0}, {1.0, 0.0}};
  const Ergodicity f = ergodicity_check(flip);
  CHECK(f.irreducible);
  CHECK_FALSE(f.aperiodic);
  for (const auto& nm : small_models()) {
    const StateSpace sp = enumerate_state_space(nm.model);
    if (ergodicity_check(random_update_kernel(nm.model, sp)).ergodic())
      CHECK(ergodicity_check(scan_kernels(nm.model, sp).alternating).ergodic());
  }
}

TEST_CASE("row renormalization") {
  Eigen::MatrixXd m{{0.5, 0.5 + 1e-14}, {-1e-16, 1.0}};
  renormalize_rows(m);
  CHECK(m(1, 0) == 0.0);
  CHECK(m.row(0).sum() == doctest::Approx(1.0).epsilon(1e-16));
  Eigen::MatrixXd bad{{0.5, 0.6}, {0.0, 1.0}};
  CHECK_THROWS_AS(renormalize_rows(bad), NumericalError);
  Eigen::MatrixXd negative{{1.1, -0.1}, {0.0, 1.0}};
  CHECK_THROWS_AS(renormalize_rows(negative), NumericalError);
}

TEST_CASE("kernel csv") {
  Kernel k = identity_kernel(2);
  std::ostringstream out;
  write_kernel_csv(k, out);
  CHECK(out.str() == "row,col,value\n0,0,1\n1,1,1\n");
}
