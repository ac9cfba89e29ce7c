#include <doctest.h>

#include <cmath>

#include "scanorder/chain.hpp"
#include "scanorder/errors.hpp"
#include "scanorder/spectral.hpp"
#include "scanorder/suites.hpp"
#include "support/oracles.hpp"

using namespace scanorder;

namespace {

Kernel two_state(double p, double q) {
  Kernel k;
  k.matrix = Eigen::MatrixXd{{1.0 - p, p}, {q, 1.0 - q}};
  return k;
}

Eigen::VectorXd two_state_pi(double p, double q) { return Eigen::Vector2d(q / (p + q), p / (p + q)); }

}  // namespace

TEST_CASE("deviation norm closed forms") {
  const Eigen::VectorXd uniform2 = Eigen::Vector2d(0.5, 0.5);
  CHECK(deviation_norm(stationary_projector(uniform2).matrix, uniform2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(deviation_norm(identity_kernel(2).matrix, uniform2) == doctest::Approx(1.0));
  CHECK(deviation_norm(two_state(0.3, 0.3).matrix, uniform2) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(deviation_norm(two_state(0.2, 0.5).matrix, two_state_pi(0.2, 0.5)) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(deviation_norm(two_state(0.9, 0.8).matrix, two_state_pi(0.9, 0.8)) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("deviation norm rejects non-reversible kernels") {
  const BipartiteModel m = build_hardcore_complete_bipartite(2);
  const StateSpace s = enumerate_state_space(m);
  CHECK_THROWS_AS(deviation_norm(scan_kernels(m, s).alternating, s), NumericalError);
}

TEST_CASE("spectrum agrees with jacobi oracle") {
  for (const auto& nm : random_rbm_suite(5, 6, 3)) {
    const StateSpace s = enumerate_state_space(nm.model);
    const Kernel ru = random_update_kernel(nm.model, s);
    const Eigen::VectorXd lib = conjugated_spectrum(ru.matrix, s.pi());
    Eigen::MatrixXd c = oracle::conjugate(ru.matrix, s.pi());
    const Eigen::VectorXd ref = oracle::jacobi_eigenvalues(0.5 * (c + c.transpose()));
    REQUIRE(lib.size() == ref.size());
    CHECK((lib - ref).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(deviation_norm(ru, s) == doctest::Approx(oracle::slem(ru.matrix, s.pi())).epsilon(1e-11));
  }
}

TEST_CASE("operator norms") {
  const BipartiteModel m = random_rbm_instance(3, 0).model;
  const StateSpace s = enumerate_state_space(m);
  CHECK(general_operator_norm(identity_kernel(s.size()).matrix, s) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t x = 0; x < m.size(); ++x)
    CHECK(std::abs(general_operator_norm(single_site_kernel(m, s, x).matrix, s) - 1.0) < 1e-10);
  const ScanKernels k = scan_kernels(m, s);
  CHECK(general_operator_norm(k.first_scan.matrix, s) <= 1.0 + 1e-10);
  CHECK(general_operator_norm(k.alternating.matrix, s) <= 1.0 + 1e-10);
  // For a reversible kernel the two norms of P - S_pi coincide.
  const Kernel ru = random_update_kernel(m, s);
  const Eigen::MatrixXd diff = ru.matrix - stationary_projector(s.pi()).matrix;
  CHECK(general_operator_norm(diff, s) == doctest::Approx(deviation_norm(ru, s)).epsilon(1e-10));
}

TEST_CASE("relaxation time of zero-weight rbms") {
  for (std::size_t n = 2; n <= 8; ++n) {
    CAPTURE(n);
    const BipartiteModel m = zero_weight_rbm(n / 2, n - n / 2).model;
    const StateSpace s = enumerate_state_space(m);
    const SpectralReport ru = relaxation_time(random_update_kernel(m, s), s);
    CHECK(ru.reversible);
    CHECK(std::abs(ru.gap - 1.0 / (2.0 * static_cast<double>(n))) < 1e-12);
    CHECK(ru.relaxation_time == doctest::Approx(2.0 * static_cast<double>(n)).epsilon(1e-12));
    const SpectralReport as = relaxation_time(scan_kernels(m, s).alternating, s);
    CHECK(as.relaxation_time == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("reversibilization formula agrees on reversible kernels") {
  std::vector<NamedModel> models = random_rbm_suite(8, 10, 4);
  models.push_back({"hc3", build_hardcore_complete_bipartite(3)});
  for (const auto& nm : models) {
    const StateSpace s = enumerate_state_space(nm.model);
    for (bool lazy : {true, false}) {
      const Kernel ru = random_update_kernel(nm.model, s, lazy);
      if (!ergodicity_check(ru).ergodic()) continue;
      const double direct = relaxation_time(ru, s).relaxation_time;
      const double via = relaxation_time_via_reversibilization(ru, s.pi());
      CHECK(std::abs(via - direct) / direct <= 1e-8);
    }
  }
}

TEST_CASE("relaxation time reports") {
  const BipartiteModel m = build_hardcore_complete_bipartite(3);
  const StateSpace s = enumerate_state_space(m);
  const SpectralReport ru = relaxation_time(random_update_kernel(m, s), s);
  CHECK(ru.method == "reversible");
  CHECK(ru.relaxation_time == doctest::Approx(1.0 / ru.gap));
  CHECK(ru.second_largest_modulus == doctest::Approx(1.0 - ru.gap));
  const Kernel as = scan_kernels(m, s).alternating;
  const SpectralReport r = relaxation_time(as, s);
  CHECK_FALSE(r.reversible);
  CHECK(r.method == "multiplicative_reversibilization");
  const double gap_r = 1.0 - oracle::slem(oracle::alternating(m, s.configs()) * oracle::adjoint(as.matrix, s.pi()), s.pi());
  CHECK(r.relaxation_time == doctest::Approx(1.0 / (1.0 - std::sqrt(1.0 - gap_r))).epsilon(1e-9));
}

TEST_CASE("relaxation time of non-ergodic kernels fails") {
  CHECK_THROWS_AS(relaxation_time(identity_kernel(3), Eigen::Vector3d(1.0 / 3, 1.0 / 3, 1.0 / 3)), NumericalError);
  CHECK_THROWS_AS(relaxation_time(two_state(1.0, 1.0), Eigen::Vector2d(0.5, 0.5)), NumericalError);
}

TEST_CASE("alternating scan relaxes no slower than random update") {
  for (const auto& nm : random_rbm_suite(21, 25)) {
    const RelaxationComparison r = compare_relaxation_times(nm.model);
    CHECK(r.holds);
    CHECK(r.contraction_holds);
    CHECK(r.t_rel_as <= r.t_rel_ru + 1e-9);
  }
  SUBCASE("zero weights") {
    const RelaxationComparison r = compare_relaxation_times(zero_weight_rbm(2, 2).model);
    CHECK(r.t_rel_as == doctest::Approx(1.0));
    CHECK(r.t_rel_ru == doctest::Approx(8.0));
  }
  SUBCASE("hardcore growth") {
    double prev_as = 0, prev_ru = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
      const RelaxationComparison r = compare_relaxation_times(build_hardcore_complete_bipartite(n));
      CHECK(r.holds);
      if (n >= 3) {
        CHECK(r.t_rel_as / prev_as > 1.5);
        CHECK(r.t_rel_ru / prev_ru > 1.5);
      }
      prev_as = r.t_rel_as;
      prev_ru = r.t_rel_ru;
    }
  }
  SUBCASE("non-lazy") {
    for (const auto& nm : random_rbm_suite(4, 10, 3)) CHECK(compare_relaxation_times(nm.model, kDefaultStateCap, false).holds);
  }
}
