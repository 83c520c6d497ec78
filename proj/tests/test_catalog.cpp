#include <doctest.h>

#include <random>

#include "metahomog/catalog.hpp"
#include "oracles.hpp"

using namespace metahomog;

TEST_SUITE("catalog") {
  TEST_CASE("closed-form dynamical matrices at random wavevectors") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Metamaterial chain = validate(chain_1d(1.3, 0.9));
    const Metamaterial beam = validate(beam_chain_1d(0.4, 1.2));
    const Metamaterial two = validate(two_bar_chain(1, 3, 0.5, 1.5));
    for (int i = 0; i < 50; ++i) {
      const double k = u(rng) * M_PI;
      const Eigen::VectorXd kv = Eigen::VectorXd::Constant(1, k);
      CHECK(oracle::relative(dynamical_matrix<double>(chain, kv), chain_dynamical_matrix(1.3, 0.9, k)) < 1e-12);
      CHECK(oracle::relative(dynamical_matrix<double>(beam, kv), beam_chain_dynamical_matrix(0.4, 1.2, k)) < 1e-12);
      CHECK(oracle::relative(dynamical_matrix<double>(two, kv), two_bar_dynamical_matrix(1, 3, 0.5, 1.5, k)) < 1e-12);
    }
  }

  TEST_CASE("honeycomb oracle satisfies the isotropy identity") {
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 20; ++i) {
      const EffectiveModuli m = honeycomb_moduli(u(rng), u(rng), u(rng));
      CHECK(m.C(0, 0) - m.C(0, 1) == doctest::Approx(2 * m.C(2, 2)).epsilon(1e-13));
    }
    const EffectiveModuli d = honeycomb_moduli(1, 0.01, 1);
    CHECK(d.C(0, 0) == doctest::Approx(0.350535).epsilon(1e-5));
    CHECK(d.C(2, 2) == doctest::Approx(0.0618590).epsilon(1e-5));
    CHECK(d.C(0, 1) == doctest::Approx(0.226816).epsilon(1e-5));
    CHECK_THROWS_AS(honeycomb_moduli(1, 0, 1), Error);
  }

  TEST_CASE("octet oracle values") {
    const EffectiveModuli o = octet_moduli(1, 0.01, 1);
    CHECK(o.C(0, 0) == doctest::Approx(2.99814).epsilon(1e-5));
    CHECK(o.C(0, 1) == doctest::Approx(1.32936).epsilon(1e-5));
    CHECK(o.C(3, 3) == doctest::Approx(1.49907).epsilon(1e-5));
    CHECK(o.H(0, 0) == doctest::Approx(48 * std::sqrt(2.0) * 0.01));
  }

  TEST_CASE("parameters") {
    const Parameters p = resolve_parameters("honeycomb", {{"EI", 0.5}});
    CHECK(p.at("EA") == 1.0);
    CHECK(p.at("EI") == 0.5);
    CHECK_THROWS_AS(resolve_parameters("honeycomb", {{"GI1", 1}}), Error);
    CHECK_THROWS_AS(catalog_lattice("kagome"), Error);
    CHECK_THROWS_AS(catalog_lattice("chain", {{"L", -1}}), Error);
    CHECK_THROWS_AS(oracle_moduli("beam_chain"), Error);
    for (const auto& e : catalog_entries()) CHECK(catalog_lattice(e.name).name == e.name);
  }

  TEST_CASE("oracle suite names and perturbation") {
    const auto names = oracle_check_names();
    const auto checks = run_oracle_checks({}, "chain_D");
    REQUIRE(checks.size() == names.size());
    for (size_t i = 0; i < checks.size(); ++i) CHECK(checks[i].name == names[i]);
    CHECK(!checks[0].passed());
    CHECK(checks[0].error == doctest::Approx(1e-3 / (1 + 1e-3)).epsilon(1e-6));
    CHECK(checks[1].passed());
    CHECK_THROWS_AS(run_oracle_checks({}, "nope"), Error);
  }
}
