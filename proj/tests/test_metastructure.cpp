#include <doctest.h>

#include <cmath>

#include "metahomog/catalog.hpp"
#include "metahomog/metastructure.hpp"
#include "oracles.hpp"

using namespace metahomog;
using cd = std::complex<double>;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidInput;
}

int null_dimension(const Eigen::MatrixXd& K) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) count += std::abs(es.eigenvalues()(i)) <= 1e-10 * top;
  return count;
}

}  // namespace

TEST_SUITE("metastructure") {
  TEST_CASE("load spectrum adds conjugate partners") {
    LoadField f;
    f.add_mode(Eigen::Vector2i(1, 0), Eigen::Vector3cd(1.0, cd(0, 2), 0.0));
    f.add_mode(Eigen::Vector2i(-1, 0), Eigen::Vector3cd(0.5, 0.0, 0.0));
    const auto s = f.spectrum();
    REQUIRE(s.size() == 2);
    for (const auto& mode : s) CHECK(std::abs(mode.amplitude(0) - 1.5) < 1e-15);
    CHECK(std::abs(s[0].amplitude(1) - std::conj(s[1].amplitude(1))) < 1e-15);

    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const Eigen::Vector2d x(0.3, -0.2);
    const double phase = m.reciprocal().col(0).dot(x);
    const Eigen::VectorXd v = f.evaluate(m, x);
    CHECK(v(0) == doctest::Approx(3.0 * std::cos(phase)));
    CHECK(v(1) == doctest::Approx(-4.0 * std::sin(phase)));
    CHECK_THROWS_AS(f.add_mode(Eigen::Vector3i(1, 0, 0), Eigen::Vector3cd::Zero()), Error);
  }

  TEST_CASE("torus loads are balanced and scale with the cell") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const TorusMetastructure t = make_torus(m, 5);
    const Eigen::VectorXd F = apply_loads(t, default_load(m));
    CHECK(F.size() == t.dof_count());
    for (int c = 0; c < 3; ++c) {
      double sum = 0.0;
      for (int j = 0; j < t.joint_count(); ++j) sum += F(j * 3 + c);
      CHECK(std::abs(sum) < 1e-13);
    }
  }

  TEST_CASE("Fourier solve equals the real-space solve") {
    for (const auto& m : oracle::catalog_materials()) {
      const int P = m.dimension() == 3 ? 4 : 6;
      const TorusMetastructure t = make_torus(m, P);
      const LoadField f = default_load(m);
      const TorusSolution a = solve_equilibrium_torus(t, f);
      const TorusSolution b = solve_torus_realspace(t, f);
      CAPTURE(m.name());
      CHECK(a.min_energy == doctest::Approx(b.min_energy).epsilon(1e-10));
      CHECK((a.displacement.values - b.displacement.values).norm() <= 1e-9 * b.displacement.values.norm());
      CHECK(torus_min_energy(t, f) == doctest::Approx(a.min_energy).epsilon(1e-13));
      CHECK(a.min_energy < 0);
    }
  }

  TEST_CASE("equilibrium satisfies the stiffness equations") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const TorusMetastructure t = make_torus(m, 4);
    const LoadField f = default_load(m);
    const TorusSolution s = solve_equilibrium_torus(t, f);
    const Eigen::Map<const Eigen::VectorXd> u(s.displacement.values.data(), s.displacement.values.size());
    const Eigen::VectorXd F = apply_loads(t, f);
    CHECK((torus_stiffness(t) * u - F).norm() < 1e-10 * F.norm());
  }

  TEST_CASE("minimum energy is quadratic in the load") {
    const Metamaterial m = validate(octet(1, 0.01, 0.01, 1));
    const TorusMetastructure t = make_torus(m, 3);
    const LoadField f = default_load(m);
    for (double lambda : {0.1, 3.0, -2.0}) {
      CHECK(torus_min_energy(t, f.scaled(lambda)) == doctest::Approx(lambda * lambda * torus_min_energy(t, f)).epsilon(1e-12));
    }
  }

  TEST_CASE("energy decomposition") {
    for (const auto& m : oracle::catalog_materials()) {
      const TorusMetastructure t = make_torus(m, m.dimension() == 3 ? 3 : 6);
      const TorusSolution s = solve_equilibrium_torus(t, default_load(m));
      const EnergyParts p = torus_energy_parts(t, s.displacement);
      CHECK(p.axial >= 0);
      CHECK(p.bending >= 0);
      CHECK(p.coupling >= 0);
      // at equilibrium the stored energy is minus the minimum potential energy
      CHECK(p.total() == doctest::Approx(-s.min_energy).epsilon(1e-10));
    }
  }

  TEST_CASE("torus errors") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    LoadField zero;
    zero.add_mode(Eigen::Vector2i(0, 0), Eigen::Vector3cd(1, 0, 0));
    CHECK(kind_of([&] { torus_min_energy(make_torus(m, 4), zero); }) == ErrorKind::UnbalancedLoad);
    LoadField fast;
    fast.add_mode(Eigen::Vector2i(2, 0), Eigen::Vector3cd(1, 0, 0));
    CHECK(kind_of([&] { torus_min_energy(make_torus(m, 4), fast); }) == ErrorKind::InvalidInput);
    CHECK_NOTHROW(torus_min_energy(make_torus(m, 5), fast));
    const Metamaterial floppy = validate(honeycomb(1, 0.0, 1));
    CHECK(kind_of([&] { torus_min_energy(make_torus(floppy, 4), default_load(floppy)); }) == ErrorKind::SingularMode);
    CHECK(kind_of([&] { solve_torus_realspace(make_torus(floppy, 4), default_load(floppy)); }) ==
          ErrorKind::SingularSystem);
  }

  TEST_CASE("bounded structures") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const ConvexDomain box = ConvexDomain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
    const BoundedMetastructure s = build_bounded(m, box, 0.125);
    CHECK(!s.bars.empty());
    for (const auto& x : s.positions) CHECK(box.contains(x));
    for (size_t b = 0; b < s.bars.size(); ++b) {
      const Segment seg = bar_endpoints(m, s.bars[b].cell, s.bars[b].index);
      CHECK((0.125 * seg.begin - s.positions[s.bar_joints[b].first]).norm() < 1e-14);
      CHECK((0.125 * seg.end - s.positions[s.bar_joints[b].second]).norm() < 1e-14);
    }

    const Eigen::MatrixXd K = bounded_stiffness(s);
    const Eigen::MatrixXd R = rigid_modes(s);
    CHECK((K * R).norm() < 1e-12 * K.norm() * R.norm());
    CHECK(null_dimension(K) == m.dofs_per_joint());

    // balanced part of a load
    Eigen::VectorXd F = apply_loads(s, default_load(m));
    CHECK(kind_of([&] { solve_equilibrium_bounded(s, F); }) == ErrorKind::UnbalancedLoad);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(R);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(R.rows(), R.cols());
    F -= Q * (Q.transpose() * F);
    const BoundedSolution proj = solve_equilibrium_bounded(s, F);
    CHECK((K * proj.displacement - F).norm() < 1e-10 * F.norm());
    CHECK((R.transpose() * proj.displacement).norm() < 1e-10 * proj.displacement.norm());

    // pinning a joint gives the same deformation up to a rigid motion
    const BoundedSolution pin = solve_equilibrium_bounded(s, F, ConstraintPolicy::Pin, 7);
    CHECK(pin.displacement.segment(7 * 3, 3).norm() == 0.0);
    CHECK(pin.min_energy == doctest::Approx(proj.min_energy).epsilon(1e-10));
  }

  TEST_CASE("bounded rigid null space in every dimension") {
    for (const auto& m : oracle::catalog_materials()) {
      const int n = m.dimension();
      const double eps = n == 3 ? 0.5 : 0.2;
      const ConvexDomain box = ConvexDomain::box(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n));
      const BoundedMetastructure s = build_bounded(m, box, eps);
      CAPTURE(m.name());
      CHECK(null_dimension(bounded_stiffness(s)) == m.dofs_per_joint());
    }
  }

  TEST_CASE("bounded errors and polygons") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const ConvexDomain tiny = ConvexDomain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.01, 0.01));
    CHECK(kind_of([&] { build_bounded(m, tiny, 0.1); }) == ErrorKind::EmptyStructure);

    const ConvexDomain tri = ConvexDomain::polygon({{0, 0}, {1, 0}, {0, 1}});
    CHECK(tri.contains(Eigen::Vector2d(0.2, 0.2)));
    CHECK(!tri.contains(Eigen::Vector2d(0.6, 0.6)));
    const BoundedMetastructure s = build_bounded(m, tri, 0.1);
    for (const auto& x : s.positions) CHECK(tri.contains(x));
    CHECK_THROWS_AS(ConvexDomain::polygon({{0, 0}, {0, 1}, {1, 0}}), Error);

    const Metamaterial floppy = validate(honeycomb(1, 0.0, 1));
    const BoundedMetastructure f = build_bounded(floppy, ConvexDomain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)), 0.25);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(f.dof_count());
    CHECK(kind_of([&] { solve_equilibrium_bounded(f, zero, ConstraintPolicy::Pin); }) == ErrorKind::SingularSystem);
  }

  TEST_CASE("continuum energy from D0 and from fitted moduli agree") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const LoadField f = default_load(m);
    const double a = continuum_min_energy(m, f);
    const double b = continuum_min_energy(extract_effective_moduli(m), m, f);
    CHECK(a == doctest::Approx(b).epsilon(1e-7));
    CHECK(a < 0);
  }

  TEST_CASE("convergence study") {
    const Metamaterial m = validate(chain_1d(1, 1));
    const LoadField f = default_load(m);
    const ConvergenceTable t = convergence_study(m, f, {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
    REQUIRE(t.rows.size() == 4);
    CHECK(t.monotone);
    for (size_t i = 1; i < t.rows.size(); ++i) {
      CHECK(t.rows[i - 1].gap / t.rows[i].gap == doctest::Approx(4.0).epsilon(0.05));
    }
    CHECK(t.fitted_slope == doctest::Approx(2.0).epsilon(0.05));

    const ConvergenceTable one = convergence_study(m, f, {0.25});
    CHECK(one.rows.size() == 1);
    CHECK(std::isnan(one.rows[0].slope));
    CHECK(std::isnan(one.fitted_slope));
    CHECK(kind_of([&] { convergence_study(m, f, {0.3}); }) == ErrorKind::InvalidInput);
  }
}
