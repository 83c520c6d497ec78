// Acceptance checks. Usage: acceptance <criterion 1..8>. Prints one detail
// line per sub-check and a final PASS/FAIL line; exits nonzero on failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "metahomog/continuum_limit.hpp"
#include "metahomog/metastructure.hpp"
#include "oracles.hpp"

using namespace metahomog;
using cd = std::complex<double>;

namespace {

struct Report {
  std::vector<std::string> lines;
  bool ok = true;

  void check(const std::string& name, bool passed, const std::string& detail) {
    ok = ok && passed;
    lines.push_back("  " + std::string(passed ? "pass" : "FAIL") + "  " + name + ": " + detail);
  }
  void value(const std::string& name, double got, double limit) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.3e (limit %.1e)", got, limit);
    check(name, got <= limit, buf);
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Eigen::VectorXd k1(double k) { return Eigen::VectorXd::Constant(1, k); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double entry_relative(double got, double want) { return std::abs(got - want) / std::abs(want); }

// 1. closed-form dynamical matrices at 50 random k
void criterion1(Report& r) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double EA = 1.7, EI = 0.3, L = 1.2;
  const Metamaterial chain = validate(chain_1d(EA, L));
  const Metamaterial beam = validate(beam_chain_1d(EI, L));
  const Metamaterial two = validate(two_bar_chain(1.0, 2.0, 0.6, 1.4));
  double e_chain = 0, e_beam = 0, e_two = 0;
  for (int i = 0; i < 50; ++i) {
    const double k = u(rng) * M_PI / L;
    e_chain = std::max(e_chain, oracle::relative(dynamical_matrix<double>(chain, k1(k)), chain_dynamical_matrix(EA, L, k)));
    e_beam = std::max(e_beam, oracle::relative(dynamical_matrix<double>(beam, k1(k)), beam_chain_dynamical_matrix(EI, L, k)));
    const double k2 = u(rng) * M_PI / 2.0;
    e_two = std::max(e_two, oracle::relative(dynamical_matrix<double>(two, k1(k2)),
                                             two_bar_dynamical_matrix(1.0, 2.0, 0.6, 1.4, k2)));
  }
  r.value("axial chain D(k), max relative error", e_chain, 1e-12);
  r.value("bending chain D(k), max relative error", e_beam, 1e-12);
  r.value("two-bar chain D(k), max relative error", e_two, 1e-12);
}

// 2. continuum limits of the three chains
void criterion2(Report& r) {
  double e_chain = 0, e_beam = 0, e_two = 0, e_mod = 0;
  const Metamaterial chain = validate(chain_1d(1.3, 0.8));
  const Metamaterial beam = validate(beam_chain_1d(0.4, 1.1));
  const Metamaterial two = validate(two_bar_chain(1, 2, 1, 1));
  for (double k : {0.1, 0.7, -1.3, 2.9}) {
    const Eigen::MatrixXcd want = Eigen::MatrixXcd::Constant(1, 1, 1.3 * k * k);
    e_chain = std::max(e_chain, oracle::relative(continuum_dynamical_matrix(chain, k1(k)).D0, want));
    e_beam = std::max(e_beam, oracle::relative(continuum_dynamical_matrix(beam, k1(k)).D0,
                                               beam_chain_continuum_matrix(0.4, 1.1, k)));
    const Eigen::MatrixXcd D0 = continuum_dynamical_matrix(two, k1(k)).D0;
    e_two = std::max(e_two, oracle::relative(D0, two_bar_continuum_matrix(1, 2, 1, 1, k)));
    e_mod = std::max(e_mod, entry_relative(D0(0, 0).real() / (k * k), 4.0 / 3.0));
  }
  r.value("axial chain D0 = EA k^2", e_chain, 1e-8);
  r.value("bending chain D0 = closed-form 2x2 limit", e_beam, 1e-8);
  r.value("two-bar chain D0 = series modulus form", e_two, 1e-8);
  r.value("two-bar chain modulus = 4/3", e_mod, 1e-8);
}

// 3. honeycomb moduli over a 3x3 (EA, EI) grid
void criterion3(Report& r) {
  double e_c = 0, e_zero = 0, e_h = 0, e_iso = 0;
  for (double EA : {0.5, 1.0, 4.0}) {
    for (double EI : {0.002, 0.01, 0.05}) {
      const EffectiveModuli got = extract_effective_moduli(validate(honeycomb(EA, EI, 1.0)));
      const EffectiveModuli want = honeycomb_moduli(EA, EI, 1.0);
      for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {2, 2}, {0, 1}}) e_c = std::max(e_c, entry_relative(got.C(i, j), want.C(i, j)));
      e_zero = std::max({e_zero, std::abs(got.C(0, 2)) / got.C(0, 0), std::abs(got.C(1, 2)) / got.C(0, 0)});
      e_h = std::max(e_h, entry_relative(got.H(0, 0), 8 * std::sqrt(3.0) * EI / 1.0));
      e_iso = std::max({e_iso, std::abs(got.C(0, 0) - got.C(1, 1)) / got.C(0, 0),
                        std::abs(got.C(0, 0) - got.C(0, 1) - 2 * got.C(2, 2)) / got.C(0, 0)});
    }
  }
  r.value("C11, C22, C33, C12 relative error", e_c, 1e-6);
  r.value("C13, C23 relative to C11", e_zero, 1e-6);
  r.value("micropolar coefficient 8 sqrt3 EI / L", e_h, 1e-6);
  r.value("isotropy C11 = C22, C11 - C12 = 2 C33", e_iso, 1e-8);
}

// 4. octet moduli
void criterion4(Report& r) {
  const Parameters p = resolve_parameters("octet", {});
  const double EA = p.at("EA"), GI1 = p.at("GI1"), EI = p.at("EI"), L = p.at("L");
  const EffectiveModuli got = extract_effective_moduli(validate(octet(EA, GI1, EI, L)));
  const EffectiveModuli want = octet_moduli(EA, EI, L);
  r.value("C11", entry_relative(got.C(0, 0), want.C(0, 0)), 1e-6);
  r.value("C12", entry_relative(got.C(0, 1), want.C(0, 1)), 1e-6);
  r.value("C44", entry_relative(got.C(3, 3), want.C(3, 3)), 1e-6);
  r.value("micropolar coefficient 48 sqrt2 EI / L^4", entry_relative(got.H(0, 0), 48 * std::sqrt(2.0) * EI / std::pow(L, 4)), 1e-6);
  r.check("cubic flag", got.symmetry == SymmetryClass::Cubic, to_string(got.symmetry));
  const double gap = got.C(0, 0) - got.C(0, 1) - 2 * got.C(3, 3);
  const double gap_want = want.C(0, 0) - want.C(0, 1) - 2 * want.C(3, 3);
  r.check("C11 != C12 + 2 C44", std::abs(gap) > 1e-6 * got.C(0, 0), fmt("gap %.6e", gap));
  r.value("anisotropy gap against the closed form", entry_relative(gap, gap_want), 1e-6);
  const EffectiveModuli stiff = extract_effective_moduli(validate(octet(EA, 10 * GI1, EI, L)));
  const double inv = std::max({oracle::relative(stiff.C.cast<cd>(), got.C.cast<cd>()),
                               oracle::relative(stiff.H.cast<cd>(), got.H.cast<cd>()),
                               (stiff.G - got.G).norm() / got.C.norm()});
  r.value("moduli invariant under GI1 x 10", inv, 1e-8);
}

// 5. mechanisms
void criterion5(Report& r) {
  const Metamaterial floppy = validate(honeycomb(1.0, 0.0, 1.0));
  std::string what = "no error";
  bool singular = false;
  try {
    continuum_dynamical_matrix(floppy, Eigen::Vector2d(0.6, 0.8));
  } catch (const Error& e) {
    singular = e.kind() == ErrorKind::SingularLimit;
    what = e.what();
  }
  r.check("honeycomb EI = 0 raises SingularLimit", singular, what);
  const std::vector<Eigen::VectorXd> ks2 = {Eigen::Vector2d(0.6, 0.8), Eigen::Vector2d(-1.0, 0.2)};
  const EquicoercivityReport hc = check_equicoercivity(floppy, ks2, {0.1, 0.01});
  r.check("honeycomb EI = 0 fails equicoercivity", !hc.passed(), fmt("constant %.3e", hc.constant));

  // bending chain: the bound at each eps shrinks like eps^2
  const Metamaterial beam = validate(beam_chain_1d(1.0, 1.0));
  const std::vector<Eigen::VectorXd> ks = {k1(0.5), k1(1.0), k1(2.0)};
  const std::vector<double> epss = {0.5, 0.1, 0.01, 1e-3};
  std::vector<double> per_eps;
  for (double eps : epss) per_eps.push_back(check_equicoercivity(beam, ks, {eps}).constant);
  bool decreasing = true;
  for (size_t i = 1; i < per_eps.size(); ++i) decreasing = decreasing && per_eps[i] < per_eps[i - 1];
  r.check("bending chain bound decreases with eps", decreasing,
          fmt("eps = 0.5: %.3e, eps = 1e-3: %.3e", per_eps.front(), per_eps.back()));
  r.value("bending chain constant / bound at eps = 0.5", per_eps.back() / per_eps.front(), 1e-4);
  const EquicoercivityReport chain = check_equicoercivity(validate(chain_1d(1, 1)), ks, epss);
  r.check("axial chain stays equicoercive", chain.constant > 0.1, fmt("constant %.3e", chain.constant));
}

// 6. discrete-to-continuum convergence under the fixed two-mode load
void criterion6(Report& r) {
  const std::vector<double> epss = {1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32};
  for (auto [name, slope] : {std::pair<const char*, double>{"chain", 1.8}, {"honeycomb", 1.0}}) {
    const Metamaterial m = validate(catalog_lattice(name));
    const ConvergenceTable t = convergence_study(m, default_load(m), epss);
    std::string gaps;
    for (const auto& row : t.rows) gaps += fmt(" %.3e", row.gap);
    r.check(std::string(name) + " gap decreases monotonically", t.monotone, "gaps" + gaps);
    r.check(std::string(name) + " log-log slope", t.fitted_slope >= slope, fmt("%.4f (minimum %.1f)", t.fitted_slope, slope));
  }
}

int null_dimension(const Eigen::MatrixXcd& D) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  int count = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) count += es.eigenvalues()(i) <= 1e-10 * top;
  return count;
}

// 7. property suites
void criterion7(Report& r) {
  const auto materials = oracle::catalog_materials();
  std::mt19937 rng(7);

  double herm = 0, psd = 0, conj = 0;
  for (const auto& m : materials) {
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd k = oracle::random_wavevector(m, rng);
      const Eigen::MatrixXcd D = dynamical_matrix<double>(m, k);
      const double s = D.norm();
      herm = std::max(herm, (D - D.adjoint()).norm() / s);
      conj = std::max(conj, (dynamical_matrix<double>(m, Eigen::VectorXd(-k)) - D.conjugate()).norm() / s);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
      psd = std::max(psd, -es.eigenvalues().minCoeff() / es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  r.value("Hermiticity of D(k)", herm, 1e-12);
  r.value("positive semidefiniteness of D(k)", psd, 1e-12);
  r.value("D(-k) = conj D(k)", conj, 1e-12);

  std::string dims;
  bool exact = true;
  for (const auto& m : materials) {
    const int d = null_dimension(dynamical_matrix<double>(m, Eigen::VectorXd::Zero(m.dimension())));
    exact = exact && d == m.dofs_per_joint();
    dims += " " + m.name() + " " + std::to_string(d) + "/" + std::to_string(m.dofs_per_joint());
  }
  r.check("null space of D(0) has dimension d_u", exact, "found/expected" + dims);

  // per-bar energies under superposed rigid motions
  double frame = 0;
  std::normal_distribution<double> g;
  for (const auto& m : materials) {
    const Kinematics kin = m.kinematics();
    const int du = m.dofs_per_joint();
    for (int i = 0; i < 1000; ++i) {
      const int b = i % m.bar_count();
      Eigen::VectorXd U(2 * du), c(deflection_dofs(kin)), w(rotation_dofs(kin));
      for (int j = 0; j < U.size(); ++j) U(j) = g(rng);
      for (int j = 0; j < c.size(); ++j) c(j) = g(rng);
      for (int j = 0; j < w.size(); ++j) w(j) = g(rng);
      const Segment ends = bar_endpoints(m, Eigen::VectorXi::Zero(m.dimension()), b);
      Eigen::VectorXd R(2 * du);
      R << rigid_joint_dofs(kin, ends.begin, c, w), rigid_joint_dofs(kin, ends.end, c, w);
      const BarEnergy e0 = bar_energy_global(m, b, U), e1 = bar_energy_global(m, b, U + R);
      const double d = std::abs(e1.axial - e0.axial) + std::abs(e1.torsion - e0.torsion) +
                       std::abs(e1.bending - e0.bending) + std::abs(e1.coupling - e0.coupling);
      frame = std::max(frame, d / e0.total());
    }
  }
  r.value("per-bar energies under 1000 rigid motions", frame, 1e-12);

  double parseval = 0, energy = 0;
  for (const auto& m : materials) {
    const LatticeFunction u = oracle::random_field(m, 6, rng);
    const SpectralFunction s = dft_forward(m, u);
    const double V = m.cell_volume();
    const double lhs = V * u.values.squaredNorm();
    parseval = std::max(parseval, std::abs(s.values.squaredNorm() / (V * u.cell_count()) - lhs) / lhs);
    double dual = 0.0;
    for (int q = 0; q < s.cell_count(); ++q) {
      const Eigen::MatrixXcd D = dynamical_matrix<double>(m, dual_wavevector(m, 6, q));
      dual += 0.5 * (s.values.col(q).transpose() * D * s.values.col(q).conjugate())(0, 0).real();
    }
    dual /= V * s.cell_count();
    const double real = oracle::realspace_energy(m, u);
    energy = std::max(energy, std::abs(dual - real) / real);
  }
  r.value("Parseval identity on P = 6 tori", parseval, 1e-10);
  r.value("real-space energy = Fourier energy on P = 6 tori", energy, 1e-10);

  double homog = 0;
  for (const auto& m : materials) {
    const Eigen::VectorXd k = Eigen::VectorXd::LinSpaced(m.dimension(), 0.4, 0.9);
    for (double lambda : {0.5, 2.0, 5.0}) homog = std::max(homog, check_homogeneity(m, k, lambda));
  }
  r.value("homogeneity residual of D0", homog, 1e-6);

  // supplementary: on a bounded piece the rigid motions are exactly d_u
  std::string bounded;
  for (const auto& m : materials) {
    const int n = m.dimension();
    const BoundedMetastructure b = build_bounded(m, ConvexDomain::box(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Ones(n)),
                                                 n == 3 ? 0.5 : 0.2);
    bounded += " " + m.name() + " " + std::to_string(null_dimension(bounded_stiffness(b).cast<cd>()));
  }
  r.lines.push_back("  info  bounded-structure null space dimension:" + bounded);
}

// 8. higher-order expansion of the chain
void criterion8(Report& r) {
  const double EA = 1.4, L = 0.9;
  const Metamaterial m = validate(chain_1d(EA, L));
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> uk(0.2, 3.0), ue(0.01, 0.5);
  double err = 0, coeff = 0;
  for (int i = 0; i < 20; ++i) {
    const double k = uk(rng), eps = ue(rng);
    const double want = EA * k * k / (1 + eps * eps * k * k * L * L / 12);
    err = std::max(err, entry_relative(higher_order_matrix(m, k1(k), eps, 2)(0, 0).real(), want));
    const auto series = compliance_series(m, k1(k), 2);
    coeff = std::max(coeff, entry_relative(series[2](0, 0).real(), oracle::chain_compliance_coefficient(EA, L, k, 1)));
  }
  r.value("D_eps,2 against EA k^2 / (1 + eps^2 k^2 L^2 / 12)", err, 1e-6);
  r.value("eps^2 compliance coefficient against the series oracle", coeff, 1e-6);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Report&)>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                              criterion5, criterion6, criterion7, criterion8};
  const double budget[] = {1, 5, 30, 60, 0, 120, 0, 0};
  const int n = argc > 1 ? std::atoi(argv[1]) : 0;
  if (n < 1 || n > 8) {
    std::fprintf(stderr, "usage: acceptance <1..8>\n");
    return 2;
  }
  Report r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criteria[n - 1](r);
  } catch (const std::exception& e) {
    r.check("uncaught exception", false, e.what());
  }
  const double t = seconds_since(t0);
  if (budget[n - 1] > 0) r.check("runtime", t < budget[n - 1], fmt("%.2f s (limit %.0f s)", t, budget[n - 1]));
  for (const auto& line : r.lines) std::printf("%s\n", line.c_str());
  std::printf("criterion %d: %s (%.2f s)\n", n, r.ok ? "PASS" : "FAIL", t);
  return r.ok ? 0 : 1;
}
