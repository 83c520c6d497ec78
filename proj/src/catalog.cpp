#include "metahomog/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "metahomog/fourier.hpp"

namespace metahomog {

using cd = std::complex<double>;

namespace {

void require_length(double L, const char* what) {
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be positive");
}

void require_rigidity(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidInput, std::string(what) + " must be nonnegative");
}

BarClassSpec make_bar(int from, Eigen::VectorXi from_offset, int to, Eigen::VectorXi to_offset,
                      const BeamSection& section, Eigen::VectorXd span) {
  BarClassSpec b;
  b.begin = {from, std::move(from_offset)};
  b.end = {to, std::move(to_offset)};
  b.section = section;
  b.expected_span = std::move(span);
  return b;
}

Eigen::VectorXi offset1(int o) { return Eigen::VectorXi::Constant(1, o); }
Eigen::VectorXd vec1(double x) { return Eigen::VectorXd::Constant(1, x); }

}  // namespace

LatticeSpec chain_1d(double EA, double L) {
  require_length(L, "L");
  require_rigidity(EA, "EA");
  LatticeSpec s;
  s.name = "chain";
  s.kinematics = Kinematics::Axial1D;
  s.basis = Eigen::MatrixXd::Constant(1, 1, L);
  s.shifts = {vec1(0.0)};
  BeamSection sec;
  sec.EA = EA;
  s.bars = {make_bar(0, offset1(0), 0, offset1(1), sec, vec1(L))};
  return s;
}

LatticeSpec beam_chain_1d(double EI, double L) {
  require_length(L, "L");
  require_rigidity(EI, "EI");
  LatticeSpec s = chain_1d(0.0, L);
  s.name = "beam_chain";
  s.kinematics = Kinematics::Bending1D;
  s.bars[0].section = BeamSection{};
  s.bars[0].section.EI3 = EI;
  return s;
}

LatticeSpec two_bar_chain(double EA1, double EA2, double L1, double L2) {
  require_length(L1, "L1");
  require_length(L2, "L2");
  require_rigidity(EA1, "EA1");
  require_rigidity(EA2, "EA2");
  LatticeSpec s;
  s.name = "two_bar_chain";
  s.kinematics = Kinematics::Axial1D;
  s.basis = Eigen::MatrixXd::Constant(1, 1, L1 + L2);
  s.shifts = {vec1(0.0), vec1(L1)};
  BeamSection s1, s2;
  s1.EA = EA1;
  s2.EA = EA2;
  s.bars = {make_bar(0, offset1(0), 1, offset1(0), s1, vec1(L1)),
            make_bar(1, offset1(0), 0, offset1(1), s2, vec1(L2))};
  return s;
}

LatticeSpec honeycomb(double EA, double EI, double L) {
  require_length(L, "L");
  require_rigidity(EA, "EA");
  require_rigidity(EI, "EI");
  const double r3 = std::sqrt(3.0);
  LatticeSpec s;
  s.name = "honeycomb";
  s.kinematics = Kinematics::Planar2D;
  s.basis.resize(2, 2);
  s.basis.col(0) = L * Eigen::Vector2d(1.5, -r3 / 2);
  s.basis.col(1) = L * Eigen::Vector2d(1.5, r3 / 2);
  s.shifts = {Eigen::Vector2d(0, 0), Eigen::Vector2d(L, 0)};
  BeamSection sec;
  sec.EA = EA;
  sec.EI3 = EI;
  const Eigen::VectorXi zero = Eigen::Vector2i(0, 0);
  s.bars = {make_bar(0, zero, 1, zero, sec, L * Eigen::Vector2d(1, 0)),
            make_bar(0, zero, 1, Eigen::Vector2i(-1, 0), sec, L * Eigen::Vector2d(-0.5, r3 / 2)),
            make_bar(0, zero, 1, Eigen::Vector2i(0, -1), sec, L * Eigen::Vector2d(-0.5, -r3 / 2))};
  return s;
}

LatticeSpec octet(double EA, double GI1, double EI, double L) {
  require_length(L, "L");
  require_rigidity(EA, "EA");
  require_rigidity(GI1, "GI1");
  require_rigidity(EI, "EI");
  LatticeSpec s;
  s.name = "octet";
  s.kinematics = Kinematics::Spatial3D;
  s.basis.resize(3, 3);
  const double h = L / std::sqrt(2.0);
  s.basis.col(0) = h * Eigen::Vector3d(0, 1, 1);
  s.basis.col(1) = h * Eigen::Vector3d(1, 0, 1);
  s.basis.col(2) = h * Eigen::Vector3d(1, 1, 0);
  s.shifts = {Eigen::Vector3d::Zero()};
  BeamSection sec;
  sec.EA = EA;
  sec.GI1 = GI1;
  sec.EI2 = EI;
  sec.EI3 = EI;
  const Eigen::MatrixXd& a = s.basis;
  const Eigen::VectorXi zero = Eigen::Vector3i::Zero();
  const std::vector<Eigen::Vector3i> ends = {{0, 0, -1}, {-1, 1, 0}, {1, 0, 0}, {0, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
  for (const auto& o : ends) {
    const Eigen::VectorXd span = a * o.cast<double>();
    s.bars.push_back(make_bar(0, zero, 0, o, sec, span));
  }
  return s;
}

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"chain", {{"EA", 1.0}, {"L", 1.0}}, "1D axial chain"},
      {"beam_chain", {{"EI", 1.0}, {"L", 1.0}}, "1D transverse bending chain"},
      {"two_bar_chain", {{"EA1", 1.0}, {"EA2", 2.0}, {"L1", 1.0}, {"L2", 1.0}}, "1D chain of two alternating bars"},
      {"honeycomb", {{"EA", 1.0}, {"EI", 0.01}, {"L", 1.0}}, "2D hexagonal beam lattice"},
      {"octet", {{"EA", 1.0}, {"GI1", 0.01}, {"EI", 0.01}, {"L", 1.0}}, "3D octet-truss beam lattice"},
  };
  return entries;
}

Parameters resolve_parameters(const std::string& name, const Parameters& params) {
  for (const auto& e : catalog_entries()) {
    if (e.name != name) continue;
    Parameters p = e.defaults;
    for (const auto& [key, value] : params) {
      if (!p.count(key)) throw Error(ErrorKind::InvalidInput, "unknown parameter '" + key + "' for " + name);
      p[key] = value;
    }
    return p;
  }
  throw Error(ErrorKind::InvalidInput, "unknown lattice '" + name + "'");
}

LatticeSpec catalog_lattice(const std::string& name, const Parameters& params) {
  const Parameters p = resolve_parameters(name, params);
  if (name == "chain") return chain_1d(p.at("EA"), p.at("L"));
  if (name == "beam_chain") return beam_chain_1d(p.at("EI"), p.at("L"));
  if (name == "two_bar_chain") return two_bar_chain(p.at("EA1"), p.at("EA2"), p.at("L1"), p.at("L2"));
  if (name == "honeycomb") return honeycomb(p.at("EA"), p.at("EI"), p.at("L"));
  return octet(p.at("EA"), p.at("GI1"), p.at("EI"), p.at("L"));
}

Eigen::MatrixXcd chain_dynamical_matrix(double EA, double L, double k) {
  const double s = std::sin(k * L / 2);
  return Eigen::MatrixXcd::Constant(1, 1, 4 * EA / (L * L) * s * s);
}

Eigen::MatrixXcd beam_chain_dynamical_matrix(double EI, double L, double k) {
  Eigen::MatrixXcd D(2, 2);
  const double c = std::cos(k * L), s = std::sin(k * L);
  D(0, 0) = 24 * EI * (1 - c) / std::pow(L, 4);
  D(0, 1) = cd(0, -12 * EI * s / std::pow(L, 3));
  D(1, 0) = std::conj(D(0, 1));
  D(1, 1) = 4 * EI * (2 + c) / (L * L);
  return D;
}

Eigen::MatrixXcd two_bar_dynamical_matrix(double EA1, double EA2, double L1, double L2, double k) {
  const double V = L1 + L2;
  const double c1 = EA1 / (L1 * V), c2 = EA2 / (L2 * V);
  Eigen::MatrixXcd D(2, 2);
  D(0, 0) = D(1, 1) = c1 + c2;
  D(0, 1) = -c1 * std::polar(1.0, -k * L1) - c2 * std::polar(1.0, k * L2);
  D(1, 0) = std::conj(D(0, 1));
  return D;
}

Eigen::MatrixXcd chain_continuum_matrix(double EA, double k) { return Eigen::MatrixXcd::Constant(1, 1, EA * k * k); }

Eigen::MatrixXcd beam_chain_continuum_matrix(double EI, double L, double k) {
  Eigen::MatrixXcd D(2, 2);
  const double c = 12 * EI / (L * L);
  D << c * k * k, cd(0, -c * k), cd(0, c * k), c;
  return D;
}

Eigen::MatrixXcd two_bar_continuum_matrix(double EA1, double EA2, double L1, double L2, double k) {
  const double V = L1 + L2;
  const double modulus = 1.0 / ((L1 / V) / EA1 + (L2 / V) / EA2);
  return Eigen::MatrixXcd::Constant(1, 1, modulus * k * k);
}

EffectiveModuli honeycomb_moduli(double EA, double EI, double L) {
  if (!(EI > 0.0)) throw Error(ErrorKind::SingularOracle, "honeycomb moduli are singular without bending stiffness");
  const double r3 = std::sqrt(3.0);
  const double den = EA * L * L * L + 12 * EI * L;
  EffectiveModuli m;
  m.dimension = 2;
  m.C = Eigen::MatrixXd::Zero(3, 3);
  m.C(0, 0) = m.C(1, 1) = EA * (EA * L * L + 36 * EI) / (2 * r3 * den);
  m.C(0, 1) = m.C(1, 0) = EA * (EA * L * L - 12 * EI) / (2 * r3 * den);
  m.C(2, 2) = 4 * r3 * EA * EI / den;
  m.H = Eigen::MatrixXd::Constant(1, 1, 8 * r3 * EI / (L * L * L));
  m.G = Eigen::MatrixXd::Zero(3, 1);
  m.symmetry = SymmetryClass::Isotropic;
  return m;
}

EffectiveModuli octet_moduli(double EA, double EI, double L) {
  const double r2 = std::sqrt(2.0);
  const double L2 = L * L, L4 = L2 * L2;
  EffectiveModuli m;
  m.dimension = 3;
  m.C = Eigen::MatrixXd::Zero(6, 6);
  const double c11 = (4 * EA * L2 + 24 * EI) / (r2 * L4);
  const double c12 = r2 * (EA * L2 - 6 * EI) / L4;
  const double c44 = (2 * EA * L2 + 12 * EI) / (r2 * L4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m.C(i, j) = i == j ? c11 : c12;
    m.C(3 + i, 3 + i) = c44;
  }
  m.H = Eigen::MatrixXd::Identity(3, 3) * (48 * r2 * EI / L4);
  m.G = Eigen::MatrixXd::Zero(6, 3);
  m.symmetry = SymmetryClass::Cubic;
  return m;
}

EffectiveModuli oracle_moduli(const std::string& name, const Parameters& params) {
  const Parameters p = resolve_parameters(name, params);
  EffectiveModuli m;
  if (name == "chain") {
    m.dimension = 1;
    m.C = Eigen::MatrixXd::Constant(1, 1, p.at("EA"));
  } else if (name == "two_bar_chain") {
    m.dimension = 1;
    m.C = two_bar_continuum_matrix(p.at("EA1"), p.at("EA2"), p.at("L1"), p.at("L2"), 1.0).real();
  } else if (name == "honeycomb") {
    return honeycomb_moduli(p.at("EA"), p.at("EI"), p.at("L"));
  } else if (name == "octet") {
    return octet_moduli(p.at("EA"), p.at("EI"), p.at("L"));
  } else {
    throw Error(ErrorKind::InvalidInput, "no moduli oracle for '" + name + "'");
  }
  m.H = Eigen::MatrixXd::Zero(0, 0);
  m.G = Eigen::MatrixXd::Zero(1, 0);
  m.symmetry = SymmetryClass::Isotropic;
  return m;
}

// ---------------------------------------------------------------------------
// Oracle suite

namespace {

double relative(const Eigen::MatrixXcd& computed, const Eigen::MatrixXcd& oracle) {
  const double scale = oracle.norm();
  return scale > 0 ? (computed - oracle).norm() / scale : (computed - oracle).norm();
}

using Oracle1D = std::function<Eigen::MatrixXcd(double)>;

double max_error_1d(const Metamaterial& m, const Oracle1D& oracle, const std::vector<double>& ks, bool limit,
                    const LimitConfig& cfg, double factor) {
  double worst = 0.0;
  for (double k : ks) {
    const Eigen::VectorXd kv = Eigen::VectorXd::Constant(1, k);
    const Eigen::MatrixXcd computed = limit ? continuum_dynamical_matrix(m, kv, cfg).D0 : dynamical_matrix<double>(m, kv);
    worst = std::max(worst, relative(computed, factor * oracle(k)));
  }
  return worst;
}

}  // namespace

std::vector<std::string> oracle_check_names() {
  return {"chain_D",          "beam_chain_D",  "two_bar_D",        "chain_D0",   "beam_chain_D0",
          "two_bar_D0",       "honeycomb_C",   "honeycomb_H",      "honeycomb_isotropy",
          "octet_C",          "octet_H",       "octet_cubic_gap"};
}

std::vector<OracleCheck> run_oracle_checks(const LimitConfig& cfg, const std::string& perturb) {
  const auto names = oracle_check_names();
  if (!perturb.empty() && std::find(names.begin(), names.end(), perturb) == names.end()) {
    throw Error(ErrorKind::InvalidInput, "unknown oracle check '" + perturb + "'");
  }
  auto factor = [&](const std::string& name) { return name == perturb ? 1.0 + 1e-3 : 1.0; };
  std::vector<OracleCheck> out;

  const Metamaterial chain = validate(chain_1d(1, 1));
  const Metamaterial beam = validate(beam_chain_1d(1, 1));
  const Metamaterial two_bar = validate(two_bar_chain(1, 2, 1, 1));

  std::mt19937 rng(20240607);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> zone_k, limit_k = {0.3, -0.7, 1.1};
  for (int i = 0; i < 50; ++i) zone_k.push_back(M_PI * unit(rng));
  std::vector<double> two_bar_k;
  for (double k : zone_k) two_bar_k.push_back(k / 2);

  out.push_back({"chain_D",
                 max_error_1d(chain, [](double k) { return chain_dynamical_matrix(1, 1, k); }, zone_k, false, cfg,
                              factor("chain_D")),
                 1e-12});
  out.push_back({"beam_chain_D",
                 max_error_1d(beam, [](double k) { return beam_chain_dynamical_matrix(1, 1, k); }, zone_k, false,
                              cfg, factor("beam_chain_D")),
                 1e-12});
  out.push_back({"two_bar_D",
                 max_error_1d(two_bar, [](double k) { return two_bar_dynamical_matrix(1, 2, 1, 1, k); }, two_bar_k,
                              false, cfg, factor("two_bar_D")),
                 1e-12});
  out.push_back({"chain_D0",
                 max_error_1d(chain, [](double k) { return chain_continuum_matrix(1, k); }, limit_k, true, cfg,
                              factor("chain_D0")),
                 1e-8});
  out.push_back({"beam_chain_D0",
                 max_error_1d(beam, [](double k) { return beam_chain_continuum_matrix(1, 1, k); }, limit_k, true,
                              cfg, factor("beam_chain_D0")),
                 1e-8});
  out.push_back({"two_bar_D0",
                 max_error_1d(two_bar, [](double k) { return two_bar_continuum_matrix(1, 2, 1, 1, k); }, limit_k,
                              true, cfg, factor("two_bar_D0")),
                 1e-8});

  const EffectiveModuli hc = extract_effective_moduli(validate(catalog_lattice("honeycomb")), cfg);
  const EffectiveModuli hc_oracle = oracle_moduli("honeycomb");
  out.push_back({"honeycomb_C", relative(hc.C, factor("honeycomb_C") * hc_oracle.C), 1e-6});
  out.push_back({"honeycomb_H", relative(hc.H, factor("honeycomb_H") * hc_oracle.H), 1e-6});
  {
    const double f = factor("honeycomb_isotropy");
    const double scale = hc.C.cwiseAbs().maxCoeff();
    const double e = std::max(std::abs(hc.C(0, 0) - hc.C(1, 1)),
                              std::abs(hc.C(0, 0) - hc.C(0, 1) - 2 * f * hc.C(2, 2))) / scale;
    out.push_back({"honeycomb_isotropy", e, 1e-8});
  }

  const EffectiveModuli oc = extract_effective_moduli(validate(catalog_lattice("octet")), cfg);
  const EffectiveModuli oc_oracle = oracle_moduli("octet");
  out.push_back({"octet_C", relative(oc.C, factor("octet_C") * oc_oracle.C), 1e-6});
  out.push_back({"octet_H", relative(oc.H, factor("octet_H") * oc_oracle.H), 1e-6});
  {
    auto gap = [](const Eigen::MatrixXd& C) { return C(0, 0) - C(0, 1) - 2 * C(3, 3); };
    const double expected = factor("octet_cubic_gap") * gap(oc_oracle.C);
    out.push_back({"octet_cubic_gap", std::abs(gap(oc.C) - expected) / std::abs(expected), 1e-6});
  }
  return out;
}

}  // namespace metahomog
