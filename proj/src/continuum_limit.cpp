#include "metahomog/continuum_limit.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "metahomog/parallel.hpp"

namespace metahomog {

using cd = std::complex<double>;

Eigen::MatrixXd localization_operator(const Metamaterial& m) {
  const int du = m.dofs_per_joint();
  const int N = m.joint_count();
  Eigen::MatrixXd L(N * du, du);
  for (int a = 0; a < N; ++a) L.block(a * du, 0, du, du) = Eigen::MatrixXd::Identity(du, du) / N;
  return L;
}

std::vector<double> limit_scales(const Metamaterial& m, const Eigen::VectorXd& k, const LimitConfig& cfg) {
  const double kn = k.norm();
  if (!(kn > 0.0)) throw Error(ErrorKind::ZeroWavevector, "continuum limit needs k != 0");
  if (cfg.levels < 1) throw Error(ErrorKind::InvalidInput, "at least one extrapolation level is required");
  std::vector<double> eps(cfg.levels);
  const double eps0 = cfg.eps0_fraction * m.brillouin_radius() / kn;
  for (int j = 0; j < cfg.levels; ++j) eps[j] = std::ldexp(eps0, -j);
  return eps;
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// Ratio of extreme eigenvalues of a Hermitian matrix (0 when not PD).
template <class Real>
double eigen_ratio(const CMatrix<Real>& A) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(A, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const Real top = ev.cwiseAbs().maxCoeff();
  if (!(top > Real(0))) return 0.0;
  return static_cast<double>(ev.minCoeff() / top);
}

template <class Real>
CMatrix<Real> hermitian_part(const CMatrix<Real>& A) {
  return (A + A.adjoint()) / Real(2);
}

// L^T D_eps(k)^-1 L; throws SingularLimit when D_eps is not positive definite.
template <class Real>
CMatrix<Real> compliance_at(const Metamaterial& m, const RVector<Real>& k, Real eps, double singular_tol) {
  const CMatrix<Real> D = scaled_dynamical_matrix<Real>(m, k, eps);
  if (eigen_ratio<Real>(D) <= singular_tol) {
    throw Error(ErrorKind::SingularLimit, "scaled dynamical matrix is singular (mechanism)");
  }
  const CMatrix<Real> L = localization_operator(m).cast<std::complex<Real>>();
  return hermitian_part<Real>(L.transpose() * D.ldlt().solve(L));
}

template <class Real>
CMatrix<Real> compliance_limit(const Metamaterial& m, const RVector<Real>& k, const std::vector<double>& eps,
                               double singular_tol, double* residual) {
  std::vector<CMatrix<Real>> samples;
  for (double e : eps) samples.push_back(compliance_at<Real>(m, k, static_cast<Real>(e), singular_tol));
  return richardson(samples, 2.0, 1, residual);
}

}  // namespace

namespace {

ContinuumDynamicalMatrix limit_at_levels(const Metamaterial& m, const Eigen::VectorXd& k, const LimitConfig& cfg) {
  ContinuumDynamicalMatrix out;
  out.k = k;
  out.epsilons = limit_scales(m, k, cfg);

  // A singular D_eps (mechanism) propagates as SingularLimit.
  double residual = 0.0;
  const std::optional<Eigen::MatrixXcd> compliance =
      compliance_limit<double>(m, k, out.epsilons, cfg.singular_tol, &residual);
  const bool compliance_converged = residual <= cfg.tol_extrap;

  if (m.joint_count() == 1) {
    std::vector<Eigen::MatrixXcd> samples;
    for (double e : out.epsilons) samples.push_back(scaled_dynamical_matrix<double>(m, k, e));
    double direct_residual = 0.0;
    const Eigen::MatrixXcd direct = hermitian_part<double>(richardson(samples, 2.0, 1, &direct_residual));
    out.direct = direct;
    if (direct_residual > cfg.tol_extrap) {
      throw Error(ErrorKind::NoConvergence, "pointwise limit residual " + format_value(direct_residual));
    }
    if (compliance_converged) {
      const Eigen::MatrixXcd inv = hermitian_part<double>(compliance->inverse());
      out.route_mismatch = (inv - direct).norm() / direct.norm();
      if (out.route_mismatch > cfg.route_tol) {
        throw Error(ErrorKind::NoConvergence,
                    "limit routes disagree by " + format_value(out.route_mismatch));
      }
      out.compliance = compliance;
      out.D0 = inv;
      out.residual = residual;
      return out;
    }
    // Compliance diverges: the limit energy has a nontrivial kernel.
    if (eigen_ratio<double>(direct) > 1e-8) {
      throw Error(ErrorKind::NoConvergence, "compliance limit residual " + format_value(residual));
    }
    out.D0 = direct;
    out.residual = direct_residual;
    return out;
  }

  if (!compliance_converged) {
    throw Error(ErrorKind::NoConvergence, "compliance limit residual " + format_value(residual));
  }
  if (eigen_ratio<double>(*compliance) <= cfg.singular_tol) {
    throw Error(ErrorKind::SingularLimit, "limit compliance is not invertible");
  }
  out.compliance = compliance;
  out.D0 = hermitian_part<double>(compliance->inverse());
  out.residual = residual;
  return out;
}

}  // namespace

ContinuumDynamicalMatrix continuum_dynamical_matrix(const Metamaterial& m, const Eigen::VectorXd& k,
                                                    const LimitConfig& cfg) {
  // Stiff higher-order terms (large torsion or bending ratios) need a longer
  // sequence; refine two levels at a time until the tableau settles.
  LimitConfig c = cfg;
  while (true) {
    try {
      return limit_at_levels(m, k, c);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence || c.levels + 2 > std::max(cfg.levels, cfg.max_levels)) throw;
    }
    c.levels += 2;
  }
}

EquicoercivityReport check_equicoercivity(const Metamaterial& m, const std::vector<Eigen::VectorXd>& ks,
                                          const std::vector<double>& epss) {
  EquicoercivityReport report;
  report.constant = std::numeric_limits<double>::infinity();
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  for (const auto& k : ks) {
    const double kn = k.norm();
    if (!(kn > 0.0)) throw Error(ErrorKind::ZeroWavevector, "equicoercivity samples must exclude k = 0");
    Eigen::VectorXd w(m.dof_count());
    for (int i = 0; i < m.dof_count(); ++i) w(i) = (i % du) < nv ? 1.0 / kn : 1.0;
    for (double eps : epss) {
      if (!inside_brillouin_zone(m, eps * k)) continue;
      const Eigen::MatrixXcd D = scaled_dynamical_matrix<double>(m, k, eps);
      const Eigen::MatrixXcd A = w.asDiagonal() * D * w.asDiagonal();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
      const double value = es.eigenvalues().minCoeff();
      report.samples.push_back({k, eps, value});
      report.constant = std::min(report.constant, value);
    }
  }
  if (report.samples.empty()) report.constant = 0.0;
  return report;
}

std::vector<Eigen::VectorXcd> probe_vectors(int size) {
  std::vector<Eigen::VectorXcd> out;
  for (int a = 0; a < size; ++a) out.push_back(Eigen::VectorXcd::Unit(size, a));
  for (int a = 0; a < size; ++a) {
    for (int b = a + 1; b < size; ++b) {
      out.push_back(Eigen::VectorXcd::Unit(size, a) + Eigen::VectorXcd::Unit(size, b));
      out.push_back(Eigen::VectorXcd::Unit(size, a) + cd(0, 1) * Eigen::VectorXcd::Unit(size, b));
    }
  }
  return out;
}

double check_homogeneity(const Metamaterial& m, const Eigen::VectorXd& k, double lambda, const LimitConfig& cfg) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidInput, "scale factor must be positive");
  const Eigen::MatrixXcd Dk = continuum_dynamical_matrix(m, k, cfg).D0;
  const Eigen::MatrixXcd Dl = continuum_dynamical_matrix(m, lambda * k, cfg).D0;
  const int nv = deflection_dofs(m.kinematics());
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& z : probe_vectors(m.dofs_per_joint())) {
    Eigen::VectorXcd zs = z;
    zs.head(nv) *= lambda;
    const double lhs = (z.adjoint() * Dl * z)(0).real();
    const double rhs = (zs.adjoint() * Dk * zs)(0).real();
    worst = std::max(worst, std::abs(lhs - rhs));
    scale = std::max(scale, std::abs(lhs));
  }
  return scale > 0 ? worst / scale : worst;
}

const char* to_string(SymmetryClass s) noexcept {
  switch (s) {
    case SymmetryClass::None: return "none";
    case SymmetryClass::Cubic: return "cubic";
    case SymmetryClass::Isotropic: return "isotropic";
  }
  return "none";
}

int voigt_size(int dimension) { return dimension * (dimension + 1) / 2; }
int rotation_size(int dimension) { return dimension * (dimension - 1) / 2; }

namespace {

// Voigt index of the symmetric pair (i, j).
int voigt_index(int n, int i, int j) {
  if (i == j) return i;
  if (i > j) std::swap(i, j);
  if (n == 2) return 2;
  if (i == 0) return j == 1 ? 3 : 4;
  return 5;
}

void check_fit_kinematics(Kinematics kin) {
  if (kin == Kinematics::Bending1D) {
    throw Error(ErrorKind::InvalidInput, "transverse chains have no micropolar representation");
  }
}

}  // namespace

Eigen::VectorXcd voigt_strain(const Eigen::MatrixXcd& beta) {
  const int n = static_cast<int>(beta.rows());
  Eigen::VectorXcd e(voigt_size(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      e(voigt_index(n, i, j)) = i == j ? beta(i, i) : beta(i, j) + beta(j, i);
    }
  }
  return e;
}

Eigen::VectorXcd rotation_mismatch(const Eigen::MatrixXcd& beta, const Eigen::VectorXcd& theta) {
  const int n = static_cast<int>(beta.rows());
  Eigen::VectorXcd r = theta;
  if (n == 2) {
    r(0) -= 0.5 * (beta(1, 0) - beta(0, 1));
  } else if (n == 3) {
    r(0) -= 0.5 * (beta(2, 1) - beta(1, 2));
    r(1) -= 0.5 * (beta(0, 2) - beta(2, 0));
    r(2) -= 0.5 * (beta(1, 0) - beta(0, 1));
  }
  return r;
}

std::vector<Eigen::VectorXd> probe_directions(int dimension, bool alternate) {
  std::vector<Eigen::VectorXd> dirs;
  if (dimension == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, alternate ? -1.0 : 1.0));
  } else if (dimension == 2) {
    const double off = alternate ? M_PI / 16 : 0.0;
    for (int j = 0; j < 8; ++j) {
      const double t = j * M_PI / 8 + off;
      dirs.push_back(Eigen::Vector2d(std::cos(t), std::sin(t)));
    }
  } else {
    std::vector<Eigen::Vector3d> raw;
    if (!alternate) {
      raw = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1},
             {0, 1, 1}, {0, 1, -1}, {1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}};
    } else {
      raw = {{2, 1, 0}, {0, 2, 1}, {1, 0, 2}, {2, -1, 1}, {1, 2, -1}, {-1, 1, 2}, {3, 1, 1},
             {1, 3, 1}, {1, 1, 3}, {2, 1, -2}, {-2, 2, 1}, {1, -2, 2}, {3, -1, 2}};
    }
    for (auto& v : raw) dirs.push_back(v.normalized());
  }
  return dirs;
}

namespace {

// beta = -i xi k^T
Eigen::MatrixXcd probe_gradient(const Eigen::VectorXcd& xi, const Eigen::VectorXd& k) {
  return cd(0, -1) * xi * k.transpose().cast<cd>();
}

using Tensor4 = std::vector<double>;

Tensor4 voigt_to_tensor(const Eigen::MatrixXd& C, int n) {
  Tensor4 t(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t[((i * n + j) * n + k) * n + l] = C(voigt_index(n, i, j), voigt_index(n, k, l));
  return t;
}

double rotation_defect(const Tensor4& t, const Eigen::MatrixXd& R, int n) {
  auto at = [&](int i, int j, int k, int l) { return t[((i * n + j) * n + k) * n + l]; };
  double diff = 0.0, norm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) s += R(i, a) * R(j, b) * R(k, c) * R(l, d) * at(a, b, c, d);
          diff += (s - at(i, j, k, l)) * (s - at(i, j, k, l));
          norm += at(i, j, k, l) * at(i, j, k, l);
        }
  return norm > 0 ? std::sqrt(diff / norm) : std::sqrt(diff);
}

Eigen::MatrixXd rotation_matrix(int n, const Eigen::Vector3d& axis, double angle) {
  if (n == 2) {
    Eigen::MatrixXd R(2, 2);
    R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return R;
  }
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace

SymmetryClass classify_symmetry(const Eigen::MatrixXd& C, int n, double tol) {
  if (n == 1) return SymmetryClass::Isotropic;
  const Tensor4 t = voigt_to_tensor(C, n);
  auto invariant = [&](const std::vector<std::pair<Eigen::Vector3d, double>>& rots) {
    for (const auto& [axis, angle] : rots) {
      if (rotation_defect(t, rotation_matrix(n, axis, angle), n) > tol) return false;
    }
    return true;
  };
  const double q = M_PI / 2;
  if (invariant({{Eigen::Vector3d(1, 2, 3), 0.7}, {Eigen::Vector3d(-2, 1, 0.5), 1.3}, {Eigen::Vector3d(0, 0, 1), 0.3}})) {
    return SymmetryClass::Isotropic;
  }
  if (invariant({{Eigen::Vector3d(1, 0, 0), q}, {Eigen::Vector3d(0, 1, 0), q}, {Eigen::Vector3d(0, 0, 1), q}})) {
    return SymmetryClass::Cubic;
  }
  return SymmetryClass::None;
}

EffectiveModuli extract_effective_moduli(const Metamaterial& m, const LimitConfig& cfg,
                                         const std::vector<Eigen::VectorXd>& directions) {
  check_fit_kinematics(m.kinematics());
  const int n = m.dimension();
  const int nv = deflection_dofs(m.kinematics());
  const int ne = voigt_size(n);
  const int nr = rotation_size(n);
  const std::vector<Eigen::VectorXd> dirs = directions.empty() ? probe_directions(n) : directions;

  std::vector<Eigen::MatrixXcd> D0(dirs.size());
  parallel_for(static_cast<int>(dirs.size()), cfg.jobs,
               [&](int i) { D0[i] = continuum_dynamical_matrix(m, dirs[i], cfg).D0; });

  const int nc = ne * (ne + 1) / 2;
  const int nh = nr * (nr + 1) / 2;
  const int unknowns = nc + nh + ne * nr;
  const auto probes = probe_vectors(m.dofs_per_joint());
  Eigen::MatrixXd A(dirs.size() * probes.size(), unknowns);
  Eigen::VectorXd b(A.rows());
  int row = 0;
  for (size_t d = 0; d < dirs.size(); ++d) {
    for (const auto& z : probes) {
      const Eigen::MatrixXcd beta = probe_gradient(z.head(nv), dirs[d]);
      const Eigen::VectorXcd es = voigt_strain(beta);
      const Eigen::VectorXcd r = rotation_mismatch(beta, z.tail(nr));
      int col = 0;
      for (int a = 0; a < ne; ++a)
        for (int c = a; c < ne; ++c) A(row, col++) = (a == c ? 1.0 : 2.0) * (std::conj(es(a)) * es(c)).real();
      for (int a = 0; a < nr; ++a)
        for (int c = a; c < nr; ++c) A(row, col++) = (a == c ? 1.0 : 2.0) * (std::conj(r(a)) * r(c)).real();
      for (int a = 0; a < ne; ++a)
        for (int c = 0; c < nr; ++c) A(row, col++) = 2.0 * (std::conj(es(a)) * r(c)).real();
      b(row) = (z.adjoint() * D0[d] * z)(0).real();
      ++row;
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  EffectiveModuli out;
  out.dimension = n;
  const double smin = sv(sv.size() - 1);
  out.condition = smin > 0 ? (sv(0) / smin) * (sv(0) / smin) : std::numeric_limits<double>::infinity();
  if (out.condition > cfg.max_condition) {
    throw Error(ErrorKind::IllConditionedFit, "normal equations condition " + format_value(out.condition));
  }
  const Eigen::VectorXd x = svd.solve(b);
  out.residual = (A * x - b).norm() / b.norm();

  out.C = Eigen::MatrixXd::Zero(ne, ne);
  out.H = Eigen::MatrixXd::Zero(nr, nr);
  out.G = Eigen::MatrixXd::Zero(ne, nr);
  int col = 0;
  for (int a = 0; a < ne; ++a)
    for (int c = a; c < ne; ++c) out.C(a, c) = out.C(c, a) = x(col++);
  for (int a = 0; a < nr; ++a)
    for (int c = a; c < nr; ++c) out.H(a, c) = out.H(c, a) = x(col++);
  for (int a = 0; a < ne; ++a)
    for (int c = 0; c < nr; ++c) out.G(a, c) = x(col++);

  if (out.residual > cfg.tol_fit) {
    throw Error(ErrorKind::RepresentationFailure, "fit residual " + format_value(out.residual));
  }
  out.symmetry = classify_symmetry(out.C, n, cfg.tol_symmetry);
  return out;
}

double continuum_energy_density(const EffectiveModuli& moduli, const Eigen::MatrixXd& beta,
                                const Eigen::VectorXd& theta) {
  const Eigen::VectorXd es = voigt_strain(beta.cast<cd>()).real();
  const Eigen::VectorXd r = rotation_mismatch(beta.cast<cd>(), theta.cast<cd>()).real();
  double w = 0.5 * es.dot(moduli.C * es);
  if (r.size() > 0) w += 0.5 * r.dot(moduli.H * r) + es.dot(moduli.G * r);
  return w;
}

Eigen::MatrixXcd continuum_matrix_from_moduli(const EffectiveModuli& moduli, const Eigen::VectorXd& k) {
  const int n = moduli.dimension;
  const int ne = voigt_size(n);
  const int nr = rotation_size(n);
  const int du = n + nr;
  Eigen::MatrixXcd B(ne + nr, du);
  for (int c = 0; c < du; ++c) {
    const Eigen::VectorXcd z = Eigen::VectorXcd::Unit(du, c);
    const Eigen::MatrixXcd beta = probe_gradient(z.head(n), k);
    B.col(c) << voigt_strain(beta), rotation_mismatch(beta, z.tail(nr));
  }
  Eigen::MatrixXd M(ne + nr, ne + nr);
  M << moduli.C, moduli.G, moduli.G.transpose(), moduli.H;
  return B.adjoint() * M.cast<cd>() * B;
}

std::vector<Eigen::MatrixXcd> compliance_series(const Metamaterial& m, const Eigen::VectorXd& k, int order,
                                                const LimitConfig& cfg) {
  using Real = long double;
  if (m.joint_count() != 1) {
    throw Error(ErrorKind::UnsupportedJointCount, "higher-order expansion needs one joint class");
  }
  if (order < 0 || order > 4) throw Error(ErrorKind::InvalidInput, "expansion order must be in 0..4");
  const RVector<Real> kk = k.cast<Real>();
  const std::vector<double> eps = limit_scales(m, k, cfg);

  double residual = 0.0;
  const CMatrix<Real> M0 = compliance_limit<Real>(m, kk, eps, cfg.singular_tol, &residual);
  if (residual > cfg.tol_extrap) {
    throw Error(ErrorKind::SingularLimit, "compliance limit does not exist (residual " +
                                              format_value(residual) + ")");
  }

  // Even and odd parts of M(+-h) are polynomials in h^2 up to truncation;
  // interpolating them on h_j = h0 2^-j avoids differencing against M0.
  const int J = std::max(cfg.fd_levels, order / 2 + 2);
  const double h0 = cfg.fd_step_fraction * m.brillouin_radius() / k.norm();
  std::vector<CMatrix<Real>> even, odd;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> V(J, J);
  for (int j = 0; j < J; ++j) {
    const Real h = static_cast<Real>(std::ldexp(h0, -j));
    const CMatrix<Real> p = compliance_at<Real>(m, kk, h, cfg.singular_tol);
    const CMatrix<Real> q = compliance_at<Real>(m, kk, -h, cfg.singular_tol);
    even.push_back((p + q) / Real(2));
    odd.push_back((p - q) / (Real(2) * h));
    for (int i = 0; i < J; ++i) V(j, i) = std::pow(h * h, i);
  }
  const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> W = V.fullPivLu().inverse();
  auto coefficient = [&](const std::vector<CMatrix<Real>>& parts, int i) {
    CMatrix<Real> c = CMatrix<Real>::Zero(M0.rows(), M0.cols());
    for (int j = 0; j < J; ++j) c += W(i, j) * parts[j];
    return c;
  };

  std::vector<Eigen::MatrixXcd> series;
  series.push_back(M0.cast<cd>());
  for (int d = 1; d <= order; ++d) {
    series.push_back((d % 2 ? coefficient(odd, d / 2) : coefficient(even, d / 2)).template cast<cd>());
  }
  return series;
}

Eigen::MatrixXcd higher_order_matrix(const Metamaterial& m, const Eigen::VectorXd& k, double eps, int order,
                                     const LimitConfig& cfg) {
  const auto series = compliance_series(m, k, order, cfg);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(series[0].rows(), series[0].cols());
  double p = 1.0;
  for (const auto& c : series) {
    S += p * c;
    p *= eps;
  }
  return hermitian_part<double>(S.inverse());
}

}  // namespace metahomog
