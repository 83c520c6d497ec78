#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "metahomog/lattice_model.hpp"

namespace metahomog {

template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Lattice functions on a torus of P cells per dimension.
//
// Values are stored column-per-cell: row alpha*d + c holds component c at
// joint class alpha, column l0 + P l1 + P^2 l2 is the cell (l0, l1, l2).

struct LatticeFunction {
  int period = 1;
  int dimension = 1;
  int joints = 1;
  int components = 1;
  Eigen::MatrixXd values;

  LatticeFunction() = default;
  LatticeFunction(int period, int dimension, int joints, int components);
  int cell_count() const { return static_cast<int>(values.cols()); }
};

struct SpectralFunction {
  int period = 1;
  int dimension = 1;
  int joints = 1;
  int components = 1;
  Eigen::MatrixXcd values;  // same layout, columns index the dual grid

  int cell_count() const { return static_cast<int>(values.cols()); }
};

int torus_cell_count(int period, int dimension);
Eigen::VectorXi torus_cell(int index, int period, int dimension);
int torus_index(const Eigen::VectorXi& cell, int period);

/// Centered representative of a dual grid index: c in [-P/2, P/2).
int centered_frequency(int c, int period);

/// Wavevector of dual grid column `index`, k = sum_j (c_j / P) g_j with
/// centered c_j.
Eigen::VectorXd dual_wavevector(const Metamaterial& m, int period, int index);

/// f^(k, alpha) = V sum_l f(l, alpha) exp(-i k.x(l, alpha)).
SpectralFunction dft_forward(const Metamaterial& m, const LatticeFunction& f);

/// f(l, alpha) = 1/(V P^n) sum_k f^(k, alpha) exp(i k.x(l, alpha)); the real
/// part is returned.
LatticeFunction dft_inverse(const Metamaterial& m, const SpectralFunction& f);

// ---------------------------------------------------------------------------
// Bar functionals and dynamical matrices.

/// Complex row functionals of bar class beta acting on the stacked amplitude
/// vector u^(k) (length N d_u): rows of dv are the deflection components of
/// the bar difference, rows of dtheta and mean_theta the rotation
/// components.
template <class Real>
struct BarFunctionals {
  CMatrix<Real> dv;
  CMatrix<Real> dtheta;
  CMatrix<Real> mean_theta;
};

template <class Real>
BarFunctionals<Real> bar_difference_functionals(const Metamaterial& m, int beta, const RVector<Real>& k) {
  const BarClass& bar = m.bar(beta);
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  const int nr = rotation_dofs(m.kinematics());
  const int size = m.dof_count();
  const Real phi = Real(0.5) * k.dot(bar.span.template cast<Real>());
  const std::complex<Real> ep = std::polar(Real(1), phi);
  const std::complex<Real> em = std::polar(Real(1), -phi);
  const int ob = bar.begin_joint * du;
  const int oe = bar.end_joint * du;

  BarFunctionals<Real> f;
  f.dv = CMatrix<Real>::Zero(nv, size);
  f.dtheta = CMatrix<Real>::Zero(nr, size);
  f.mean_theta = CMatrix<Real>::Zero(nr, size);
  for (int c = 0; c < nv; ++c) {
    f.dv(c, oe + c) += ep;
    f.dv(c, ob + c) -= em;
  }
  for (int c = 0; c < nr; ++c) {
    f.dtheta(c, oe + nv + c) += ep;
    f.dtheta(c, ob + nv + c) -= em;
    f.mean_theta(c, oe + nv + c) += Real(0.5) * ep;
    f.mean_theta(c, ob + nv + c) += Real(0.5) * em;
  }
  return f;
}

namespace detail {

// D += c g^T conj(g)
template <class Real>
void add_rank_one(CMatrix<Real>& D, Real c, const CVector<Real>& g) {
  if (c == Real(0)) return;
  D.noalias() += c * g * g.adjoint();
}

}  // namespace detail

/// Hermitian dynamical matrix D(k) with entries D_ij = (1/V) sum c g_i conj(g_j),
/// so that the torus energy is the dual-grid sum of 1/2 u^T D conj(u).
template <class Real>
CMatrix<Real> dynamical_matrix(const Metamaterial& m, const RVector<Real>& k) {
  if (k.size() != m.dimension()) throw Error(ErrorKind::InvalidInput, "wavevector has wrong dimension");
  const int size = m.dof_count();
  const Kinematics kin = m.kinematics();
  const Real V = static_cast<Real>(m.cell_volume());
  CMatrix<Real> D = CMatrix<Real>::Zero(size, size);

  for (int beta = 0; beta < m.bar_count(); ++beta) {
    const BarClass& bar = m.bar(beta);
    const BarFunctionals<Real> f = bar_difference_functionals<Real>(m, beta, k);
    const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> d = bar.directors.template cast<Real>();
    const Real L = static_cast<Real>(bar.length);
    const BeamSection& s = bar.section;
    auto term = [&](double rigidity, const CVector<Real>& g) {
      detail::add_rank_one<Real>(D, static_cast<Real>(rigidity) / (L * V), g);
    };
    // rows of f.* as column vectors of functional coefficients
    auto along = [](const CMatrix<Real>& rows, const RVector<Real>& dir) -> CVector<Real> {
      return rows.transpose() * dir.template cast<std::complex<Real>>();
    };

    switch (kin) {
      case Kinematics::Axial1D:
        term(s.EA, along(f.dv, d.col(0)));
        break;
      case Kinematics::Bending1D:
        term(s.EI3, f.dtheta.row(0).transpose());
        term(12.0 * s.EI3, (along(f.dv, d.col(0)) / L - f.mean_theta.row(0).transpose()).eval());
        break;
      case Kinematics::Planar2D:
        term(s.EA, along(f.dv, d.col(0)));
        term(s.EI3, f.dtheta.row(0).transpose());
        term(12.0 * s.EI3, (along(f.dv, d.col(1)) / L - f.mean_theta.row(0).transpose()).eval());
        break;
      case Kinematics::Spatial3D:
        term(s.EA, along(f.dv, d.col(0)));
        term(s.GI1, along(f.dtheta, d.col(0)));
        term(s.EI2, along(f.dtheta, d.col(1)));
        term(s.EI3, along(f.dtheta, d.col(2)));
        term(12.0 * s.EI2, (along(f.dv, d.col(2)) / L + along(f.mean_theta, d.col(1))).eval());
        term(12.0 * s.EI3, (along(f.dv, d.col(1)) / L - along(f.mean_theta, d.col(2))).eval());
        break;
    }
  }
  // g g^H gives D_ij = g_i conj(g_j) directly
  return D;
}

/// Per-joint scaling S_eps: 1 on deflections, eps on rotations.
template <class Real>
RVector<Real> rotation_scaling(const Metamaterial& m, Real eps) {
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  RVector<Real> s(m.dof_count());
  for (int i = 0; i < m.dof_count(); ++i) s(i) = (i % du) < nv ? Real(1) : eps;
  return s;
}

/// True when every fractional dual coordinate of k lies in [-1/2, 1/2].
bool inside_brillouin_zone(const Metamaterial& m, const Eigen::VectorXd& k, double slack = 1e-12);

/// D_eps(k) = eps^-2 S_eps D(eps k) S_eps. Negative eps is accepted (used by
/// central differences); the zone check applies to eps k.
template <class Real>
CMatrix<Real> scaled_dynamical_matrix(const Metamaterial& m, const RVector<Real>& k, Real eps) {
  if (eps == Real(0)) throw Error(ErrorKind::InvalidInput, "scale must be nonzero");
  const RVector<Real> ek = eps * k;
  if (!inside_brillouin_zone(m, ek.template cast<double>())) {
    throw Error(ErrorKind::WavevectorOutsideBZ, "eps k lies outside the fundamental dual cell");
  }
  const RVector<Real> s = rotation_scaling<Real>(m, eps);
  const auto sc = s.template cast<std::complex<Real>>().asDiagonal();
  return (sc * dynamical_matrix<Real>(m, ek) * sc) / (eps * eps);
}

/// Ascending eigenvalues of D(k) for each sample; runs the samples in
/// parallel on `jobs` threads.
std::vector<Eigen::VectorXd> dispersion(const Metamaterial& m, const std::vector<Eigen::VectorXd>& kpath,
                                        int jobs = 1);

}  // namespace metahomog
