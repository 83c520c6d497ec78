#pragma once

#include <functional>
#include <limits>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "metahomog/continuum_limit.hpp"
#include "metahomog/fourier.hpp"
#include "metahomog/lattice_model.hpp"

namespace metahomog {

// ---------------------------------------------------------------------------
// Loads

/// One Fourier mode of f0 = (q0; m0) on the continuum torus spanned by the
/// Bravais basis: wavevector k = sum_j m_j g_j.
struct LoadMode {
  Eigen::VectorXi index;
  Eigen::VectorXcd amplitude;  // d_u components
};

/// Real load field f0(x) = sum_modes a exp(i k.x) + c.c. Conjugate partners
/// are implied, so f0 is real by construction.
class LoadField {
 public:
  LoadField() = default;

  LoadField& add_mode(const Eigen::VectorXi& index, const Eigen::VectorXcd& amplitude);
  const std::vector<LoadMode>& modes() const { return modes_; }
  bool empty() const { return modes_.empty(); }

  /// All modes with explicit conjugate partners, equal indices merged.
  std::vector<LoadMode> spectrum() const;

  LoadField scaled(double factor) const;

  Eigen::VectorXd evaluate(const Metamaterial& m, const Eigen::VectorXd& x) const;

 private:
  std::vector<LoadMode> modes_;
};

/// Fixed balanced two-mode load: modes +e1 and -e1 with independent
/// amplitudes in 1D (the only modes a 4-cell chain resolves), modes e1 and e2
/// in 2D and 3D. Deflection components only.
LoadField default_load(const Metamaterial& m);

using PointLoad = std::function<Eigen::VectorXd(const Eigen::VectorXd& x)>;

// ---------------------------------------------------------------------------
// Periodic torus

/// P cells per dimension covering the continuum cell at scale eps = 1/P.
struct TorusMetastructure {
  const Metamaterial* material = nullptr;
  int period = 1;

  double eps() const { return 1.0 / period; }
  int cell_count() const;
  int joint_count() const { return cell_count() * material->joint_count(); }
  int dof_count() const { return joint_count() * material->dofs_per_joint(); }
  /// Scaled position eps x(l, alpha) of joint `alpha` in cell column `cell`.
  Eigen::VectorXd position(int cell, int alpha) const;
};

TorusMetastructure make_torus(const Metamaterial& m, int period);

/// Continuum wavevector of an integer mode index.
Eigen::VectorXd mode_wavevector(const Metamaterial& m, const Eigen::VectorXi& index);

/// Joint forces eps^n (V/N) f0(eps x(l, alpha)), stacked cell-major then
/// joint class. UnbalancedLoad for a k = 0 component.
Eigen::VectorXd apply_loads(const TorusMetastructure& t, const LoadField& f);

struct TorusSolution {
  LatticeFunction displacement;  // continuum-frame (v, theta) per joint
  double min_energy = 0.0;       // -1/2 <f, u>
};

/// Exact per-mode solve u^_k = conj(D_eps(k))^-1 L a_k. SingularMode when
/// D_eps is singular at a load wavevector.
TorusSolution solve_equilibrium_torus(const TorusMetastructure& t, const LoadField& f);

/// Minimum potential energy -1/2 V sum_k (L a_k)^T D_eps(k)^-1 conj(L a_k).
double torus_min_energy(const TorusMetastructure& t, const LoadField& f);

/// Sparse stiffness eps^(n-2) S K S in the continuum frame.
Eigen::SparseMatrix<double> torus_stiffness(const TorusMetastructure& t);

/// Direct real-space assembly and factorization; translations are fixed by
/// pinning one joint and removing the mean afterwards.
TorusSolution solve_torus_realspace(const TorusMetastructure& t, const LoadField& f);

struct EnergyParts {
  double axial = 0.0;
  double bending = 0.0;  // includes torsion
  double coupling = 0.0;
  double total() const { return axial + bending + coupling; }
};

/// Scaled energy eps^n E(u) split term by term over all bars.
EnergyParts torus_energy_parts(const TorusMetastructure& t, const LatticeFunction& u);

// ---------------------------------------------------------------------------
// Bounded structures

/// Bounded convex polytope {x : normals_i . x <= offsets_i} with a bounding box.
struct ConvexDomain {
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static ConvexDomain box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);
  /// Counter-clockwise polygon in the plane.
  static ConvexDomain polygon(const std::vector<Eigen::Vector2d>& vertices);
  bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
  int dimension() const { return static_cast<int>(lower.size()); }
};

struct SiteRef {
  Eigen::VectorXi cell;
  int index = 0;  // alpha for joints, beta for bars
};

struct BoundedMetastructure {
  const Metamaterial* material = nullptr;
  ConvexDomain domain;
  double eps = 1.0;
  std::vector<SiteRef> bars;
  std::vector<SiteRef> joints;
  std::vector<Eigen::VectorXd> positions;          // scaled joint positions
  std::vector<std::pair<int, int>> bar_joints;    // (begin, end) joint indices

  int dof_count() const { return static_cast<int>(joints.size()) * material->dofs_per_joint(); }
};

/// Bars whose scaled endpoints both lie in the domain; joints are their
/// endpoints. EmptyStructure when nothing fits.
BoundedMetastructure build_bounded(const Metamaterial& m, const ConvexDomain& domain, double eps);

Eigen::VectorXd apply_loads(const BoundedMetastructure& s, const PointLoad& f0);
Eigen::VectorXd apply_loads(const BoundedMetastructure& s, const LoadField& f);

Eigen::SparseMatrix<double> bounded_stiffness(const BoundedMetastructure& s);

/// Columns span the rigid motions v = c + w x, theta = *w at the joints.
Eigen::MatrixXd rigid_modes(const BoundedMetastructure& s);

enum class ConstraintPolicy { Projection, Pin };

struct BoundedSolution {
  Eigen::VectorXd displacement;
  double min_energy = 0.0;
};

/// Projection: the load must be orthogonal to the rigid modes (else
/// UnbalancedLoad) and the solution is orthogonal to them. Pin: all dofs of
/// joint `pinned` are held at zero. SingularSystem on a mechanism.
BoundedSolution solve_equilibrium_bounded(const BoundedMetastructure& s, const Eigen::VectorXd& forces,
                                          ConstraintPolicy policy = ConstraintPolicy::Projection, int pinned = 0);

// ---------------------------------------------------------------------------
// Continuum energies and convergence

/// -1/2 V sum_k a_k^T D0(k)^-1 conj(a_k) over the load spectrum.
double continuum_min_energy(const Metamaterial& m, const LoadField& f, const LimitConfig& cfg = {});
double continuum_min_energy(const EffectiveModuli& moduli, const Metamaterial& m, const LoadField& f);

struct ConvergenceRow {
  double eps = 0.0;
  int period = 0;
  double discrete = 0.0;
  double continuum = 0.0;
  double gap = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();  // against the previous row
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();  // least squares, log gap vs log eps
  bool monotone = true;  // every gap is smaller than the previous one
};

/// Torus solves at P = 1/eps for each eps (which must be reciprocals of
/// integers) against the continuum minimum energy.
ConvergenceTable convergence_study(const Metamaterial& m, const LoadField& f, const std::vector<double>& epss,
                                   const LimitConfig& cfg = {});

}  // namespace metahomog
