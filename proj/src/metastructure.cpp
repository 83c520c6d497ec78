#include "metahomog/metastructure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/SparseCholesky>

#include "metahomog/beam_energy.hpp"

namespace metahomog {

using cd = std::complex<double>;

// ---------------------------------------------------------------------------
// LoadField

LoadField& LoadField::add_mode(const Eigen::VectorXi& index, const Eigen::VectorXcd& amplitude) {
  if (!modes_.empty() && (modes_.front().index.size() != index.size() ||
                          modes_.front().amplitude.size() != amplitude.size())) {
    throw Error(ErrorKind::InvalidInput, "load modes must share dimension and component count");
  }
  modes_.push_back({index, amplitude});
  return *this;
}

std::vector<LoadMode> LoadField::spectrum() const {
  std::map<std::vector<int>, Eigen::VectorXcd> merged;
  auto add = [&](const Eigen::VectorXi& idx, const Eigen::VectorXcd& a) {
    std::vector<int> key(idx.data(), idx.data() + idx.size());
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, a);
    } else {
      it->second += a;
    }
  };
  for (const auto& mode : modes_) {
    add(mode.index, mode.amplitude);
    add(-mode.index, mode.amplitude.conjugate());
  }
  std::vector<LoadMode> out;
  for (const auto& [key, a] : merged) {
    out.push_back({Eigen::Map<const Eigen::VectorXi>(key.data(), static_cast<Eigen::Index>(key.size())), a});
  }
  return out;
}

LoadField LoadField::scaled(double factor) const {
  LoadField f = *this;
  for (auto& mode : f.modes_) mode.amplitude *= factor;
  return f;
}

Eigen::VectorXd LoadField::evaluate(const Metamaterial& m, const Eigen::VectorXd& x) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m.dofs_per_joint());
  for (const auto& mode : spectrum()) {
    const double phase = mode_wavevector(m, mode.index).dot(x);
    f += (mode.amplitude * std::polar(1.0, phase)).real();
  }
  return f;
}

LoadField default_load(const Metamaterial& m) {
  const int n = m.dimension();
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(du), b = Eigen::VectorXcd::Zero(du);
  LoadField f;
  if (n == 1) {
    a(0) = 1.0;
    b(0) = cd(0.0, 0.5);
    f.add_mode(Eigen::VectorXi::Constant(1, 1), a);
    f.add_mode(Eigen::VectorXi::Constant(1, -1), b);
    return f;
  }
  a(0) = 1.0;
  a(1) = 0.5;
  b(0) = 0.3;
  b(nv - 1) += -1.0;
  f.add_mode(Eigen::VectorXi::Unit(n, 0), a);
  f.add_mode(Eigen::VectorXi::Unit(n, 1), b);
  return f;
}

Eigen::VectorXd mode_wavevector(const Metamaterial& m, const Eigen::VectorXi& index) {
  if (index.size() != m.dimension()) throw Error(ErrorKind::InvalidInput, "mode index has wrong dimension");
  return m.reciprocal() * index.cast<double>();
}

// ---------------------------------------------------------------------------
// Torus

int TorusMetastructure::cell_count() const { return torus_cell_count(period, material->dimension()); }

Eigen::VectorXd TorusMetastructure::position(int cell, int alpha) const {
  return eps() * joint_position(*material, torus_cell(cell, period, material->dimension()), alpha);
}

TorusMetastructure make_torus(const Metamaterial& m, int period) {
  if (period < 1) throw Error(ErrorKind::InvalidInput, "torus period must be at least 1");
  return TorusMetastructure{&m, period};
}

namespace {

struct TorusMode {
  Eigen::VectorXi index;
  Eigen::VectorXd k;
  Eigen::VectorXcd force;  // L a_k
};

std::vector<TorusMode> torus_modes(const TorusMetastructure& t, const LoadField& f) {
  const Metamaterial& m = *t.material;
  const Eigen::MatrixXd L = localization_operator(m);
  std::vector<TorusMode> out;
  for (const auto& mode : f.spectrum()) {
    if (mode.amplitude.size() != m.dofs_per_joint()) {
      throw Error(ErrorKind::InvalidInput, "load amplitude has wrong component count");
    }
    if ((mode.index.array() == 0).all()) {
      if (mode.amplitude.norm() > 0.0) throw Error(ErrorKind::UnbalancedLoad, "load has a k = 0 component");
      continue;
    }
    if ((2 * mode.index.array().abs() >= t.period).any()) {
      throw Error(ErrorKind::InvalidInput, "load mode is not resolved by a torus of period " +
                                               std::to_string(t.period));
    }
    out.push_back({mode.index, mode_wavevector(m, mode.index), L.cast<cd>() * mode.amplitude});
  }
  return out;
}

Eigen::MatrixXcd checked_scaled_matrix(const TorusMetastructure& t, const Eigen::VectorXd& k) {
  const Eigen::MatrixXcd D = scaled_dynamical_matrix<double>(*t.material, k, t.eps());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(es.eigenvalues().minCoeff() > 1e-12 * top)) {
    throw Error(ErrorKind::SingularMode, "dynamical matrix is singular at a load wavevector");
  }
  return D;
}

// Continuum-frame dof scaling of the unscaled lattice: U = diag(1/eps, 1) u.
Eigen::VectorXd frame_scaling(const Metamaterial& m, double eps, int joints) {
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  Eigen::VectorXd s(joints * du);
  for (int i = 0; i < s.size(); ++i) s(i) = (i % du) < nv ? 1.0 / eps : 1.0;
  return s;
}

// Stiffness eps^n S' K S' with S' = diag(1/eps, 1) from (begin, end, beta) triples.
Eigen::SparseMatrix<double> assemble(const Metamaterial& m, int joints, double eps,
                                     const std::vector<std::array<int, 3>>& bars) {
  const int du = m.dofs_per_joint();
  const int n = m.dimension();
  std::vector<Eigen::MatrixXd> blocks(m.bar_count());
  for (int b = 0; b < m.bar_count(); ++b) blocks[b] = global_stiffness(m, b);
  const Eigen::VectorXd s = frame_scaling(m, eps, 1);
  const double volume_factor = std::pow(eps, n);

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(bars.size() * 4 * du * du);
  for (const auto& [begin, end, beta] : bars) {
    const Eigen::MatrixXd& S = blocks[beta];
    const int base[2] = {begin * du, end * du};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        for (int i = 0; i < du; ++i) {
          for (int j = 0; j < du; ++j) {
            const double v = S(a * du + i, b * du + j);
            if (v != 0.0) triplets.emplace_back(base[a] + i, base[b] + j, volume_factor * s(i) * s(j) * v);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> K(joints * du, joints * du);
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

// Solves K u = F with the listed dofs held at zero.
Eigen::VectorXd constrained_solve(const Eigen::SparseMatrix<double>& K, const Eigen::VectorXd& F,
                                  const std::vector<int>& fixed) {
  const int size = static_cast<int>(K.rows());
  std::vector<int> map(size, 0);
  for (int d : fixed) map[d] = -1;
  int free = 0;
  for (int i = 0; i < size; ++i) {
    if (map[i] == 0) map[i] = free++;
    else map[i] = -1;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int col = 0; col < K.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
      const int r = map[it.row()], c = map[it.col()];
      if (r >= 0 && c >= 0) triplets.emplace_back(r, c, it.value());
    }
  }
  Eigen::SparseMatrix<double> Kr(free, free);
  Kr.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::VectorXd Fr(free);
  for (int i = 0; i < size; ++i)
    if (map[i] >= 0) Fr(map[i]) = F(i);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(Kr);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "factorization failed");
  const Eigen::VectorXd d = ldlt.vectorD();
  const double top = d.cwiseAbs().maxCoeff();
  if (!(d.minCoeff() > 1e-12 * top)) {
    throw Error(ErrorKind::SingularSystem, "stiffness is singular (insufficient constraints or mechanism)");
  }
  const Eigen::VectorXd ur = ldlt.solve(Fr);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(size);
  for (int i = 0; i < size; ++i)
    if (map[i] >= 0) u(i) = ur(map[i]);
  return u;
}

std::vector<std::array<int, 3>> torus_bars(const TorusMetastructure& t) {
  const Metamaterial& m = *t.material;
  const int N = m.joint_count();
  std::vector<std::array<int, 3>> bars;
  for (int cell = 0; cell < t.cell_count(); ++cell) {
    const Eigen::VectorXi l = torus_cell(cell, t.period, m.dimension());
    for (int b = 0; b < m.bar_count(); ++b) {
      const BarClass& bar = m.bar(b);
      const int begin = torus_index(l + bar.begin_offset, t.period) * N + bar.begin_joint;
      const int end = torus_index(l + bar.end_offset, t.period) * N + bar.end_joint;
      bars.push_back({begin, end, b});
    }
  }
  return bars;
}

}  // namespace

Eigen::VectorXd apply_loads(const TorusMetastructure& t, const LoadField& f) {
  const Metamaterial& m = *t.material;
  torus_modes(t, f);  // balance and resolution checks
  const int du = m.dofs_per_joint();
  const int N = m.joint_count();
  const double weight = std::pow(t.eps(), m.dimension()) * m.cell_volume() / N;
  Eigen::VectorXd F(t.dof_count());
  for (int cell = 0; cell < t.cell_count(); ++cell) {
    for (int a = 0; a < N; ++a) {
      F.segment((cell * N + a) * du, du) = weight * f.evaluate(m, t.position(cell, a));
    }
  }
  return F;
}

TorusSolution solve_equilibrium_torus(const TorusMetastructure& t, const LoadField& f) {
  const Metamaterial& m = *t.material;
  const int du = m.dofs_per_joint();
  const int N = m.joint_count();
  const double V = m.cell_volume();
  const int cells = t.cell_count();

  SpectralFunction spec;
  spec.period = t.period;
  spec.dimension = m.dimension();
  spec.joints = N;
  spec.components = du;
  spec.values = Eigen::MatrixXcd::Zero(N * du, cells);

  TorusSolution sol;
  for (const auto& mode : torus_modes(t, f)) {
    const Eigen::MatrixXcd D = checked_scaled_matrix(t, mode.k);
    const Eigen::VectorXcd z = D.conjugate().ldlt().solve(mode.force);
    sol.min_energy += -0.5 * V * mode.force.dot(z).real();
    const int col = torus_index(mode.index, t.period);
    spec.values.col(col) += V * cells * z;
  }
  sol.displacement = dft_inverse(m, spec);
  return sol;
}

double torus_min_energy(const TorusMetastructure& t, const LoadField& f) {
  const double V = t.material->cell_volume();
  double energy = 0.0;
  for (const auto& mode : torus_modes(t, f)) {
    const Eigen::MatrixXcd D = checked_scaled_matrix(t, mode.k);
    energy += -0.5 * V * mode.force.dot(D.conjugate().ldlt().solve(mode.force)).real();
  }
  return energy;
}

Eigen::SparseMatrix<double> torus_stiffness(const TorusMetastructure& t) {
  return assemble(*t.material, t.joint_count(), t.eps(), torus_bars(t));
}

TorusSolution solve_torus_realspace(const TorusMetastructure& t, const LoadField& f) {
  const Metamaterial& m = *t.material;
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  const Eigen::VectorXd F = apply_loads(t, f);
  std::vector<int> fixed;
  for (int c = 0; c < nv; ++c) fixed.push_back(c);
  Eigen::VectorXd u = constrained_solve(torus_stiffness(t), F, fixed);

  // remove the mean translation
  const int joints = t.joint_count();
  for (int c = 0; c < nv; ++c) {
    double mean = 0.0;
    for (int j = 0; j < joints; ++j) mean += u(j * du + c);
    mean /= joints;
    for (int j = 0; j < joints; ++j) u(j * du + c) -= mean;
  }

  TorusSolution sol;
  sol.min_energy = -0.5 * F.dot(u);
  sol.displacement = LatticeFunction(t.period, m.dimension(), m.joint_count(), du);
  sol.displacement.values = Eigen::Map<const Eigen::MatrixXd>(u.data(), m.joint_count() * du, t.cell_count());
  return sol;
}

EnergyParts torus_energy_parts(const TorusMetastructure& t, const LatticeFunction& u) {
  const Metamaterial& m = *t.material;
  const int du = m.dofs_per_joint();
  const Eigen::VectorXd s = frame_scaling(m, t.eps(), 1);
  const double volume_factor = std::pow(t.eps(), m.dimension());
  const Eigen::Map<const Eigen::VectorXd> flat(u.values.data(), u.values.size());
  EnergyParts parts;
  for (const auto& [begin, end, beta] : torus_bars(t)) {
    Eigen::VectorXd U(2 * du);
    U << flat.segment(begin * du, du).cwiseProduct(s), flat.segment(end * du, du).cwiseProduct(s);
    const BarEnergy e = bar_energy_global(m, beta, U);
    parts.axial += volume_factor * e.axial;
    parts.bending += volume_factor * e.bending_with_torsion();
    parts.coupling += volume_factor * e.coupling;
  }
  return parts;
}

// ---------------------------------------------------------------------------
// Bounded structures

ConvexDomain ConvexDomain::box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  if (lower.size() != upper.size() || !((upper - lower).array() > 0).all()) {
    throw Error(ErrorKind::InvalidInput, "box must have positive extent");
  }
  ConvexDomain d;
  d.lower = lower;
  d.upper = upper;
  const int n = static_cast<int>(lower.size());
  for (int i = 0; i < n; ++i) {
    d.normals.push_back(Eigen::VectorXd::Unit(n, i));
    d.offsets.push_back(upper(i));
    d.normals.push_back(-Eigen::VectorXd::Unit(n, i));
    d.offsets.push_back(-lower(i));
  }
  return d;
}

ConvexDomain ConvexDomain::polygon(const std::vector<Eigen::Vector2d>& v) {
  if (v.size() < 3) throw Error(ErrorKind::InvalidInput, "polygon needs at least three vertices");
  ConvexDomain d;
  d.lower = v[0];
  d.upper = v[0];
  double area = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Eigen::Vector2d a = v[i], b = v[(i + 1) % v.size()];
    area += a.x() * b.y() - a.y() * b.x();
    const Eigen::Vector2d normal(b.y() - a.y(), a.x() - b.x());  // outward for counter-clockwise order
    d.normals.push_back(normal.normalized());
    d.offsets.push_back(normal.normalized().dot(a));
    d.lower = d.lower.cwiseMin(a);
    d.upper = d.upper.cwiseMax(a);
  }
  if (!(area > 0)) throw Error(ErrorKind::InvalidInput, "polygon must be counter-clockwise with nonzero area");
  return d;
}

bool ConvexDomain::contains(const Eigen::VectorXd& x, double tol) const {
  const double scale = std::max(1.0, (upper - lower).cwiseAbs().maxCoeff());
  for (size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].dot(x) > offsets[i] + tol * scale) return false;
  }
  return true;
}

BoundedMetastructure build_bounded(const Metamaterial& m, const ConvexDomain& domain, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "scale must be positive");
  const int n = m.dimension();
  if (domain.dimension() != n) throw Error(ErrorKind::InvalidInput, "domain dimension does not match the lattice");

  // lattice coordinate range covering the scaled bounding box
  const Eigen::MatrixXd Ainv = m.basis().inverse();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (int corner = 0; corner < (1 << n); ++corner) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = (corner >> i & 1) ? domain.upper(i) : domain.lower(i);
    const Eigen::VectorXd c = Ainv * (x / eps);
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  int reach = 1;
  for (const auto& bar : m.bars()) {
    reach = std::max({reach, bar.begin_offset.cwiseAbs().maxCoeff(), bar.end_offset.cwiseAbs().maxCoeff()});
  }
  Eigen::VectorXi first(n), count(n);
  for (int i = 0; i < n; ++i) {
    first(i) = static_cast<int>(std::floor(lo(i))) - reach - 1;
    count(i) = static_cast<int>(std::ceil(hi(i))) + reach + 1 - first(i) + 1;
  }

  BoundedMetastructure s;
  s.material = &m;
  s.domain = domain;
  s.eps = eps;
  std::map<std::vector<int>, int> joint_ids;
  auto joint_id = [&](const Eigen::VectorXi& cell, int alpha) {
    std::vector<int> key(cell.data(), cell.data() + n);
    key.push_back(alpha);
    auto it = joint_ids.find(key);
    if (it != joint_ids.end()) return it->second;
    const int id = static_cast<int>(s.joints.size());
    joint_ids.emplace(key, id);
    s.joints.push_back({cell, alpha});
    s.positions.push_back(eps * joint_position(m, cell, alpha));
    return id;
  };

  long total = 1;
  for (int i = 0; i < n; ++i) total *= count(i);
  for (long index = 0; index < total; ++index) {
    Eigen::VectorXi cell(n);
    long r = index;
    for (int i = 0; i < n; ++i) {
      cell(i) = first(i) + static_cast<int>(r % count(i));
      r /= count(i);
    }
    for (int b = 0; b < m.bar_count(); ++b) {
      const Segment seg = bar_endpoints(m, cell, b);
      if (!domain.contains(eps * seg.begin) || !domain.contains(eps * seg.end)) continue;
      const BarClass& bar = m.bar(b);
      const int begin = joint_id(cell + bar.begin_offset, bar.begin_joint);
      const int end = joint_id(cell + bar.end_offset, bar.end_joint);
      s.bars.push_back({cell, b});
      s.bar_joints.emplace_back(begin, end);
    }
  }
  if (s.bars.empty()) throw Error(ErrorKind::EmptyStructure, "no bar fits inside the domain");
  return s;
}

Eigen::VectorXd apply_loads(const BoundedMetastructure& s, const PointLoad& f0) {
  const Metamaterial& m = *s.material;
  const int du = m.dofs_per_joint();
  const double weight = std::pow(s.eps, m.dimension()) * m.cell_volume() / m.joint_count();
  Eigen::VectorXd F(s.dof_count());
  for (size_t j = 0; j < s.joints.size(); ++j) {
    const Eigen::VectorXd f = f0(s.positions[j]);
    if (f.size() != du) throw Error(ErrorKind::InvalidInput, "load callable returned the wrong component count");
    F.segment(j * du, du) = weight * f;
  }
  return F;
}

Eigen::VectorXd apply_loads(const BoundedMetastructure& s, const LoadField& f) {
  return apply_loads(s, [&](const Eigen::VectorXd& x) { return f.evaluate(*s.material, x); });
}

Eigen::SparseMatrix<double> bounded_stiffness(const BoundedMetastructure& s) {
  std::vector<std::array<int, 3>> bars;
  for (size_t i = 0; i < s.bars.size(); ++i) {
    bars.push_back({s.bar_joints[i].first, s.bar_joints[i].second, s.bars[i].index});
  }
  return assemble(*s.material, static_cast<int>(s.joints.size()), s.eps, bars);
}

Eigen::MatrixXd rigid_modes(const BoundedMetastructure& s) {
  const Kinematics kin = s.material->kinematics();
  const int du = dofs_per_joint(kin);
  const int nv = deflection_dofs(kin);
  const int nr = rotation_dofs(kin);
  Eigen::MatrixXd R(s.dof_count(), du);
  for (int c = 0; c < du; ++c) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(nv);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(nr);
    if (c < nv) t(c) = 1.0;
    else w(c - nv) = 1.0;
    for (size_t j = 0; j < s.joints.size(); ++j) {
      R.col(c).segment(j * du, du) = rigid_joint_dofs(kin, s.positions[j], t, w);
    }
  }
  return R;
}

BoundedSolution solve_equilibrium_bounded(const BoundedMetastructure& s, const Eigen::VectorXd& forces,
                                          ConstraintPolicy policy, int pinned) {
  const int du = s.material->dofs_per_joint();
  if (forces.size() != s.dof_count()) throw Error(ErrorKind::InvalidInput, "force vector has wrong size");
  if (pinned < 0 || pinned >= static_cast<int>(s.joints.size())) {
    throw Error(ErrorKind::IndexOutOfRange, "pinned joint out of range");
  }

  Eigen::MatrixXd Q;
  if (policy == ConstraintPolicy::Projection) {
    pinned = 0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(rigid_modes(s));
    Q = qr.householderQ() * Eigen::MatrixXd::Identity(s.dof_count(), du);
    const double scale = std::max(forces.norm(), std::numeric_limits<double>::min());
    if ((Q.transpose() * forces).norm() > 1e-10 * scale) {
      throw Error(ErrorKind::UnbalancedLoad, "load has a component along a rigid motion");
    }
  }
  std::vector<int> fixed;
  for (int c = 0; c < du; ++c) fixed.push_back(pinned * du + c);
  BoundedSolution sol;
  sol.displacement = constrained_solve(bounded_stiffness(s), forces, fixed);
  if (policy == ConstraintPolicy::Projection) sol.displacement -= Q * (Q.transpose() * sol.displacement);
  sol.min_energy = -0.5 * forces.dot(sol.displacement);
  return sol;
}

// ---------------------------------------------------------------------------
// Continuum energies and convergence

namespace {

double continuum_sum(const Metamaterial& m, const LoadField& f,
                     const std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)>& D0) {
  const double V = m.cell_volume();
  double energy = 0.0;
  for (const auto& mode : f.spectrum()) {
    if ((mode.index.array() == 0).all()) {
      if (mode.amplitude.norm() > 0.0) throw Error(ErrorKind::UnbalancedLoad, "load has a k = 0 component");
      continue;
    }
    const Eigen::MatrixXcd D = D0(mode_wavevector(m, mode.index));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff())) {
      throw Error(ErrorKind::SingularLimit, "continuum dynamical matrix is singular at a load wavevector");
    }
    energy += -0.5 * V * mode.amplitude.dot(D.conjugate().ldlt().solve(mode.amplitude)).real();
  }
  return energy;
}

}  // namespace

double continuum_min_energy(const Metamaterial& m, const LoadField& f, const LimitConfig& cfg) {
  return continuum_sum(m, f, [&](const Eigen::VectorXd& k) { return continuum_dynamical_matrix(m, k, cfg).D0; });
}

double continuum_min_energy(const EffectiveModuli& moduli, const Metamaterial& m, const LoadField& f) {
  return continuum_sum(m, f, [&](const Eigen::VectorXd& k) { return continuum_matrix_from_moduli(moduli, k); });
}

ConvergenceTable convergence_study(const Metamaterial& m, const LoadField& f, const std::vector<double>& epss,
                                   const LimitConfig& cfg) {
  ConvergenceTable table;
  const double continuum = continuum_min_energy(m, f, cfg);
  for (double eps : epss) {
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "scales must be positive");
    const int P = static_cast<int>(std::lround(1.0 / eps));
    if (P < 1 || std::abs(P * eps - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidInput, "scale must be the reciprocal of an integer period");
    }
    ConvergenceRow row;
    row.eps = eps;
    row.period = P;
    row.discrete = torus_min_energy(make_torus(m, P), f);
    row.continuum = continuum;
    row.gap = std::abs(row.discrete - continuum);
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      row.slope = std::log(row.gap / prev.gap) / std::log(row.eps / prev.eps);
      if (!(row.gap < prev.gap)) table.monotone = false;
    }
    table.rows.push_back(row);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : table.rows)
    if (r.gap > 0) pts.emplace_back(std::log(r.eps), std::log(r.gap));
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double cnt = static_cast<double>(pts.size());
    table.fitted_slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  }
  return table;
}

}  // namespace metahomog
