#include "metahomog/beam_energy.hpp"

#include <cmath>

namespace metahomog {

namespace {

void check_length(double length) {
  if (!(length > 0.0)) throw Error(ErrorKind::NonpositiveLength, "beam length must be positive");
}

// S += c g g^T
void add_term(Eigen::MatrixXd& S, double c, const Eigen::VectorXd& g) {
  if (c != 0.0) S.noalias() += c * g * g.transpose();
}

Eigen::VectorXd unit(int size, int i) { return Eigen::VectorXd::Unit(size, i); }

}  // namespace

Eigen::MatrixXd reference_stiffness_2d(const BeamSection& s, double L) {
  check_length(L);
  // U = (v1-, v2-, th-, v1+, v2+, th+)
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(6, 6);
  add_term(S, s.EA / L, unit(6, 3) - unit(6, 0));
  add_term(S, s.EI3 / L, unit(6, 5) - unit(6, 2));
  add_term(S, 12.0 * s.EI3 / L, (unit(6, 4) - unit(6, 1)) / L - 0.5 * (unit(6, 2) + unit(6, 5)));
  return S;
}

Eigen::MatrixXd reference_stiffness_3d(const BeamSection& s, double L) {
  check_length(L);
  // U = (v-, th-, v+, th+), three components each
  auto vm = [](int i) { return unit(12, i); };
  auto tm = [](int i) { return unit(12, 3 + i); };
  auto vp = [](int i) { return unit(12, 6 + i); };
  auto tp = [](int i) { return unit(12, 9 + i); };
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(12, 12);
  add_term(S, s.EA / L, vp(0) - vm(0));
  add_term(S, s.GI1 / L, tp(0) - tm(0));
  add_term(S, s.EI2 / L, tp(1) - tm(1));
  add_term(S, s.EI3 / L, tp(2) - tm(2));
  add_term(S, 12.0 * s.EI2 / L, (vp(2) - vm(2)) / L + 0.5 * (tm(1) + tp(1)));
  add_term(S, 12.0 * s.EI3 / L, (vp(1) - vm(1)) / L - 0.5 * (tm(2) + tp(2)));
  return S;
}

Eigen::MatrixXd reference_stiffness(Kinematics kin, const BeamSection& s, double L) {
  switch (kin) {
    case Kinematics::Axial1D: {
      check_length(L);
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2, 2);
      add_term(S, s.EA / L, unit(2, 1) - unit(2, 0));
      return S;
    }
    case Kinematics::Bending1D: {
      check_length(L);
      // U = (v-, th-, v+, th+)
      Eigen::MatrixXd S = Eigen::MatrixXd::Zero(4, 4);
      add_term(S, s.EI3 / L, unit(4, 3) - unit(4, 1));
      add_term(S, 12.0 * s.EI3 / L, (unit(4, 2) - unit(4, 0)) / L - 0.5 * (unit(4, 1) + unit(4, 3)));
      return S;
    }
    case Kinematics::Planar2D: return reference_stiffness_2d(s, L);
    case Kinematics::Spatial3D: return reference_stiffness_3d(s, L);
  }
  return {};
}

Eigen::MatrixXd change_of_axes(Kinematics kin, const Eigen::MatrixXd& directors) {
  const int du = dofs_per_joint(kin);
  const int nv = deflection_dofs(kin);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * du, 2 * du);
  // rows of R are the directors: local component i = d_i . v
  const Eigen::MatrixXd R = directors.transpose();
  for (int side = 0; side < 2; ++side) {
    const int o = side * du;
    T.block(o, o, nv, nv) = R;
    if (kin == Kinematics::Spatial3D) {
      T.block(o + 3, o + 3, 3, 3) = R;
    } else if (rotation_dofs(kin) == 1) {
      T(o + nv, o + nv) = 1.0;
    }
  }
  return T;
}

Eigen::MatrixXd transform_stiffness(const Eigen::MatrixXd& reference, Kinematics kin,
                                    const Eigen::MatrixXd& directors) {
  const Eigen::MatrixXd gram = directors.transpose() * directors;
  const bool ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-12;
  if (!ortho || directors.rows() != directors.cols() || directors.rows() != deflection_dofs(kin)) {
    throw Error(ErrorKind::NonOrthonormalDirectors, "change of axes is not orthogonal");
  }
  const Eigen::MatrixXd T = change_of_axes(kin, directors);
  return T.transpose() * reference * T;
}

Eigen::MatrixXd global_stiffness(const Metamaterial& m, int beta) {
  const BarClass& bar = m.bar(beta);
  return transform_stiffness(reference_stiffness(m.kinematics(), bar.section, bar.length), m.kinematics(),
                             bar.directors);
}

BarEnergy bar_energy_global(const Metamaterial& m, int beta, const Eigen::VectorXd& U) {
  const BarClass& bar = m.bar(beta);
  const Kinematics kin = m.kinematics();
  const int du = dofs_per_joint(kin);
  const int nv = deflection_dofs(kin);
  const int nr = rotation_dofs(kin);
  if (U.size() != 2 * du) throw Error(ErrorKind::InvalidInput, "local dof array has wrong size");

  const double L = bar.length;
  const BeamSection& s = bar.section;
  const Eigen::VectorXd dv = U.segment(du, nv) - U.segment(0, nv);
  const Eigen::VectorXd dth = U.segment(du + nv, nr) - U.segment(nv, nr);
  const Eigen::VectorXd mth = 0.5 * (U.segment(du + nv, nr) + U.segment(nv, nr));
  const Eigen::MatrixXd& d = bar.directors;

  BarEnergy e;
  e.bending_strain = dth / L;
  auto sq = [](double x) { return x * x; };
  switch (kin) {
    case Kinematics::Axial1D: {
      const double ext = dv(0) * d(0, 0);
      e.axial = s.EA / (2 * L) * sq(ext);
      e.axial_strain = ext / L;
      break;
    }
    case Kinematics::Bending1D: {
      e.bending = s.EI3 / (2 * L) * sq(dth(0));
      e.coupling = 6 * s.EI3 / L * sq(dv(0) * d(0, 0) / L - mth(0));
      break;
    }
    case Kinematics::Planar2D: {
      const double ext = dv.dot(d.col(0));
      e.axial = s.EA / (2 * L) * sq(ext);
      e.axial_strain = ext / L;
      e.bending = s.EI3 / (2 * L) * sq(dth(0));
      e.coupling = 6 * s.EI3 / L * sq(dv.dot(d.col(1)) / L - mth(0));
      break;
    }
    case Kinematics::Spatial3D: {
      const double ext = dv.dot(d.col(0));
      e.axial = s.EA / (2 * L) * sq(ext);
      e.axial_strain = ext / L;
      e.torsion = s.GI1 / (2 * L) * sq(dth.dot(d.col(0)));
      e.bending = s.EI2 / (2 * L) * sq(dth.dot(d.col(1))) + s.EI3 / (2 * L) * sq(dth.dot(d.col(2)));
      e.coupling = 6 * s.EI2 / L * sq(dv.dot(d.col(2)) / L + mth.dot(d.col(1))) +
                   6 * s.EI3 / L * sq(dv.dot(d.col(1)) / L - mth.dot(d.col(2)));
      break;
    }
  }
  return e;
}

Eigen::VectorXd rigid_joint_dofs(Kinematics kin, const Eigen::VectorXd& x, const Eigen::VectorXd& c,
                                 const Eigen::VectorXd& rot) {
  const int nv = deflection_dofs(kin);
  const int nr = rotation_dofs(kin);
  Eigen::VectorXd u(nv + nr);
  switch (kin) {
    case Kinematics::Axial1D:
      u(0) = c(0);
      break;
    case Kinematics::Bending1D:
      u(0) = c(0) + rot(0) * x(0);
      u(1) = rot(0);
      break;
    case Kinematics::Planar2D:
      u(0) = c(0) - rot(0) * x(1);
      u(1) = c(1) + rot(0) * x(0);
      u(2) = rot(0);
      break;
    case Kinematics::Spatial3D: {
      const Eigen::Vector3d w = rot;
      const Eigen::Vector3d p = x;
      u.head(3) = c + w.cross(p);
      u.tail(3) = rot;
      break;
    }
  }
  return u;
}

}  // namespace metahomog
