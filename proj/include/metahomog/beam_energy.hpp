#pragma once

#include <Eigen/Dense>

#include "metahomog/lattice_model.hpp"

namespace metahomog {

// Local dof layout U = (u-; u+), u = (v; theta) in the frame of the bar.

/// 6x6 stiffness of a planar beam, reference axis along x1.
Eigen::MatrixXd reference_stiffness_2d(const BeamSection& section, double length);

/// 12x12 stiffness of a spatial beam, reference axis along x1, principal
/// bending axes x2 and x3.
Eigen::MatrixXd reference_stiffness_3d(const BeamSection& section, double length);

/// Dispatches on kinematics; the 1D variants are the 2x2 bar and the 4x4
/// transverse beam (deflection, rotation).
Eigen::MatrixXd reference_stiffness(Kinematics kin, const BeamSection& section, double length);

/// Orthogonal change of axes T with U_local = T U_global. Rotations are left
/// untouched in the planar and 1D cases.
Eigen::MatrixXd change_of_axes(Kinematics kin, const Eigen::MatrixXd& directors);

/// T^T S_ref T. Throws NonOrthonormalDirectors.
Eigen::MatrixXd transform_stiffness(const Eigen::MatrixXd& reference, Kinematics kin,
                                    const Eigen::MatrixXd& directors);

/// Global-frame stiffness of bar class beta.
Eigen::MatrixXd global_stiffness(const Metamaterial& m, int beta);

struct BarEnergy {
  double axial = 0.0;
  double torsion = 0.0;
  double bending = 0.0;   // flexural terms, torsion excluded
  double coupling = 0.0;
  double axial_strain = 0.0;
  Eigen::VectorXd bending_strain;  // dtheta / L, global components

  double total() const { return axial + torsion + bending + coupling; }
  // Torsion counts towards the bending part in the A + B + C split.
  double bending_with_torsion() const { return torsion + bending; }
};

/// Energy of one bar evaluated term by term from the director form, given the
/// global local-dof array U = (u-; u+).
BarEnergy bar_energy_global(const Metamaterial& m, int beta, const Eigen::VectorXd& U);

/// Joint dofs of the rigid motion v = c + w x, theta = *w at position x.
/// `rotation` has rotation_dofs(kin) entries (the axial vector of w).
Eigen::VectorXd rigid_joint_dofs(Kinematics kin, const Eigen::VectorXd& x, const Eigen::VectorXd& translation,
                                 const Eigen::VectorXd& rotation);

}  // namespace metahomog
