#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metahomog/error.hpp"

namespace metahomog {

/// Degree-of-freedom model of a joint. The one-dimensional variants are the
/// pure stretching chain (axial deflection only) and the pure bending chain
/// (transverse deflection plus rotation).
enum class Kinematics { Axial1D, Bending1D, Planar2D, Spatial3D };

int dofs_per_joint(Kinematics kin) noexcept;
int deflection_dofs(Kinematics kin) noexcept;
int rotation_dofs(Kinematics kin) noexcept;
int spatial_dimension(Kinematics kin) noexcept;
const char* to_string(Kinematics kin) noexcept;

/// Rigidities of a straight prismatic bar. Planar kinematics use EI3
/// (bending about the out-of-plane axis); GI1 and EI2 only enter in 3D.
struct BeamSection {
  double EA = 0.0;
  double GI1 = 0.0;
  double EI2 = 0.0;
  double EI3 = 0.0;
};

struct JointRef {
  int joint = 0;
  Eigen::VectorXi offset;
};

struct BarClassSpec {
  JointRef begin;
  JointRef end;
  BeamSection section;
  std::optional<Eigen::VectorXd> director2;      // user override of d2
  std::optional<Eigen::VectorXd> expected_span;  // checked against shifts + offsets
};

/// Raw, unvalidated description of a periodic beam lattice.
struct LatticeSpec {
  Kinematics kinematics = Kinematics::Planar2D;
  Eigen::MatrixXd basis;  // columns are the Bravais vectors a_i
  std::vector<Eigen::VectorXd> shifts;
  std::vector<BarClassSpec> bars;
  std::string name;

  int dimension() const { return static_cast<int>(basis.rows()); }
};

struct Violation {
  ErrorKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Validated bar class with derived geometry.
struct BarClass {
  int begin_joint = 0;
  int end_joint = 0;
  Eigen::VectorXi begin_offset;
  Eigen::VectorXi end_offset;
  BeamSection section;
  Eigen::VectorXd span;       // dx
  double length = 0.0;
  Eigen::MatrixXd directors;  // columns d1..dn
};

/// Immutable, validated metamaterial. Joint shifts are reduced into the unit
/// cell (fractional coordinates in [0,1)); bar offsets are adjusted so the
/// geometry is unchanged.
class Metamaterial {
 public:
  int dimension() const { return static_cast<int>(basis_.rows()); }
  int joint_count() const { return static_cast<int>(shifts_.size()); }
  int bar_count() const { return static_cast<int>(bars_.size()); }
  int dofs_per_joint() const { return metahomog::dofs_per_joint(kinematics_); }
  int dof_count() const { return joint_count() * dofs_per_joint(); }
  Kinematics kinematics() const { return kinematics_; }
  const std::string& name() const { return name_; }

  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& reciprocal() const { return reciprocal_; }
  double cell_volume() const { return volume_; }
  const Eigen::VectorXd& shift(int alpha) const;
  const BarClass& bar(int beta) const;
  const std::vector<BarClass>& bars() const { return bars_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Half the shortest reciprocal basis vector; the radius of a ball that
  /// fits inside the fundamental dual cell for reasonably shaped bases.
  double brillouin_radius() const;

  friend Metamaterial validate(const LatticeSpec& spec);

 private:
  Metamaterial() = default;

  Kinematics kinematics_ = Kinematics::Planar2D;
  std::string name_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd reciprocal_;
  double volume_ = 0.0;
  std::vector<Eigen::VectorXd> shifts_;
  std::vector<BarClass> bars_;
  std::vector<std::string> warnings_;
};

ValidationReport check(const LatticeSpec& spec);

/// Throws Error carrying the kind of the first violation; the message lists
/// every violation found.
Metamaterial validate(const LatticeSpec& spec);

double cell_volume(const Eigen::MatrixXd& basis);
Eigen::MatrixXd reciprocal_basis(const Eigen::MatrixXd& basis);

/// Default director frame for a bar axis: d2 = d1 x e3 (fallback e1 when the
/// bar is parallel to e3) in 3D, d2 = d1 rotated by +90 degrees in 2D.
Eigen::MatrixXd default_directors(Kinematics kin, const Eigen::VectorXd& axis);

Eigen::VectorXd joint_position(const Metamaterial& m, const Eigen::VectorXi& cell, int alpha);

struct Segment {
  Eigen::VectorXd begin;
  Eigen::VectorXd end;
};
Segment bar_endpoints(const Metamaterial& m, const Eigen::VectorXi& cell, int beta);

struct BrillouinSamples {
  std::vector<Eigen::VectorXd> wavevectors;
  std::vector<Eigen::VectorXd> fractional;
  int zero_index = -1;
};

/// Regular grid over the fundamental dual cell: c_j = (i - floor(res/2))/res,
/// i = 0..res-1, so every sample has c_j in [-1/2, 1/2) and k = 0 is included.
BrillouinSamples brillouin_zone_sampler(const Metamaterial& m, int resolution);

/// Fractional dual coordinates c with k = sum_j c_j g_j.
Eigen::VectorXd fractional_dual(const Metamaterial& m, const Eigen::VectorXd& k);

}  // namespace metahomog
