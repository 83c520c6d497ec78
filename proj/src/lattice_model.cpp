#include "metahomog/lattice_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace metahomog {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::ZeroLengthBar: return "ZeroLengthBar";
    case ErrorKind::NonOrthonormalDirectors: return "NonOrthonormalDirectors";
    case ErrorKind::GeometryMismatch: return "GeometryMismatch";
    case ErrorKind::NonpositiveLength: return "NonpositiveLength";
    case ErrorKind::WavevectorOutsideBZ: return "WavevectorOutsideBZ";
    case ErrorKind::ZeroWavevector: return "ZeroWavevector";
    case ErrorKind::SingularLimit: return "SingularLimit";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RepresentationFailure: return "RepresentationFailure";
    case ErrorKind::IllConditionedFit: return "IllConditionedFit";
    case ErrorKind::UnsupportedJointCount: return "UnsupportedJointCount";
    case ErrorKind::EmptyStructure: return "EmptyStructure";
    case ErrorKind::UnbalancedLoad: return "UnbalancedLoad";
    case ErrorKind::SingularMode: return "SingularMode";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::SingularOracle: return "SingularOracle";
  }
  return "Unknown";
}

int dofs_per_joint(Kinematics kin) noexcept {
  return deflection_dofs(kin) + rotation_dofs(kin);
}

int deflection_dofs(Kinematics kin) noexcept {
  switch (kin) {
    case Kinematics::Axial1D:
    case Kinematics::Bending1D: return 1;
    case Kinematics::Planar2D: return 2;
    case Kinematics::Spatial3D: return 3;
  }
  return 0;
}

int rotation_dofs(Kinematics kin) noexcept {
  switch (kin) {
    case Kinematics::Axial1D: return 0;
    case Kinematics::Bending1D:
    case Kinematics::Planar2D: return 1;
    case Kinematics::Spatial3D: return 3;
  }
  return 0;
}

int spatial_dimension(Kinematics kin) noexcept {
  switch (kin) {
    case Kinematics::Axial1D:
    case Kinematics::Bending1D: return 1;
    case Kinematics::Planar2D: return 2;
    case Kinematics::Spatial3D: return 3;
  }
  return 0;
}

const char* to_string(Kinematics kin) noexcept {
  switch (kin) {
    case Kinematics::Axial1D: return "axial1d";
    case Kinematics::Bending1D: return "bending1d";
    case Kinematics::Planar2D: return "planar2d";
    case Kinematics::Spatial3D: return "spatial3d";
  }
  return "unknown";
}

const Eigen::VectorXd& Metamaterial::shift(int alpha) const {
  if (alpha < 0 || alpha >= joint_count()) {
    throw Error(ErrorKind::IndexOutOfRange, "joint class " + std::to_string(alpha));
  }
  return shifts_[alpha];
}

const BarClass& Metamaterial::bar(int beta) const {
  if (beta < 0 || beta >= bar_count()) {
    throw Error(ErrorKind::IndexOutOfRange, "bar class " + std::to_string(beta));
  }
  return bars_[beta];
}

double Metamaterial::brillouin_radius() const {
  return 0.5 * reciprocal_.colwise().norm().minCoeff();
}

double cell_volume(const Eigen::MatrixXd& basis) {
  if (basis.rows() != basis.cols() || basis.rows() == 0) {
    throw Error(ErrorKind::SingularBasis, "basis must be a nonempty square matrix");
  }
  const double det = std::abs(basis.determinant());
  const double scale = basis.colwise().norm().prod();
  if (!(det > 1e-12 * scale)) {
    throw Error(ErrorKind::SingularBasis, "basis vectors are linearly dependent");
  }
  return det;
}

Eigen::MatrixXd reciprocal_basis(const Eigen::MatrixXd& basis) {
  cell_volume(basis);
  return 2.0 * std::numbers::pi * basis.inverse().transpose();
}

Eigen::MatrixXd default_directors(Kinematics kin, const Eigen::VectorXd& axis) {
  const Eigen::VectorXd d1 = axis.normalized();
  switch (kin) {
    case Kinematics::Axial1D:
    case Kinematics::Bending1D: {
      Eigen::MatrixXd d(1, 1);
      d(0, 0) = d1(0) >= 0.0 ? 1.0 : -1.0;
      return d;
    }
    case Kinematics::Planar2D: {
      Eigen::MatrixXd d(2, 2);
      d.col(0) = d1;
      d.col(1) << -d1(1), d1(0);
      return d;
    }
    case Kinematics::Spatial3D: {
      const Eigen::Vector3d a = d1;
      Eigen::Vector3d d2 = a.cross(Eigen::Vector3d::UnitZ());
      if (d2.norm() < 1e-8) d2 = a.cross(Eigen::Vector3d::UnitX());
      d2.normalize();
      Eigen::MatrixXd d(3, 3);
      d.col(0) = a;
      d.col(1) = d2;
      d.col(2) = a.cross(d2);
      return d;
    }
  }
  return {};
}

namespace {

Eigen::VectorXd lattice_point(const Eigen::MatrixXd& basis, const Eigen::VectorXi& cell) {
  return basis * cell.cast<double>();
}

bool orthonormal(const Eigen::MatrixXd& d, double tol) {
  const Eigen::MatrixXd gram = d.transpose() * d;
  if ((gram - Eigen::MatrixXd::Identity(d.cols(), d.cols())).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  if (d.rows() >= 2 && d.rows() == d.cols() && d.determinant() < 0.0) return false;
  return true;
}

}  // namespace

ValidationReport check(const LatticeSpec& spec) {
  ValidationReport report;
  auto fail = [&](ErrorKind kind, const std::string& msg) { report.errors.push_back({kind, msg}); };

  const int n = spec.dimension();
  if (spec.basis.rows() != spec.basis.cols() || n == 0) {
    fail(ErrorKind::SingularBasis, "basis must be a nonempty square matrix");
    return report;
  }
  if (n != spatial_dimension(spec.kinematics)) {
    fail(ErrorKind::InvalidInput, std::string("kinematics ") + to_string(spec.kinematics) +
                                      " requires dimension " +
                                      std::to_string(spatial_dimension(spec.kinematics)));
    return report;
  }
  try {
    cell_volume(spec.basis);
  } catch (const Error& e) {
    fail(e.kind(), e.what());
    return report;
  }
  if (spec.shifts.empty()) fail(ErrorKind::InvalidInput, "no joint classes");
  if (spec.bars.empty()) fail(ErrorKind::InvalidInput, "no bar classes");
  for (std::size_t a = 0; a < spec.shifts.size(); ++a) {
    if (spec.shifts[a].size() != n) {
      fail(ErrorKind::InvalidInput, "joint " + std::to_string(a) + " shift has wrong dimension");
    }
  }
  if (!report.ok()) return report;

  const double scale = spec.basis.colwise().norm().maxCoeff();
  std::vector<bool> referenced(spec.shifts.size(), false);
  for (std::size_t b = 0; b < spec.bars.size(); ++b) {
    const auto& bar = spec.bars[b];
    const std::string tag = "bar " + std::to_string(b);
    bool refs_ok = true;
    for (const JointRef* ref : {&bar.begin, &bar.end}) {
      if (ref->joint < 0 || ref->joint >= static_cast<int>(spec.shifts.size())) {
        fail(ErrorKind::IndexOutOfRange, tag + " references missing joint " + std::to_string(ref->joint));
        refs_ok = false;
      } else {
        referenced[ref->joint] = true;
      }
      if (ref->offset.size() != n) {
        fail(ErrorKind::InvalidInput, tag + " offset has wrong dimension");
        refs_ok = false;
      }
    }
    const auto& s = bar.section;
    if (s.EA < 0 || s.GI1 < 0 || s.EI2 < 0 || s.EI3 < 0) {
      fail(ErrorKind::InvalidInput, tag + " has a negative rigidity");
    }
    if (!(s.EA > 0 || s.GI1 > 0 || s.EI2 > 0 || s.EI3 > 0)) {
      fail(ErrorKind::InvalidInput, tag + " has no positive rigidity");
    }
    if (!refs_ok) continue;

    const Eigen::VectorXd span = spec.shifts[bar.end.joint] + lattice_point(spec.basis, bar.end.offset) -
                                 spec.shifts[bar.begin.joint] -
                                 lattice_point(spec.basis, bar.begin.offset);
    const double length = span.norm();
    if (!(length > 1e-12 * scale)) {
      fail(ErrorKind::ZeroLengthBar, tag + " has zero length");
      continue;
    }
    if (bar.expected_span) {
      if (bar.expected_span->size() != n ||
          (*bar.expected_span - span).norm() > 1e-12 * std::max(length, 1.0)) {
        fail(ErrorKind::GeometryMismatch,
             tag + " spanning vector from shifts/offsets differs from the stored geometry");
      }
    }
    if (bar.director2) {
      const Eigen::VectorXd& d2 = *bar.director2;
      const Eigen::VectorXd d1 = span / length;
      if (d2.size() != n || n < 2 || std::abs(d2.norm() - 1.0) > 1e-12 || std::abs(d1.dot(d2)) > 1e-12) {
        fail(ErrorKind::NonOrthonormalDirectors, tag + " director d2 is not a unit vector normal to the bar");
      } else if (n == 2 && d1(0) * d2(1) - d1(1) * d2(0) < 0.0) {
        fail(ErrorKind::NonOrthonormalDirectors, tag + " directors (d1, d2) are left-handed");
      }
    }
  }
  for (std::size_t a = 0; a < referenced.size(); ++a) {
    if (!referenced[a]) report.warnings.push_back("DanglingJointClass: joint " + std::to_string(a) + " has no bars");
  }
  return report;
}

Metamaterial validate(const LatticeSpec& spec) {
  ValidationReport report = check(spec);
  if (!report.ok()) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
      if (i) msg << "; ";
      msg << to_string(report.errors[i].kind) << ": " << report.errors[i].message;
    }
    throw Error(report.errors.front().kind, msg.str());
  }

  Metamaterial m;
  m.kinematics_ = spec.kinematics;
  m.name_ = spec.name;
  m.basis_ = spec.basis;
  m.volume_ = cell_volume(spec.basis);
  m.reciprocal_ = reciprocal_basis(spec.basis);
  m.warnings_ = report.warnings;

  const int n = spec.dimension();
  const Eigen::MatrixXd inv = spec.basis.inverse();
  std::vector<Eigen::VectorXi> reduction;
  for (const auto& b : spec.shifts) {
    const Eigen::VectorXd frac = inv * b;
    Eigen::VectorXi t(n);
    for (int i = 0; i < n; ++i) t(i) = static_cast<int>(std::floor(frac(i) + 1e-9));
    m.shifts_.push_back(b - lattice_point(spec.basis, t));
    reduction.push_back(t);
  }

  for (std::size_t idx = 0; idx < spec.bars.size(); ++idx) {
    const auto& in = spec.bars[idx];
    BarClass bar;
    bar.begin_joint = in.begin.joint;
    bar.end_joint = in.end.joint;
    bar.begin_offset = in.begin.offset + reduction[in.begin.joint];
    bar.end_offset = in.end.offset + reduction[in.end.joint];
    bar.section = in.section;
    bar.span = m.shifts_[bar.end_joint] + lattice_point(m.basis_, bar.end_offset) -
               m.shifts_[bar.begin_joint] - lattice_point(m.basis_, bar.begin_offset);
    bar.length = bar.span.norm();
    if (in.director2) {
      bar.directors = Eigen::MatrixXd(n, n);
      bar.directors.col(0) = bar.span / bar.length;
      bar.directors.col(1) = *in.director2;
      if (n == 3) {
        const Eigen::Vector3d d1 = bar.directors.col(0);
        const Eigen::Vector3d d2 = bar.directors.col(1);
        bar.directors.col(2) = d1.cross(d2);
      }
    } else {
      bar.directors = default_directors(spec.kinematics, bar.span);
    }
    if (!orthonormal(bar.directors, 1e-12)) {
      throw Error(ErrorKind::NonOrthonormalDirectors, "bar " + std::to_string(idx));
    }
    m.bars_.push_back(std::move(bar));
  }
  return m;
}

Eigen::VectorXd joint_position(const Metamaterial& m, const Eigen::VectorXi& cell, int alpha) {
  if (cell.size() != m.dimension()) throw Error(ErrorKind::InvalidInput, "cell index has wrong dimension");
  return m.shift(alpha) + lattice_point(m.basis(), cell);
}

Segment bar_endpoints(const Metamaterial& m, const Eigen::VectorXi& cell, int beta) {
  const BarClass& bar = m.bar(beta);
  return {joint_position(m, cell + bar.begin_offset, bar.begin_joint),
          joint_position(m, cell + bar.end_offset, bar.end_joint)};
}

BrillouinSamples brillouin_zone_sampler(const Metamaterial& m, int resolution) {
  if (resolution < 1) throw Error(ErrorKind::InvalidInput, "resolution must be >= 1");
  const int n = m.dimension();
  BrillouinSamples out;
  long total = 1;
  for (int i = 0; i < n; ++i) total *= resolution;
  const int half = resolution / 2;
  for (long idx = 0; idx < total; ++idx) {
    Eigen::VectorXd c(n);
    long rem = idx;
    bool zero = true;
    for (int j = 0; j < n; ++j) {
      const int i = static_cast<int>(rem % resolution) - half;
      rem /= resolution;
      c(j) = static_cast<double>(i) / resolution;
      zero = zero && i == 0;
    }
    if (zero) out.zero_index = static_cast<int>(out.wavevectors.size());
    out.wavevectors.push_back(m.reciprocal() * c);
    out.fractional.push_back(std::move(c));
  }
  return out;
}

Eigen::VectorXd fractional_dual(const Metamaterial& m, const Eigen::VectorXd& k) {
  // k . a_i = 2 pi c_i
  return m.basis().transpose() * k / (2.0 * std::numbers::pi);
}

}  // namespace metahomog
