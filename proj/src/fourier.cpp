#include "metahomog/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include "metahomog/parallel.hpp"

namespace metahomog {

LatticeFunction::LatticeFunction(int period_, int dimension_, int joints_, int components_)
    : period(period_), dimension(dimension_), joints(joints_), components(components_) {
  values = Eigen::MatrixXd::Zero(joints * components, torus_cell_count(period, dimension));
}

int torus_cell_count(int period, int dimension) {
  if (period < 1) throw Error(ErrorKind::InvalidInput, "period must be at least 1");
  int n = 1;
  for (int j = 0; j < dimension; ++j) n *= period;
  return n;
}

Eigen::VectorXi torus_cell(int index, int period, int dimension) {
  Eigen::VectorXi l(dimension);
  for (int j = 0; j < dimension; ++j) {
    l(j) = index % period;
    index /= period;
  }
  return l;
}

int torus_index(const Eigen::VectorXi& cell, int period) {
  int index = 0;
  for (int j = static_cast<int>(cell.size()) - 1; j >= 0; --j) {
    const int c = ((cell(j) % period) + period) % period;
    index = index * period + c;
  }
  return index;
}

int centered_frequency(int c, int period) {
  c = ((c % period) + period) % period;
  return c >= (period + 1) / 2 ? c - period : c;
}

Eigen::VectorXd dual_wavevector(const Metamaterial& m, int period, int index) {
  const Eigen::VectorXi c = torus_cell(index, period, m.dimension());
  Eigen::VectorXd k = Eigen::VectorXd::Zero(m.dimension());
  for (int j = 0; j < m.dimension(); ++j) {
    k += (static_cast<double>(centered_frequency(c(j), period)) / period) * m.reciprocal().col(j);
  }
  return k;
}

namespace {

// In-place transform of every row along each torus axis.
void transform_axes(Eigen::MatrixXcd& values, int period, int dimension, bool inverse) {
  if (period == 1) return;  // identity; the FFT backend does not handle length one
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(period), out(period);
  int stride = 1;
  const int cells = static_cast<int>(values.cols());
  for (int axis = 0; axis < dimension; ++axis) {
    for (int r = 0; r < values.rows(); ++r) {
      for (int base = 0; base < cells; ++base) {
        if ((base / stride) % period != 0) continue;
        for (int i = 0; i < period; ++i) line[i] = values(r, base + i * stride);
        if (inverse) {
          fft.inv(out, line);
        } else {
          fft.fwd(out, line);
        }
        for (int i = 0; i < period; ++i) values(r, base + i * stride) = out[i];
      }
    }
    stride *= period;
  }
}

void check_shape(const Metamaterial& m, int dimension, int joints) {
  if (dimension != m.dimension() || joints != m.joint_count()) {
    throw Error(ErrorKind::InvalidInput, "lattice function does not match the metamaterial");
  }
}

}  // namespace

SpectralFunction dft_forward(const Metamaterial& m, const LatticeFunction& f) {
  check_shape(m, f.dimension, f.joints);
  SpectralFunction s;
  s.period = f.period;
  s.dimension = f.dimension;
  s.joints = f.joints;
  s.components = f.components;
  s.values = f.values.cast<std::complex<double>>();
  transform_axes(s.values, f.period, f.dimension, false);
  const double V = m.cell_volume();
  for (int col = 0; col < s.cell_count(); ++col) {
    const Eigen::VectorXd k = dual_wavevector(m, f.period, col);
    for (int a = 0; a < f.joints; ++a) {
      const std::complex<double> w = V * std::polar(1.0, -k.dot(m.shift(a)));
      s.values.col(col).segment(a * f.components, f.components) *= w;
    }
  }
  return s;
}

LatticeFunction dft_inverse(const Metamaterial& m, const SpectralFunction& s) {
  check_shape(m, s.dimension, s.joints);
  Eigen::MatrixXcd values = s.values;
  const double V = m.cell_volume();
  for (int col = 0; col < s.cell_count(); ++col) {
    const Eigen::VectorXd k = dual_wavevector(m, s.period, col);
    for (int a = 0; a < s.joints; ++a) {
      const std::complex<double> w = std::polar(1.0, k.dot(m.shift(a))) / V;
      values.col(col).segment(a * s.components, s.components) *= w;
    }
  }
  transform_axes(values, s.period, s.dimension, true);
  LatticeFunction f(s.period, s.dimension, s.joints, s.components);
  f.values = values.real();
  return f;
}

bool inside_brillouin_zone(const Metamaterial& m, const Eigen::VectorXd& k, double slack) {
  const Eigen::VectorXd c = fractional_dual(m, k);
  return (c.array().abs() <= 0.5 + slack).all();
}

std::vector<Eigen::VectorXd> dispersion(const Metamaterial& m, const std::vector<Eigen::VectorXd>& kpath,
                                        int jobs) {
  std::vector<Eigen::VectorXd> out(kpath.size());
  parallel_for(static_cast<int>(kpath.size()), jobs, [&](int i) {
    const Eigen::MatrixXcd D = dynamical_matrix<double>(m, kpath[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
    out[i] = es.eigenvalues();
  });
  return out;
}

}  // namespace metahomog
