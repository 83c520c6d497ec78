#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metahomog/fourier.hpp"
#include "metahomog/lattice_model.hpp"

namespace metahomog {

struct LimitConfig {
  double eps0_fraction = 0.1;  // eps0 |k| as a fraction of the zone radius
  int levels = 6;
  int max_levels = 12;         // refinement cap when the residual is too large
  double tol_extrap = 1e-8;
  double route_tol = 1e-8;     // N = 1: direct limit vs compliance limit
  double singular_tol = 1e-12; // eigenvalue ratio below which a matrix counts as singular
  double tol_fit = 1e-6;
  double tol_symmetry = 1e-8;
  double max_condition = 1e10;
  double fd_step_fraction = 1e-2;  // higher-order expansion: largest interpolation step
  int fd_levels = 4;             // interpolation nodes
  int jobs = 1;
};

/// (N d_u) x d_u stack of N copies of (1/N) I.
Eigen::MatrixXd localization_operator(const Metamaterial& m);

/// Decreasing geometric scale sequence eps_j = eps0 2^-j used for k.
std::vector<double> limit_scales(const Metamaterial& m, const Eigen::VectorXd& k, const LimitConfig& cfg);

/// Entrywise Richardson extrapolation to h -> 0 of samples taken at
/// h_j = h0 ratio^-j, assuming an expansion in powers h^(step m).
template <class Matrix>
Matrix richardson(const std::vector<Matrix>& samples, double ratio, int step, double* residual = nullptr) {
  using Real = typename Eigen::NumTraits<typename Matrix::Scalar>::Real;
  // prev[i] holds T_{i+m-1, m-1}; the diagonal T_{m,m} is cur.front()
  std::vector<Matrix> prev = samples;
  const int n = static_cast<int>(samples.size());
  Matrix best = prev.front();
  Matrix before = prev.front();
  for (int m = 1; m < n; ++m) {
    std::vector<Matrix> cur;
    const Real f = static_cast<Real>(std::pow(ratio, step * m));
    for (int j = m; j < n; ++j) {
      cur.push_back(((f * prev[j - m + 1] - prev[j - m]) / (f - Real(1))).eval());
    }
    before = best;
    best = cur.front();
    prev = std::move(cur);
  }
  if (residual) {
    const double scale = static_cast<double>(best.norm());
    const double diff = static_cast<double>((best - before).norm());
    *residual = n < 2 ? 0.0 : (scale > 0 ? diff / scale : diff);
  }
  return best;
}

struct ContinuumDynamicalMatrix {
  Eigen::VectorXd k;
  Eigen::MatrixXcd D0;
  std::optional<Eigen::MatrixXcd> compliance;  // lim L^T D_eps^-1 L when finite
  std::optional<Eigen::MatrixXcd> direct;      // lim D_eps, N = 1 only
  std::vector<double> epsilons;
  double residual = 0.0;
  double route_mismatch = 0.0;
};

/// D0(k) = (lim L^T D_eps(k)^-1 L)^-1 by Richardson extrapolation, adding
/// levels up to max_levels while the residual exceeds tol_extrap. For N = 1
/// the pointwise limit of D_eps is also formed; it is the result when the
/// compliance limit does not exist.
ContinuumDynamicalMatrix continuum_dynamical_matrix(const Metamaterial& m, const Eigen::VectorXd& k,
                                                    const LimitConfig& cfg = {});

struct EquicoercivitySample {
  Eigen::VectorXd k;
  double eps = 0.0;
  double value = 0.0;
};

struct EquicoercivityReport {
  double constant = 0.0;
  std::vector<EquicoercivitySample> samples;
  bool passed() const { return constant > 0.0; }
};

/// Smallest generalized eigenvalue of D_eps(k) against diag(|k|^2 I, I) over
/// all (k, eps) pairs; pairs with eps k outside the zone are skipped.
EquicoercivityReport check_equicoercivity(const Metamaterial& m, const std::vector<Eigen::VectorXd>& ks,
                                          const std::vector<double>& epss);

/// Complex probe vectors e_a, e_a + e_b, e_a + i e_b.
std::vector<Eigen::VectorXcd> probe_vectors(int size);

/// max |D0(lk) z.z* - D0(k)(l xi; eta).(l xi; eta)*| over the probe set,
/// relative to the largest left-hand side.
double check_homogeneity(const Metamaterial& m, const Eigen::VectorXd& k, double lambda,
                         const LimitConfig& cfg = {});

enum class SymmetryClass { None, Cubic, Isotropic };
const char* to_string(SymmetryClass s) noexcept;

struct EffectiveModuli {
  int dimension = 0;
  Eigen::MatrixXd C;  // Voigt, engineering shears
  Eigen::MatrixXd H;  // rotation mismatch coupling
  Eigen::MatrixXd G;  // strain-rotation cross block
  double residual = 0.0;
  double condition = 0.0;
  SymmetryClass symmetry = SymmetryClass::None;
};

int voigt_size(int dimension);
int rotation_size(int dimension);

/// Unit-sphere probe directions: 8 angles in 2D, axes plus face and body
/// diagonals in 3D, +1 in 1D. `alternate` picks a disjoint design.
std::vector<Eigen::VectorXd> probe_directions(int dimension, bool alternate = false);

/// Least-squares fit of 2W = C es.es* + H r.r* + 2 Re(G r.es*) to
/// z^H D0(k) z with beta = -i xi k^T, r = eta - *skw(beta).
EffectiveModuli extract_effective_moduli(const Metamaterial& m, const LimitConfig& cfg = {},
                                         const std::vector<Eigen::VectorXd>& directions = {});

/// Classifies C by rotating it as a fourth-order tensor.
SymmetryClass classify_symmetry(const Eigen::MatrixXd& C, int dimension, double tol);

/// Voigt strain (engineering shears) of sym(beta) and the rotation mismatch
/// theta - *skw(beta).
Eigen::VectorXcd voigt_strain(const Eigen::MatrixXcd& beta);
Eigen::VectorXcd rotation_mismatch(const Eigen::MatrixXcd& beta, const Eigen::VectorXcd& theta);

/// W0 = 1/2 C es.es + 1/2 H r.r + G es.r for real arguments.
double continuum_energy_density(const EffectiveModuli& moduli, const Eigen::MatrixXd& beta,
                                const Eigen::VectorXd& theta);

/// D0(k) reconstructed from fitted moduli.
Eigen::MatrixXcd continuum_matrix_from_moduli(const EffectiveModuli& moduli, const Eigen::VectorXd& k);

/// (sum_{m <= order} M^(m)(0) eps^m / m!)^-1 with M(eps) = D_eps(k)^-1,
/// Taylor coefficients from polynomial interpolation of M(+-h) in h^2. N = 1.
Eigen::MatrixXcd higher_order_matrix(const Metamaterial& m, const Eigen::VectorXd& k, double eps, int order,
                                     const LimitConfig& cfg = {});

/// Taylor coefficients M^(m)(0) / m!, m = 0..order, used by
/// higher_order_matrix.
std::vector<Eigen::MatrixXcd> compliance_series(const Metamaterial& m, const Eigen::VectorXd& k, int order,
                                                const LimitConfig& cfg = {});

}  // namespace metahomog
