#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "metahomog/continuum_limit.hpp"
#include "metahomog/lattice_model.hpp"

namespace metahomog {

using Parameters = std::map<std::string, double>;

LatticeSpec chain_1d(double EA, double L);
LatticeSpec beam_chain_1d(double EI, double L);
LatticeSpec two_bar_chain(double EA1, double EA2, double L1, double L2);
LatticeSpec honeycomb(double EA, double EI, double L);
/// Face-centred cubic beam lattice, a_i = (L/sqrt 2)(0,1,1) and cyclic, one
/// joint per cell, six bar classes along the primitive vectors and their
/// differences (bar length |a_i| = L).
LatticeSpec octet(double EA, double GI1, double EI, double L);

struct CatalogEntry {
  std::string name;
  Parameters defaults;
  std::string summary;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Defaults of `name` overridden by `params`; unknown keys are rejected.
Parameters resolve_parameters(const std::string& name, const Parameters& params);

/// Builds the named entry. Throws InvalidInput for unknown names or keys.
LatticeSpec catalog_lattice(const std::string& name, const Parameters& params = {});

// Closed forms -------------------------------------------------------------

Eigen::MatrixXcd chain_dynamical_matrix(double EA, double L, double k);
Eigen::MatrixXcd beam_chain_dynamical_matrix(double EI, double L, double k);
Eigen::MatrixXcd two_bar_dynamical_matrix(double EA1, double EA2, double L1, double L2, double k);

Eigen::MatrixXcd chain_continuum_matrix(double EA, double k);
Eigen::MatrixXcd beam_chain_continuum_matrix(double EI, double L, double k);
Eigen::MatrixXcd two_bar_continuum_matrix(double EA1, double EA2, double L1, double L2, double k);

EffectiveModuli honeycomb_moduli(double EA, double EI, double L);
EffectiveModuli octet_moduli(double EA, double EI, double L);

/// Closed-form moduli of a named entry. SingularOracle when the formulas
/// break down (honeycomb without bending stiffness); InvalidInput when the
/// entry has no moduli oracle.
EffectiveModuli oracle_moduli(const std::string& name, const Parameters& params = {});

// Oracle suite ---------------------------------------------------------------

struct OracleCheck {
  std::string name;
  double error = 0.0;  // relative
  double tolerance = 0.0;
  bool passed() const { return error <= tolerance; }
};

/// Every closed form of the catalog against the assembled or extrapolated
/// values at default parameters. `perturb` names a check whose oracle is
/// scaled by 1 + 1e-3 to exercise the failure path.
std::vector<OracleCheck> run_oracle_checks(const LimitConfig& cfg = {}, const std::string& perturb = "");
std::vector<std::string> oracle_check_names();

}  // namespace metahomog
