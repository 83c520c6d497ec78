#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "metahomog/catalog.hpp"
#include "metahomog/continuum_limit.hpp"
#include "metahomog/fourier.hpp"
#include "metahomog/lattice_model.hpp"
#include "metahomog/metastructure.hpp"

namespace metahomog::io {

using json = nlohmann::json;

/// Fixed "%.12e" rendering used by every report.
std::string format_number(double x);

// Lattice definitions -------------------------------------------------------
//
// {
//   "name": "...", "dimension": 2, "kinematics": "planar",   (optional)
//   "basis": [[a1x, a1y], [a2x, a2y]],                       (rows are a_i)
//   "joints": [[s1x, s1y], ...],
//   "bars": [{"begin": {"joint": 0, "offset": [0, 0]},
//             "end":   {"joint": 1, "offset": [0, 0]},
//             "section": {"EA": 1, "GI1": 0, "EI2": 0, "EI3": 0.01},
//             "directors": [d2x, d2y]}]                       (optional)
// }
//
// "EI" is accepted as shorthand for EI2 = EI3. Lengths are derived.

/// Throws InvalidInput naming the offending field.
LatticeSpec lattice_from_json(const json& j);
json lattice_to_json(const LatticeSpec& spec);
LatticeSpec read_lattice_file(const std::string& path);

json describe(const Metamaterial& m);

// Argument parsing -----------------------------------------------------------

/// "EA=1,EI=0.01" -> {EA: 1, EI: 0.01}.
Parameters parse_parameters(const std::string& text);

/// Comma separated list; each entry a number or a fraction "1/8".
std::vector<double> parse_numbers(const std::string& text);

/// Path through the dual cell: points separated by ';', fractional dual
/// coordinates separated by ',', e.g. "0,0;0.5,0;0.5,0.5".
std::vector<Eigen::VectorXd> parse_kpath(const std::string& text, int dimension);

struct KPath {
  std::vector<double> parameter;  // arc length in k
  std::vector<Eigen::VectorXd> wavevectors;
};

/// `samples` points spread evenly in arc length over the polyline, both ends
/// included.
KPath sample_kpath(const Metamaterial& m, const std::vector<Eigen::VectorXd>& fractional_points, int samples);

/// [{"index": [1, 0], "amplitude": [1, 0.5, [0, 1]]}, ...]; complex entries
/// are [re, im] pairs.
LoadField load_from_json(const json& j, const Metamaterial& m);

// Reports -------------------------------------------------------------------

std::string dispersion_csv(const KPath& path, const std::vector<Eigen::VectorXd>& branches);
json moduli_json(const EffectiveModuli& moduli, const std::string& lattice, const Parameters& params);
std::string moduli_csv(const EffectiveModuli& moduli);
std::string convergence_csv(const ConvergenceTable& table);
std::string displacement_csv(const TorusMetastructure& t, const LatticeFunction& u);
std::string oracle_checks_csv(const std::vector<OracleCheck>& checks);

}  // namespace metahomog::io
