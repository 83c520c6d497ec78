// lattice_homog: command-line front end for the homogenization library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "metahomog/catalog.hpp"
#include "metahomog/io.hpp"
#include "metahomog/metastructure.hpp"
#include "metahomog/parallel.hpp"

using namespace metahomog;
using io::json;

namespace {

struct JobConfig {
  std::string lattice;
  std::string params;
  std::string input;
  std::string out;
  std::string format = "csv";
  int jobs = 0;
  double tol_extrap = 1e-8;
  double tol_fit = 1e-6;
  std::string kpath;
  int resolution = 50;
  std::string epsilons = "1/4,1/8,1/16,1/32";
  std::string load;
  std::string displacement;
  std::string perturb;
};

struct Lattice {
  Metamaterial material;
  std::string name;
  Parameters params;
};

void add_source_options(CLI::App* cmd, JobConfig& c) {
  auto* lattice = cmd->add_option("--lattice", c.lattice, "catalog entry name");
  auto* input = cmd->add_option("--input", c.input, "lattice definition JSON file");
  lattice->excludes(input);
  cmd->add_option("--param", c.params, "parameter overrides, k=v,...");
}

void add_output_options(CLI::App* cmd, JobConfig& c) {
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--jobs", c.jobs, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
}

void add_tolerance_options(CLI::App* cmd, JobConfig& c) {
  cmd->add_option("--tol-extrap", c.tol_extrap, "extrapolation tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-fit", c.tol_fit, "moduli fit tolerance")->check(CLI::PositiveNumber);
}

Lattice load_lattice(const JobConfig& c) {
  if (c.lattice.empty() == c.input.empty()) {
    throw Error(ErrorKind::InvalidInput, "exactly one of --lattice or --input is required");
  }
  Parameters params = io::parse_parameters(c.params);
  if (!c.lattice.empty()) {
    params = resolve_parameters(c.lattice, params);
    return {validate(catalog_lattice(c.lattice, params)), c.lattice, params};
  }
  if (!params.empty()) throw Error(ErrorKind::InvalidInput, "--param applies to catalog lattices only");
  const LatticeSpec spec = io::read_lattice_file(c.input);
  return {validate(spec), spec.name, {}};
}

int job_count(const JobConfig& c) {
  if (const char* env = std::getenv("LATTICE_HOMOG_JOBS")) {
    const std::vector<double> v = io::parse_numbers(env);
    if (v.size() != 1 || v[0] < 1 || v[0] != static_cast<int>(v[0])) {
      throw Error(ErrorKind::InvalidInput, "LATTICE_HOMOG_JOBS must be a positive integer");
    }
    return static_cast<int>(v[0]);
  }
  return c.jobs > 0 ? c.jobs : available_jobs();
}

LimitConfig limit_config(const JobConfig& c) {
  LimitConfig cfg;
  cfg.tol_extrap = c.tol_extrap;
  cfg.tol_fit = c.tol_fit;
  cfg.jobs = job_count(c);
  return cfg;
}

void emit(const JobConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + c.out + "'");
  f << text;
}

std::string default_kpath(int dimension) {
  if (dimension == 1) return "0;0.5";
  if (dimension == 2) return "0,0;0.5,0;0.5,0.5;0,0";
  return "0,0,0;0.5,0,0;0.5,0.5,0;0.5,0.5,0.5;0,0,0";
}

int cmd_describe(const JobConfig& c) {
  const Lattice l = load_lattice(c);
  json j = io::describe(l.material);
  if (!l.params.empty()) j["parameters"] = l.params;
  emit(c, j.dump(2) + "\n");
  return 0;
}

int cmd_dispersion(const JobConfig& c) {
  const Lattice l = load_lattice(c);
  const int n = l.material.dimension();
  const auto corners = io::parse_kpath(c.kpath.empty() ? default_kpath(n) : c.kpath, n);
  const io::KPath path = io::sample_kpath(l.material, corners, c.resolution);
  const auto branches = dispersion(l.material, path.wavevectors, job_count(c));
  if (c.format == "json") {
    json j = json::array();
    for (size_t i = 0; i < branches.size(); ++i) {
      json row;
      row["s"] = io::format_number(path.parameter[i]);
      row["k"] = json::array();
      for (int d = 0; d < n; ++d) row["k"].push_back(io::format_number(path.wavevectors[i](d)));
      row["eigenvalues"] = json::array();
      for (int b = 0; b < branches[i].size(); ++b) row["eigenvalues"].push_back(io::format_number(branches[i](b)));
      j.push_back(row);
    }
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, io::dispersion_csv(path, branches));
  }
  return 0;
}

int cmd_homogenize(const JobConfig& c) {
  const Lattice l = load_lattice(c);
  const EffectiveModuli moduli = extract_effective_moduli(l.material, limit_config(c));
  if (c.format == "json") {
    emit(c, io::moduli_json(moduli, l.name, l.params).dump(2) + "\n");
  } else {
    emit(c, io::moduli_csv(moduli));
  }
  return 0;
}

int cmd_converge(const JobConfig& c) {
  const Lattice l = load_lattice(c);
  LoadField load = default_load(l.material);
  if (!c.load.empty()) {
    std::ifstream f(c.load);
    json j;
    try {
      j = f ? json::parse(f) : json::parse(c.load);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::InvalidInput, std::string("load is neither a JSON file nor inline JSON: ") + e.what());
    }
    load = io::load_from_json(j, l.material);
  }
  const std::vector<double> epss = io::parse_numbers(c.epsilons);
  if (epss.empty()) throw Error(ErrorKind::InvalidInput, "--epsilons needs at least one value");
  const ConvergenceTable table = convergence_study(l.material, load, epss, limit_config(c));
  if (c.format == "json") {
    json j;
    j["rows"] = json::array();
    for (const auto& r : table.rows) {
      json row = {{"eps", io::format_number(r.eps)},           {"P", r.period},
                  {"discrete", io::format_number(r.discrete)}, {"continuum", io::format_number(r.continuum)},
                  {"gap", io::format_number(r.gap)}};
      if (!std::isnan(r.slope)) row["slope"] = io::format_number(r.slope);
      j["rows"].push_back(row);
    }
    if (!std::isnan(table.fitted_slope)) j["fitted_slope"] = io::format_number(table.fitted_slope);
    j["monotone"] = table.monotone;
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, io::convergence_csv(table));
  }
  if (!c.displacement.empty()) {
    const TorusMetastructure t = make_torus(l.material, table.rows.back().period);
    const TorusSolution sol = solve_equilibrium_torus(t, load);
    std::ofstream f(c.displacement);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + c.displacement + "'");
    f << io::displacement_csv(t, sol.displacement);
  }
  return 0;
}

int cmd_validate(const JobConfig& c) {
  const auto checks = run_oracle_checks(limit_config(c), c.perturb);
  int failed = 0;
  for (const auto& check : checks) failed += check.passed() ? 0 : 1;
  if (c.format == "json") {
    json j;
    j["checks"] = json::array();
    for (const auto& check : checks) {
      j["checks"].push_back({{"name", check.name},
                             {"relative_error", io::format_number(check.error)},
                             {"tolerance", io::format_number(check.tolerance)},
                             {"passed", check.passed()}});
    }
    j["failed"] = failed;
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, io::oracle_checks_csv(checks));
  }
  for (const auto& check : checks) {
    if (!check.passed()) std::cerr << "check failed: " << check.name << "\n";
  }
  return failed == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenization of periodic beam-lattice metamaterials"};
  app.require_subcommand(1);
  JobConfig c;

  auto* describe = app.add_subcommand("describe", "summarize a lattice as JSON");
  add_source_options(describe, c);
  describe->add_option("--out", c.out, "output file (default stdout)");

  auto* disp = app.add_subcommand("dispersion", "eigenvalue branches of D(k) along a k-path");
  add_source_options(disp, c);
  add_output_options(disp, c);
  disp->add_option("--kpath", c.kpath, "corners in fractional dual coordinates, e.g. \"0,0;0.5,0\"");
  disp->add_option("--resolution", c.resolution, "number of samples along the path")->check(CLI::Range(2, 1000000));

  auto* homog = app.add_subcommand("homogenize", "effective micropolar moduli");
  add_source_options(homog, c);
  add_output_options(homog, c);
  add_tolerance_options(homog, c);

  auto* conv = app.add_subcommand("converge", "discrete-to-continuum energy convergence on tori");
  add_source_options(conv, c);
  add_output_options(conv, c);
  add_tolerance_options(conv, c);
  conv->add_option("--epsilons", c.epsilons, "scales, reciprocals of integers, e.g. 1/4,1/8");
  conv->add_option("--load", c.load, "load modes as a JSON file or inline JSON");
  conv->add_option("--displacement", c.displacement, "write the displacement at the smallest scale to this CSV");

  auto* val = app.add_subcommand("validate", "run every catalog oracle check");
  add_output_options(val, c);
  add_tolerance_options(val, c);
  val->add_option("--inject-mismatch", c.perturb, "perturb the named oracle (debugging)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*describe) return cmd_describe(c);
    if (*disp) return cmd_dispersion(c);
    if (*homog) return cmd_homogenize(c);
    if (*conv) return cmd_converge(c);
    return cmd_validate(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numerical(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
