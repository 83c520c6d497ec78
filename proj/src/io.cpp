#include "metahomog/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace metahomog::io {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

Eigen::VectorXd real_vector(const json& j, int size, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    bad(where + ": expected an array of " + std::to_string(size) + " numbers");
  }
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = number(j[i], where);
  return v;
}

Eigen::VectorXi int_vector(const json& j, int size, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    bad(where + ": expected an array of " + std::to_string(size) + " integers");
  }
  Eigen::VectorXi v(size);
  for (int i = 0; i < size; ++i) {
    if (!j[i].is_number_integer()) bad(where + ": expected an integer");
    v(i) = j[i].get<int>();
  }
  return v;
}

json to_array(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_array(const Eigen::VectorXi& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_rows(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) rows.push_back(to_array(Eigen::VectorXd(M.row(i).transpose())));
  return rows;
}

Kinematics parse_kinematics(const std::string& name, int dimension) {
  if (name == "axial" && dimension == 1) return Kinematics::Axial1D;
  if (name == "bending" && dimension == 1) return Kinematics::Bending1D;
  if (name == "planar" && dimension == 2) return Kinematics::Planar2D;
  if (name == "spatial" && dimension == 3) return Kinematics::Spatial3D;
  bad("kinematics '" + name + "' does not fit dimension " + std::to_string(dimension));
}

const char* kinematics_key(Kinematics kin) {
  switch (kin) {
    case Kinematics::Axial1D: return "axial";
    case Kinematics::Bending1D: return "bending";
    case Kinematics::Planar2D: return "planar";
    case Kinematics::Spatial3D: return "spatial";
  }
  return "";
}

}  // namespace

LatticeSpec lattice_from_json(const json& j) {
  if (!j.is_object()) bad("lattice definition must be a JSON object");
  const json& dim = field(j, "dimension", "lattice");
  if (!dim.is_number_integer() || dim.get<int>() < 1 || dim.get<int>() > 3) bad("dimension must be 1, 2 or 3");
  const int n = dim.get<int>();

  LatticeSpec spec;
  spec.name = j.value("name", std::string("custom"));
  const char* defaults[] = {"", "axial", "planar", "spatial"};
  spec.kinematics = parse_kinematics(j.value("kinematics", std::string(defaults[n])), n);

  const json& basis = field(j, "basis", "lattice");
  if (!basis.is_array() || static_cast<int>(basis.size()) != n) bad("basis must have " + std::to_string(n) + " rows");
  spec.basis.resize(n, n);
  for (int i = 0; i < n; ++i) spec.basis.col(i) = real_vector(basis[i], n, "basis row " + std::to_string(i));

  const json& joints = field(j, "joints", "lattice");
  if (!joints.is_array() || joints.empty()) bad("joints must be a nonempty array");
  for (size_t a = 0; a < joints.size(); ++a) {
    spec.shifts.push_back(real_vector(joints[a], n, "joint " + std::to_string(a)));
  }

  const json& bars = field(j, "bars", "lattice");
  if (!bars.is_array() || bars.empty()) bad("bars must be a nonempty array");
  for (size_t b = 0; b < bars.size(); ++b) {
    const std::string where = "bar " + std::to_string(b);
    const json& bar = bars[b];
    BarClassSpec spec_bar;
    for (auto [key, ref] : {std::pair{"begin", &spec_bar.begin}, std::pair{"end", &spec_bar.end}}) {
      const json& r = field(bar, key, where);
      const json& joint = field(r, "joint", where + "." + key);
      if (!joint.is_number_integer()) bad(where + "." + key + ".joint must be an integer");
      ref->joint = joint.get<int>();
      ref->offset = r.contains("offset") ? int_vector(r.at("offset"), n, where + "." + key + ".offset")
                                         : Eigen::VectorXi::Zero(n);
    }
    const json& sec = field(bar, "section", where);
    if (!sec.is_object()) bad(where + ".section must be an object");
    for (const auto& [key, value] : sec.items()) {
      const double v = number(value, where + ".section." + key);
      if (key == "EA") spec_bar.section.EA = v;
      else if (key == "GI1") spec_bar.section.GI1 = v;
      else if (key == "EI2") spec_bar.section.EI2 = v;
      else if (key == "EI3") spec_bar.section.EI3 = v;
      else if (key == "EI") spec_bar.section.EI2 = spec_bar.section.EI3 = v;
      else bad(where + ".section: unknown rigidity '" + key + "'");
    }
    if (bar.contains("directors")) spec_bar.director2 = real_vector(bar.at("directors"), n, where + ".directors");
    spec.bars.push_back(std::move(spec_bar));
  }
  return spec;
}

json lattice_to_json(const LatticeSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["dimension"] = spec.dimension();
  j["kinematics"] = kinematics_key(spec.kinematics);
  j["basis"] = to_rows(spec.basis.transpose());
  j["joints"] = json::array();
  for (const auto& s : spec.shifts) j["joints"].push_back(to_array(s));
  j["bars"] = json::array();
  for (const auto& b : spec.bars) {
    json bar;
    bar["begin"] = {{"joint", b.begin.joint}, {"offset", to_array(b.begin.offset)}};
    bar["end"] = {{"joint", b.end.joint}, {"offset", to_array(b.end.offset)}};
    bar["section"] = {{"EA", b.section.EA}, {"GI1", b.section.GI1}, {"EI2", b.section.EI2}, {"EI3", b.section.EI3}};
    if (b.director2) bar["directors"] = to_array(*b.director2);
    j["bars"].push_back(bar);
  }
  return j;
}

LatticeSpec read_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
  return lattice_from_json(j);
}

json describe(const Metamaterial& m) {
  json j;
  j["name"] = m.name();
  j["dimension"] = m.dimension();
  j["kinematics"] = to_string(m.kinematics());
  j["joint_classes"] = m.joint_count();
  j["bar_classes"] = m.bar_count();
  j["dofs_per_joint"] = m.dofs_per_joint();
  j["cell_volume"] = m.cell_volume();
  j["basis"] = to_rows(m.basis().transpose());
  j["reciprocal"] = to_rows(m.reciprocal().transpose());
  j["joints"] = json::array();
  for (int a = 0; a < m.joint_count(); ++a) j["joints"].push_back(to_array(m.shift(a)));
  j["bars"] = json::array();
  for (const auto& b : m.bars()) {
    json bar;
    bar["begin"] = {{"joint", b.begin_joint}, {"offset", to_array(b.begin_offset)}};
    bar["end"] = {{"joint", b.end_joint}, {"offset", to_array(b.end_offset)}};
    bar["span"] = to_array(b.span);
    bar["length"] = b.length;
    bar["directors"] = to_rows(b.directors.transpose());
    bar["section"] = {{"EA", b.section.EA}, {"GI1", b.section.GI1}, {"EI2", b.section.EI2}, {"EI3", b.section.EI3}};
    j["bars"].push_back(bar);
  }
  j["warnings"] = m.warnings();
  return j;
}

Parameters parse_parameters(const std::string& text) {
  Parameters p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) bad("parameter '" + item + "' is not of the form key=value");
    const std::string value = item.substr(eq + 1);
    const std::vector<double> v = parse_numbers(value);
    if (v.size() != 1) bad("parameter '" + item + "' needs one value");
    p[item.substr(0, eq)] = v.front();
  }
  return p;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  auto to_double = [](const std::string& s) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      bad("'" + s + "' is not a number");
    }
    if (used != s.size()) bad("'" + s + "' is not a number");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) bad("empty entry in '" + text + "'");
    const auto slash = item.find('/');
    if (slash == std::string::npos) {
      out.push_back(to_double(item));
    } else {
      const double den = to_double(item.substr(slash + 1));
      if (den == 0.0) bad("division by zero in '" + item + "'");
      out.push_back(to_double(item.substr(0, slash)) / den);
    }
  }
  return out;
}

std::vector<Eigen::VectorXd> parse_kpath(const std::string& text, int dimension) {
  std::vector<Eigen::VectorXd> points;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const std::vector<double> v = parse_numbers(item);
    if (static_cast<int>(v.size()) != dimension) {
      bad("k-path point '" + item + "' needs " + std::to_string(dimension) + " coordinates");
    }
    points.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), dimension));
  }
  if (points.size() < 2) bad("k-path needs at least two points");
  return points;
}

KPath sample_kpath(const Metamaterial& m, const std::vector<Eigen::VectorXd>& fractional_points, int samples) {
  if (samples < 2) bad("k-path resolution must be at least 2");
  std::vector<Eigen::VectorXd> corners;
  std::vector<double> arc = {0.0};
  for (const auto& c : fractional_points) corners.push_back(m.reciprocal() * c);
  for (size_t i = 1; i < corners.size(); ++i) arc.push_back(arc.back() + (corners[i] - corners[i - 1]).norm());
  if (!(arc.back() > 0.0)) bad("k-path has zero length");

  KPath path;
  size_t seg = 1;
  for (int s = 0; s < samples; ++s) {
    const double t = arc.back() * s / (samples - 1);
    while (seg + 1 < corners.size() && t > arc[seg]) ++seg;
    const double len = arc[seg] - arc[seg - 1];
    const double w = len > 0 ? std::clamp((t - arc[seg - 1]) / len, 0.0, 1.0) : 0.0;
    path.parameter.push_back(t);
    path.wavevectors.push_back((1 - w) * corners[seg - 1] + w * corners[seg]);
  }
  return path;
}

LoadField load_from_json(const json& j, const Metamaterial& m) {
  if (!j.is_array() || j.empty()) bad("load must be a nonempty array of modes");
  LoadField f;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string where = "load mode " + std::to_string(i);
    const Eigen::VectorXi index = int_vector(field(j[i], "index", where), m.dimension(), where + ".index");
    const json& a = field(j[i], "amplitude", where);
    if (!a.is_array() || static_cast<int>(a.size()) != m.dofs_per_joint()) {
      bad(where + ".amplitude needs " + std::to_string(m.dofs_per_joint()) + " entries");
    }
    Eigen::VectorXcd amp(m.dofs_per_joint());
    for (int c = 0; c < amp.size(); ++c) {
      if (a[c].is_array()) {
        const Eigen::VectorXd re_im = real_vector(a[c], 2, where + ".amplitude");
        amp(c) = {re_im(0), re_im(1)};
      } else {
        amp(c) = number(a[c], where + ".amplitude");
      }
    }
    f.add_mode(index, amp);
  }
  return f;
}

std::string dispersion_csv(const KPath& path, const std::vector<Eigen::VectorXd>& branches) {
  std::ostringstream out;
  const int n = path.wavevectors.empty() ? 0 : static_cast<int>(path.wavevectors.front().size());
  const int b = branches.empty() ? 0 : static_cast<int>(branches.front().size());
  out << "s";
  for (int i = 0; i < n; ++i) out << ",k" << i + 1;
  for (int i = 0; i < b; ++i) out << ",lambda" << i + 1;
  out << "\n";
  for (size_t r = 0; r < path.wavevectors.size(); ++r) {
    out << format_number(path.parameter[r]);
    for (int i = 0; i < n; ++i) out << "," << format_number(path.wavevectors[r](i));
    for (int i = 0; i < b; ++i) out << "," << format_number(branches[r](i));
    out << "\n";
  }
  return out.str();
}

json moduli_json(const EffectiveModuli& moduli, const std::string& lattice, const Parameters& params) {
  auto numbers = [](const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
      json row = json::array();
      for (int c = 0; c < M.cols(); ++c) row.push_back(format_number(M(i, c)));
      rows.push_back(row);
    }
    return rows;
  };
  json j;
  j["lattice"] = lattice;
  j["parameters"] = json::object();
  for (const auto& [key, value] : params) j["parameters"][key] = format_number(value);
  j["dimension"] = moduli.dimension;
  j["C"] = numbers(moduli.C);
  j["H"] = numbers(moduli.H);
  j["G"] = numbers(moduli.G);
  j["residual"] = format_number(moduli.residual);
  j["condition"] = format_number(moduli.condition);
  j["symmetry"] = to_string(moduli.symmetry);
  return j;
}

std::string moduli_csv(const EffectiveModuli& moduli) {
  std::ostringstream out;
  const auto& C = moduli.C;
  for (int i = 0; i < C.rows(); ++i) {
    for (int c = 0; c < C.cols(); ++c) out << (c ? "," : "") << format_number(C(i, c));
    out << "\n";
  }
  return out.str();
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::ostringstream out;
  const bool slopes = table.rows.size() > 1;
  out << "eps,P,discrete,continuum,gap" << (slopes ? ",slope" : "") << "\n";
  for (const auto& r : table.rows) {
    out << format_number(r.eps) << "," << r.period << "," << format_number(r.discrete) << ","
        << format_number(r.continuum) << "," << format_number(r.gap);
    if (slopes) out << "," << (std::isnan(r.slope) ? std::string() : format_number(r.slope));
    out << "\n";
  }
  return out.str();
}

std::string displacement_csv(const TorusMetastructure& t, const LatticeFunction& u) {
  const Metamaterial& m = *t.material;
  const int n = m.dimension();
  const int du = m.dofs_per_joint();
  const int nv = deflection_dofs(m.kinematics());
  std::ostringstream out;
  out << "cell,alpha";
  for (int i = 0; i < n; ++i) out << ",x" << i + 1;
  for (int i = 0; i < nv; ++i) out << ",v" << i + 1;
  for (int i = nv; i < du; ++i) out << ",theta" << i - nv + 1;
  out << "\n";
  for (int cell = 0; cell < t.cell_count(); ++cell) {
    for (int a = 0; a < m.joint_count(); ++a) {
      out << cell << "," << a;
      const Eigen::VectorXd x = t.position(cell, a);
      for (int i = 0; i < n; ++i) out << "," << format_number(x(i));
      for (int c = 0; c < du; ++c) out << "," << format_number(u.values(a * du + c, cell));
      out << "\n";
    }
  }
  return out.str();
}

std::string oracle_checks_csv(const std::vector<OracleCheck>& checks) {
  std::ostringstream out;
  out << "check,relative_error,tolerance,status\n";
  for (const auto& c : checks) {
    out << c.name << "," << format_number(c.error) << "," << format_number(c.tolerance) << ","
        << (c.passed() ? "pass" : "FAIL") << "\n";
  }
  return out.str();
}

}  // namespace metahomog::io
