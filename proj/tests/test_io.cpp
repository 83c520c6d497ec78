#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "metahomog/io.hpp"
#include "oracles.hpp"

using namespace metahomog;
using io::json;

TEST_SUITE("io") {
  TEST_CASE("fixed number format") {
    CHECK(io::format_number(1.0) == "1.000000000000e+00");
    CHECK(io::format_number(-0.000123) == "-1.230000000000e-04");
  }

  TEST_CASE("lattice JSON round trip") {
    for (const auto& e : catalog_entries()) {
      const LatticeSpec spec = catalog_lattice(e.name);
      const LatticeSpec back = io::lattice_from_json(json::parse(io::lattice_to_json(spec).dump()));
      const Metamaterial a = validate(spec), b = validate(back);
      CHECK(b.kinematics() == a.kinematics());
      CHECK((b.basis() - a.basis()).norm() == 0.0);
      REQUIRE(b.bar_count() == a.bar_count());
      for (int i = 0; i < a.bar_count(); ++i) {
        CHECK((b.bar(i).span - a.bar(i).span).norm() == 0.0);
        CHECK((b.bar(i).directors - a.bar(i).directors).norm() == 0.0);
      }
    }
  }

  TEST_CASE("lattice JSON with rows as basis vectors and the EI shorthand") {
    const json j = json::parse(R"({
      "name": "square",
      "dimension": 2,
      "basis": [[2, 0], [0, 1]],
      "joints": [[0, 0]],
      "bars": [
        {"begin": {"joint": 0}, "end": {"joint": 0, "offset": [1, 0]}, "section": {"EA": 1, "EI": 0.1}},
        {"begin": {"joint": 0}, "end": {"joint": 0, "offset": [0, 1]}, "section": {"EA": 1, "EI3": 0.1},
         "directors": [-1, 0]}
      ]})");
    const Metamaterial m = validate(io::lattice_from_json(j));
    CHECK(m.basis()(0, 0) == 2.0);
    CHECK(m.bar(0).length == 2.0);
    CHECK(m.bar(0).section.EI2 == 0.1);
    CHECK(m.bar(0).section.EI3 == 0.1);
    CHECK((m.bar(1).directors.col(1) - Eigen::Vector2d(-1, 0)).norm() == 0.0);
    CHECK(m.kinematics() == Kinematics::Planar2D);
  }

  TEST_CASE("malformed lattice JSON is InvalidInput") {
    const char* bad[] = {
        R"([])",
        R"({"dimension": 4, "basis": [], "joints": [], "bars": []})",
        R"({"dimension": 1, "basis": [[1]], "joints": [[0]]})",
        R"({"dimension": 1, "basis": [[1]], "joints": [[0]], "bars": [{"begin": {"joint": 0}, "end": {"joint": 0, "offset": [1]}, "section": {"EX": 1}}]})",
        R"({"dimension": 1, "basis": [[1]], "joints": [[0]], "bars": [{"begin": {"joint": 0.5}, "end": {"joint": 0}, "section": {"EA": 1}}]})",
        R"({"dimension": 2, "kinematics": "axial", "basis": [[1, 0], [0, 1]], "joints": [[0, 0]], "bars": []})",
    };
    for (const char* text : bad) {
      CAPTURE(text);
      CHECK_THROWS_AS(io::lattice_from_json(json::parse(text)), Error);
    }
    CHECK_THROWS_AS(io::read_lattice_file("/nonexistent/lattice.json"), Error);
  }

  TEST_CASE("argument parsing") {
    const Parameters p = io::parse_parameters("EA=2,EI=1/100");
    CHECK(p.at("EA") == 2.0);
    CHECK(p.at("EI") == doctest::Approx(0.01));
    CHECK(io::parse_parameters("").empty());
    CHECK_THROWS_AS(io::parse_parameters("EA"), Error);
    CHECK_THROWS_AS(io::parse_parameters("EA=x"), Error);

    const auto eps = io::parse_numbers("1/4,0.125,1/16");
    REQUIRE(eps.size() == 3);
    CHECK(eps[0] == 0.25);
    CHECK(eps[2] == 0.0625);
    CHECK_THROWS_AS(io::parse_numbers("1/0"), Error);
    CHECK_THROWS_AS(io::parse_numbers("1,,2"), Error);
  }

  TEST_CASE("k-path sampling") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const auto corners = io::parse_kpath("0,0;0.5,0;0.5,0.5", 2);
    REQUIRE(corners.size() == 3);
    const io::KPath path = io::sample_kpath(m, corners, 11);
    REQUIRE(path.wavevectors.size() == 11);
    CHECK(path.wavevectors.front().norm() == 0.0);
    CHECK((path.wavevectors.back() - m.reciprocal() * Eigen::Vector2d(0.5, 0.5)).norm() < 1e-14);
    for (size_t i = 1; i < path.parameter.size(); ++i) {
      CHECK(path.parameter[i] > path.parameter[i - 1]);
      CHECK((path.wavevectors[i] - path.wavevectors[i - 1]).norm() <= path.parameter[i] - path.parameter[i - 1] + 1e-12);
    }
    CHECK_THROWS_AS(io::parse_kpath("0,0", 2), Error);
    CHECK_THROWS_AS(io::parse_kpath("0;1", 2), Error);
  }

  TEST_CASE("load JSON") {
    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const LoadField f = io::load_from_json(json::parse(R"([{"index": [1, 0], "amplitude": [1, [0, 2], 0]}])"), m);
    REQUIRE(f.modes().size() == 1);
    CHECK(f.modes()[0].amplitude(1) == std::complex<double>(0, 2));
    CHECK_THROWS_AS(io::load_from_json(json::parse(R"([{"index": [1], "amplitude": [1, 0, 0]}])"), m), Error);
  }

  TEST_CASE("reports") {
    ConvergenceTable t;
    t.rows.push_back({0.25, 4, -1.0, -0.9, 0.1});
    t.rows.push_back({0.125, 8, -0.95, -0.9, 0.05, 1.0});
    const std::string csv = io::convergence_csv(t);
    CHECK(csv.find("eps,P,discrete,continuum,gap,slope\n") == 0);
    CHECK(csv.find("1.250000000000e-01,8,-9.500000000000e-01,-9.000000000000e-01,5.000000000000e-02,1.000000000000e+00") !=
          std::string::npos);
    ConvergenceTable one;
    one.rows.push_back(t.rows[0]);
    CHECK(io::convergence_csv(one).find("slope") == std::string::npos);

    const EffectiveModuli mod = honeycomb_moduli(1, 0.01, 1);
    const json j = io::moduli_json(mod, "honeycomb", {{"EA", 1}});
    CHECK(j["symmetry"] == "isotropic");
    CHECK(j["C"].size() == 3);
    CHECK(j["parameters"]["EA"] == "1.000000000000e+00");
    CHECK(io::moduli_csv(mod) == io::moduli_csv(mod));

    const Metamaterial m = validate(honeycomb(1, 0.01, 1));
    const TorusMetastructure tor = make_torus(m, 2);
    LatticeFunction u(2, 2, 2, 3);
    const std::string disp = io::displacement_csv(tor, u);
    CHECK(disp.find("cell,alpha,x1,x2,v1,v2,theta1\n") == 0);
    CHECK(std::count(disp.begin(), disp.end(), '\n') == 1 + 4 * 2);
  }
}
