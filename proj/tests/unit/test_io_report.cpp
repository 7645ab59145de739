#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "innerlab/io.hpp"
#include "innerlab/report.hpp"

using namespace innerlab;
using doctest::Approx;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("innerlab_test_" + name);
}

}  // namespace

TEST_CASE("measure descriptions") {
  const CircleMeasure m = parse_measure(
      R"({"atoms":[{"angle":0.0,"mass":0.3}],"cantor":[{"arc_start":0.0,"arc_length":1.0,"gap_ratio":0.3333333333,"depth":12,"mass":0.7}]})");
  CHECK(m.total_mass() == Approx(1.0));
  CHECK(m.atoms().size() == 1);
  CHECK(m.cantor_parts().size() == 1);
  const CircleMeasure back = parse_measure(measure_to_json(m));
  CHECK(back.total_mass() == Approx(m.total_mass()).epsilon(1e-15));
  CHECK(back.cantor_parts()[0].depth == 12);

  CHECK_THROWS_AS(parse_measure(R"({"atoms":[{"angle":0.0,"mass":-0.3}]})"), ParseError);
  CHECK_THROWS_AS(parse_measure(R"({"atoms":[{"angle":0.0}]})"), ParseError);
  CHECK_THROWS_AS(parse_measure("not json"), ParseError);
  CHECK_THROWS_AS(parse_measure(R"({"cantor":[{"arc_start":0,"arc_length":1,"gap_ratio":2,"mass":1}]})"), ParseError);
  CHECK(parse_measure("{}").empty());
}

TEST_CASE("Blaschke and critical set descriptions") {
  const BlaschkeProduct b = parse_blaschke(
      R"({"rotation_angle":0.0,"zeros":[{"re":0.0,"im":0.0,"mult":1},{"re":0.8,"im":0.0,"mult":1}]})");
  CHECK(b.degree() == 2);
  const BlaschkeProduct b2 = parse_blaschke(blaschke_to_json(b));
  CHECK(std::abs(b2(Complex(0.1, 0.2)) - b(Complex(0.1, 0.2))) < 1e-15);
  CHECK_THROWS_AS(parse_blaschke(R"({"zeros":[{"re":1.0,"im":0.0}]})"), ParseError);
  CHECK_THROWS_AS(parse_blaschke(R"({"zeros":[{"re":0.1,"im":0.0,"mult":0}]})"), ParseError);

  const CriticalSet c = parse_critical_set(R"({"points":[{"re":0.5,"im":0.0,"mult":2}]})");
  CHECK(c.total_multiplicity() == 2);
  CHECK(parse_critical_set(R"({"zeros":[{"re":0.5,"im":0.1}]})").total_multiplicity() == 1);
  CHECK(parse_critical_set(critical_set_to_json(c)).total_multiplicity() == 2);
}

TEST_CASE("file errors carry the path") {
  const auto missing = temp_path("does_not_exist.json");
  std::filesystem::remove(missing);
  try {
    (void)load_measure(missing);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
  const auto bad = temp_path("bad.json");
  write_text_file(bad, R"({"atoms":[{"angle":0.0,"mass":-1}]})");
  try {
    (void)load_measure(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
  }
  CHECK_THROWS_AS(write_text_file("/nonexistent_dir/x.json", "x"), Error);
}

TEST_CASE("grid dumps round trip") {
  const MetricGrid g = poincare_grid({0.9, 8, 16});
  const std::string csv = grid_to_csv(g);
  CHECK(csv.rfind("outer_radius,radial_count,angular_count\n", 0) == 0);
  const MetricGrid h = grid_from_csv(csv);
  CHECK(h.radial_count() == 8);
  CHECK((h.log_density() - g.log_density()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(grid_from_csv("r,theta,u\n"), ParseError);
  std::string truncated = csv.substr(0, csv.size() / 2);
  CHECK_THROWS_AS(grid_from_csv(truncated), ParseError);
}

TEST_CASE("reports: checks and comparisons") {
  Report r("demo");
  CHECK(r.check("a", 1.0, "<=", 2.0));
  CHECK_FALSE(r.check("b", 3.0, "<", 2.0));
  CHECK(r.check("c", 3.0, ">=", 3.0));
  CHECK_FALSE(r.check("d", 3.0, ">", 3.0));
  CHECK_THROWS_AS(r.check("e", 1.0, "==", 1.0), Error);
  CHECK_FALSE(r.all_pass());
  auto& t = r.table("t", {"x", "y"});
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("reports: empty report serializes provenance") {
  Report r;
  const std::string j = to_json(r);
  CHECK(j.find("\"provenance\"") != std::string::npos);
  CHECK(j.find(kVersionString) != std::string::npos);
  CHECK(j.find(kReportSchema) != std::string::npos);
  const std::string c = to_csv(r);
  CHECK(c.rfind("# provenance: ", 0) == 0);
  CHECK(std::count(c.begin(), c.end(), '\n') == 1);
}

TEST_CASE("reports: gap table CSV schema") {
  Report r("gap");
  auto& t = r.table("gap_table", {"measure_id", "interval", "gap", "mass", "rel_err"});
  t.add_row({std::string("0.3*delta_1"), std::string("[0,6.283185307179586)"), 0.3, 0.3, 0.0});
  const std::string c = to_csv(r);
  CHECK(c.find("# table: gap_table\nmeasure_id,interval,gap,mass,rel_err\n") != std::string::npos);
  CHECK(c.find("\"[0,6.283185307179586)\"") != std::string::npos);
}

TEST_CASE("reports: deterministic output with config hash") {
  auto build = [] {
    Report r("x");
    r.set_config({{"seed", "4"}, {"tol", "1e-06"}});
    r.check("m", 0.1, "<=", 1.0, "detail, with comma");
    r.table("t", {"a"}).add_row({std::numeric_limits<double>::infinity()});
    r.note("n");
    return r;
  };
  const Report a = build();
  const Report b = build();
  CHECK(to_json(a) == to_json(b));
  CHECK(to_csv(a) == to_csv(b));
  CHECK(a.provenance().config_hash.size() == 16);
  CHECK(config_hash({{"seed", "4"}}) != config_hash({{"seed", "5"}}));
  CHECK(to_json(a).find("\"inf\"") != std::string::npos);
  const auto p1 = temp_path("r1.json");
  const auto p2 = temp_path("r2.json");
  emit(a, ReportFormat::json, p1);
  emit(b, ReportFormat::json, p2);
  CHECK(read_text_file(p1) == read_text_file(p2));
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
}
