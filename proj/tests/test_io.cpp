#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cvxorder/errors.hpp"
#include "cvxorder/io.hpp"
#include "cvxorder/svg.hpp"

using namespace cvxorder;
using io::Json;

TEST_CASE("measure JSON round trip") {
  const DiscreteMeasure m(2, {{1.5, -2}, {0, 0.1}}, {0.25, 0.75});
  const auto back = io::measure_from_json(Json::parse(io::measure_to_json(m).dump()));
  CHECK(back.dim() == 2);
  CHECK(back.points() == m.points());
  CHECK(back.weights() == m.weights());
}

TEST_CASE("measure JSON without weights is uniform") {
  const auto m = io::measure_from_json(Json::parse(R"({"points": [[1], [2], [3], [4]]})"));
  CHECK(m.dim() == 1);
  CHECK(m.is_uniform());
  CHECK(m.weight(2) == 0.25);
}

TEST_CASE("malformed measure JSON") {
  for (const char* doc : {R"([])", R"({"points": []})", R"({"points": [["a"]]})",
                          R"({"points": [[1], [2]], "weights": [0.5]})",
                          R"({"dim": 2, "points": [[1]]})", R"({"dim": -1, "points": [[1]]})"}) {
    CAPTURE(doc);
    CHECK_THROWS_AS(io::measure_from_json(Json::parse(doc)), std::invalid_argument);
  }
}

TEST_CASE("measure CSV") {
  SUBCASE("plain rows") {
    std::istringstream in("1.0, 2.0\n-1, 0\n");
    const auto m = io::measure_from_csv(in);
    CHECK(m.dim() == 2);
    CHECK(m.size() == 2);
    CHECK(m.is_uniform());
  }
  SUBCASE("header with weights") {
    std::istringstream in("x,weight\n-1,0.25\n1,0.75\n");
    const auto m = io::measure_from_csv(in);
    CHECK(m.dim() == 1);
    CHECK(m.weight(1) == 0.75);
  }
  SUBCASE("header without weights") {
    std::istringstream in("x,y\n1,2\n");
    CHECK(io::measure_from_csv(in).dim() == 2);
  }
  SUBCASE("errors") {
    std::istringstream empty("x\n");
    CHECK_THROWS_AS(io::measure_from_csv(empty), InvalidInput);
    std::istringstream junk("1,2\n3,abc\n");
    CHECK_THROWS_AS(io::measure_from_csv(junk), InvalidInput);
    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS(io::measure_from_csv(ragged), std::invalid_argument);
  }
}

TEST_CASE("load_measure dispatches on extension") {
  const std::string json_path = "io_test_measure.json", csv_path = "io_test_measure.csv";
  std::ofstream(json_path) << R"({"points": [[0], [2]], "weights": [0.5, 0.5]})";
  std::ofstream(csv_path) << "0\n2\n";
  CHECK(mean(io::load_measure(json_path))[0] == 1.0);
  CHECK(mean(io::load_measure(csv_path))[0] == 1.0);
  std::ofstream(json_path) << "{not json";
  CHECK_THROWS_AS(io::load_measure(json_path), InvalidInput);
  CHECK_THROWS_AS(io::load_measure("no_such_file.json"), InvalidInput);
  std::remove(json_path.c_str());
  std::remove(csv_path.c_str());
}

TEST_CASE("spread JSON round trip") {
  const CalendarSpread s({{{1.0, 2.0}, -0.5, {0.0, 1.0}}, {{-1.0, 0.0}, 0.25, {1.0, 1.0}}});
  const Json doc = io::spread_to_json(s);
  CHECK(doc.at("pieces").size() == 2);
  CHECK(doc.at("pieces")[0].at("c") == -0.5);
  const auto back = io::spread_from_json(doc);
  REQUIRE(back.pieces().size() == 2);
  CHECK(back.pieces()[1].gradient == Point{-1.0, 0.0});
  CHECK(back.pieces()[1].anchor == Point{1.0, 1.0});
  CHECK(back.value(std::vector<double>{2.0, 3.0}) == s.value(std::vector<double>{2.0, 3.0}));
  CHECK_THROWS_AS(io::spread_from_json(Json::parse(R"({"pieces": [{"g": [1]}]})")), InvalidInput);
  CHECK_THROWS_AS(io::spread_from_json(Json::parse(R"({"pieces": []})")), InvalidInput);
}

TEST_CASE("report JSON") {
  ConvexOrderReport r;
  r.v_hat = -0.25;
  r.verdict = Verdict::NotOrdered;
  r.method = Method::Direct;
  r.witness_rho = RhoCandidate::free({{0.5}});
  const Json j = io::report_to_json(r);
  CHECK(j.at("verdict") == "not_ordered");
  CHECK(j.at("method") == "direct");
  CHECK(j.at("oracle_ordered").is_null());
  CHECK(j.at("witness_rho").at("kind") == "free");
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 12345.678}) CHECK(std::stod(io::format_double(x)) == x);
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("svg line chart") {
  const std::string s = svg::line_chart("t", "x", {{"a", {0, 1, 2}, {1, -1, 0.5}}, {"b", {0, 2}, {0, 0}}});
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("polyline") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  const std::string flat = svg::line_chart("t", "x", {{"c", {1}, {1}}});
  CHECK(flat.find("nan") == std::string::npos);
}
