#include "cvxorder/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "cvxorder/errors.hpp"

namespace cvxorder::io {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

Point point_from_json(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of numbers");
  Point p;
  for (const auto& c : j) {
    if (!c.is_number()) throw InvalidInput(std::string(what) + " must be an array of numbers");
    p.push_back(c.get<double>());
  }
  return p;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

DiscreteMeasure measure_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("points")) throw InvalidInput("measure JSON needs a \"points\" array");
  const Json& pts = doc.at("points");
  if (!pts.is_array() || pts.empty()) throw InvalidInput("measure JSON: \"points\" must be a non-empty array");
  std::vector<Point> points;
  for (const auto& p : pts) points.push_back(point_from_json(p, "each point"));
  std::size_t dim = points.front().size();
  if (doc.contains("dim")) {
    if (!doc.at("dim").is_number_unsigned()) throw InvalidInput("measure JSON: \"dim\" must be a positive integer");
    dim = doc.at("dim").get<std::size_t>();
  }
  if (!doc.contains("weights")) return DiscreteMeasure(dim, std::move(points),
                                                       std::vector<double>(pts.size(), 1.0 / static_cast<double>(pts.size())));
  return DiscreteMeasure(dim, std::move(points), point_from_json(doc.at("weights"), "\"weights\""));
}

Json measure_to_json(const DiscreteMeasure& m) {
  return Json{{"dim", m.dim()}, {"points", m.points()}, {"weights", m.weights()}};
}

DiscreteMeasure measure_from_csv(std::istream& in) {
  std::string line;
  bool first_row = true, weighted = false;
  std::vector<Point> points;
  std::vector<double> weights;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_row(line);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t k = 0; k < cells.size(); ++k) numeric = numeric && parse_number(cells[k], row[k]);
    if (first_row && !numeric) {
      weighted = !cells.empty() && cells.back() == "weight";
      first_row = false;
      continue;
    }
    first_row = false;
    if (!numeric) throw InvalidInput("CSV line " + std::to_string(line_no) + ": non-numeric cell");
    if (weighted) {
      if (row.size() < 2) throw InvalidInput("CSV line " + std::to_string(line_no) + ": missing coordinates");
      weights.push_back(row.back());
      row.pop_back();
    }
    points.push_back(std::move(row));
  }
  if (points.empty()) throw InvalidInput("CSV measure has no rows");
  const std::size_t dim = points.front().size();
  if (!weighted) return from_samples(std::move(points));
  return DiscreteMeasure(dim, std::move(points), std::move(weights));
}

DiscreteMeasure load_measure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open measure file " + path);
  const auto dot_pos = path.rfind('.');
  const std::string ext = dot_pos == std::string::npos ? "" : path.substr(dot_pos + 1);
  if (ext == "csv") return measure_from_csv(in);
  try {
    return measure_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw InvalidInput("cannot parse " + path + ": " + e.what());
  }
}

Json spread_to_json(const CalendarSpread& s) {
  Json pieces = Json::array();
  for (const auto& p : s.pieces()) pieces.push_back({{"g", p.gradient}, {"c", p.intercept}, {"anchor", p.anchor}});
  return Json{{"pieces", std::move(pieces)}};
}

CalendarSpread spread_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("pieces") || !doc.at("pieces").is_array()) {
    throw InvalidInput("spread JSON needs a \"pieces\" array");
  }
  std::vector<AffinePiece> pieces;
  for (const auto& p : doc.at("pieces")) {
    if (!p.is_object() || !p.contains("g") || !p.contains("c") || !p.contains("anchor") ||
        !p.at("c").is_number()) {
      throw InvalidInput("spread piece needs \"g\", \"c\" and \"anchor\"");
    }
    pieces.push_back({point_from_json(p.at("g"), "\"g\""), p.at("c").get<double>(),
                      point_from_json(p.at("anchor"), "\"anchor\"")});
  }
  return CalendarSpread(std::move(pieces));
}

Json rho_to_json(const RhoCandidate& rho) {
  if (rho.is_grid()) {
    return Json{{"kind", "grid"}, {"radius", rho.grid().grid.radius},
                {"points", rho.grid().grid.nodes}, {"weights", rho.grid().weights}};
  }
  return Json{{"kind", "free"}, {"radius", rho.free_points().radius}, {"points", rho.free_points().points}};
}

Json report_to_json(const ConvexOrderReport& r) {
  Json j{{"v_hat", r.v_hat},
         {"verdict", std::string(to_string(r.verdict))},
         {"method", std::string(to_string(r.method))},
         {"budget_used", r.budget_used},
         {"epsilon", r.epsilon}};
  j["oracle_agreement"] = r.oracle_agreement ? Json(*r.oracle_agreement) : Json(nullptr);
  j["oracle_ordered"] = r.oracle ? Json(r.oracle->ordered) : Json(nullptr);
  if (r.witness_rho) j["witness_rho"] = rho_to_json(*r.witness_rho);
  return j;
}

}  // namespace cvxorder::io
