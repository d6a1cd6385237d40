#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "cvxorder/arbitrage.hpp"
#include "cvxorder/convex_order.hpp"
#include "cvxorder/measures.hpp"

namespace cvxorder::io {

using Json = nlohmann::json;

/// {"dim": d, "points": [[...], ...], "weights": [...]}; weights optional
/// (uniform when absent). Throws InvalidInput on malformed documents.
DiscreteMeasure measure_from_json(const Json& doc);
Json measure_to_json(const DiscreteMeasure& m);

/// One point per row. A leading non-numeric row is a header; when its last
/// column is named "weight" that column holds the masses.
DiscreteMeasure measure_from_csv(std::istream& in);

/// Dispatches on the extension (.json or .csv).
DiscreteMeasure load_measure(const std::string& path);

/// {"pieces": [{"g": [...], "c": r, "anchor": [...]}, ...]}
Json spread_to_json(const CalendarSpread& s);
CalendarSpread spread_from_json(const Json& doc);

Json report_to_json(const ConvexOrderReport& r);
Json rho_to_json(const RhoCandidate& rho);

/// Shortest decimal text that round-trips the double.
std::string format_double(double x);

}  // namespace cvxorder::io
