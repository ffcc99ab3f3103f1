#pragma once

// JSON and CSV forms of spaces, configurations and reports.
//
// Space:  {"kind": "lq", "q": 3, "zero_sum": false} | {"kind": "schatten", "q": 1}
//         | {"kind": "parallelogram", "n": 4} | {"kind": "real"}
//         | {"kind": "bipartite", "n": 3} | {"kind": "snowflake", "alpha": 0.5, "base": {...}}
//         q may be the string "inf".
// Point:  [x_1, ...] with each entry a number or [re, im] (unit weights)
//         | {"entries": [...], "weights": [...]} | {"matrix": [[...], ...]}
//         | {"side": "left" | "right", "index": k}
// Dist:   {"space": {...}, "atoms": [point, ...], "probs": [number or decimal string, ...]}
// Config: {"space": {...}, "p": 2, "X": dist, "Y": dist}; X and Y inherit the space.

#include <stdexcept>
#include <string>

#include "banach/constructions.hpp"
#include "banach/search.hpp"
#include "json.hpp"

namespace banach {

using json = nlohmann::json;

/// Malformed input; the message starts with the offending field path.
class JsonError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_real(double x);
/// Number, or the strings "inf" / "-inf" / "nan".
json real_json(double x);
/// Accepts numbers and the strings above, plus decimal strings.
double parse_real(const json& j, const std::string& path);

json to_json(const Space& s);
json to_json(const Point& p);
json to_json(const FiniteDist& d);
json to_json(const Config& c);
json to_json(const BarycenterCert& c);
json to_json(const RatioReport& r);
json to_json(const Verification& v);
json to_json(const NamedConstruction& nc);
json to_json(const SearchResult& r);

Space space_from_json(const json& j, const std::string& path = "space");
Point point_from_json(const json& j, const Space& s, const std::string& path);
FiniteDist dist_from_json(const json& j, const Space* inherited, const std::string& path);
Config config_from_json(const json& j);
/// Parses text and wraps parse errors in JsonError.
Config config_from_string(const std::string& text);

/// Header and row of the ratio CSV: name,p,q,space,value,bound,slack.
std::string ratio_csv_header();
std::string ratio_csv_row(const RatioReport& r);

}  // namespace banach
