#include "banach/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace banach {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw JsonError(path + ": " + what); }

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

std::size_t parse_count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

cplx parse_entry(const json& j, const std::string& path) {
  if (j.is_array()) {
    if (j.size() != 2) fail(path, "complex entries are [re, im]");
    return {parse_real(j[0], path + "[0]"), parse_real(j[1], path + "[1]")};
  }
  return {parse_real(j, path), 0.0};
}

std::vector<cplx> parse_entries(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of entries");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_entry(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

json entry_json(cplx z) {
  if (z.imag() == 0.0) return real_json(z.real());
  return json::array({real_json(z.real()), real_json(z.imag())});
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const Space& root_of(const Space& s) {
  if (s.is<Snowflake>()) return root_of(*s.as<Snowflake>().base);
  return s;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json real_json(double x) {
  if (std::isfinite(x)) return x;
  return format_real(x);
}

double parse_real(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && std::isfinite(v)) return v;
    fail(path, "cannot parse '" + s + "' as a real");
  }
  fail(path, "expected a number");
}

json to_json(const Space& s) {
  if (s.is<WeightedLq>()) {
    const auto& k = s.as<WeightedLq>();
    return {{"kind", "lq"}, {"q", real_json(k.q)}, {"zero_sum", k.zero_sum}};
  }
  if (s.is<Schatten>()) return {{"kind", "schatten"}, {"q", real_json(s.as<Schatten>().q)}};
  if (s.is<ParallelogramS1>()) {
    const auto& k = s.as<ParallelogramS1>();
    return {{"kind", "parallelogram"}, {"n", k.n}, {"printed_lambda", k.printed_lambda}};
  }
  if (s.is<Snowflake>()) {
    const auto& k = s.as<Snowflake>();
    return {{"kind", "snowflake"}, {"alpha", k.alpha}, {"base", to_json(*k.base)}};
  }
  if (s.is<BipartiteGraph>()) return {{"kind", "bipartite"}, {"n", s.as<BipartiteGraph>().n}};
  return {{"kind", "real"}};
}

json to_json(const Point& p) {
  if (const auto* v = std::get_if<CVector>(&p)) {
    json e = json::array();
    for (const auto& z : v->entries) e.push_back(entry_json(z));
    bool unit = true;
    for (double w : v->weights) unit = unit && w == 1.0;
    if (unit) return e;
    json w = json::array();
    for (double x : v->weights) w.push_back(real_json(x));
    return {{"entries", e}, {"weights", w}};
  }
  if (const auto* m = std::get_if<CMatrix>(&p)) {
    json rows = json::array();
    for (std::size_t i = 0; i < m->dim; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < m->dim; ++k) row.push_back(entry_json((*m)(i, k)));
      rows.push_back(row);
    }
    return {{"matrix", rows}};
  }
  const auto& v = std::get<Vertex>(p);
  return {{"side", v.side == Side::Left ? "left" : "right"}, {"index", v.index}};
}

json to_json(const FiniteDist& d) {
  json atoms = json::array(), probs = json::array();
  for (const auto& a : d.atoms()) atoms.push_back(to_json(a));
  for (double p : d.probs()) probs.push_back(real_json(p));
  return {{"space", to_json(d.space())}, {"atoms", atoms}, {"probs", probs}};
}

json to_json(const Config& c) {
  json x = to_json(c.X), y = to_json(c.Y);
  x.erase("space");
  y.erase("space");
  return {{"space", to_json(c.space())}, {"p", real_json(c.p)}, {"X", x}, {"Y", y}};
}

json to_json(const BarycenterCert& c) {
  return {{"z_star", to_json(c.z_star)},     {"value", real_json(c.value)},
          {"iterations", c.iterations},      {"starts", c.starts},
          {"best_start", to_string(c.best_start)}};
}

json to_json(const RatioReport& r) {
  json j = {{"name", to_string(r.name)},
            {"value", real_json(r.value)},
            {"numerator", real_json(r.numerator)},
            {"denominator", real_json(r.denominator)},
            {"p", real_json(r.p)},
            {"space", r.space},
            {"bound_kind", r.bound_kind == BoundKind::Upper ? "upper" : "lower"},
            {"paper_bound", r.paper_bound ? real_json(*r.paper_bound) : json(nullptr)},
            {"slack", r.slack ? real_json(*r.slack) : json(nullptr)},
            {"q", r.q ? real_json(*r.q) : json(nullptr)},
            {"note", r.note}};
  if (r.solver_info) j["solver_info"] = to_json(*r.solver_info);
  return j;
}

json to_json(const Verification& v) {
  json j = {{"predicted", real_json(v.predicted)},
            {"computed", real_json(v.computed)},
            {"slack", real_json(v.slack)},
            {"tolerance", real_json(v.tolerance)},
            {"pass", v.pass}};
  if (v.report) j["report"] = to_json(*v.report);
  return j;
}

json to_json(const NamedConstruction& nc) {
  json params = json::object();
  for (const auto& [k, v] : nc.params) params[k] = real_json(v);
  return {{"id", to_string(nc.id)},
          {"params", params},
          {"predicted", real_json(nc.predicted)},
          {"prediction_kind", to_string(nc.prediction_kind)},
          {"target", to_string(nc.target)},
          {"config", to_json(nc.config)}};
}

json to_json(const SearchResult& r) {
  json trace = json::array();
  for (const auto& e : r.trace) trace.push_back(json::array({e.iteration, real_json(e.ratio)}));
  return {{"label", r.label},
          {"best_ratio", real_json(r.best_ratio)},
          {"seed", r.seed},
          {"best_restart", r.best_restart},
          {"accepted", r.accepted},
          {"warm_start_ratio", r.warm_start_ratio ? real_json(*r.warm_start_ratio) : json(nullptr)},
          {"trace", trace},
          {"best_config", to_json(r.best_config)}};
}

Space space_from_json(const json& j, const std::string& path) {
  const json& kind_j = field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "lq") {
      bool zero_sum = false;
      if (j.contains("zero_sum")) {
        if (!j["zero_sum"].is_boolean()) fail(path + ".zero_sum", "expected a boolean");
        zero_sum = j["zero_sum"].get<bool>();
      }
      const double q = parse_real(field(j, "q", path), path + ".q");
      if (!(q >= 1.0)) fail(path + ".q", "must be >= 1");
      return Space::lq(q, zero_sum);
    }
    if (kind == "schatten") {
      const double q = parse_real(field(j, "q", path), path + ".q");
      if (!(q >= 1.0)) fail(path + ".q", "must be >= 1");
      return Space::schatten(q);
    }
    if (kind == "parallelogram") {
      const std::size_t n = parse_count(field(j, "n", path), path + ".n");
      if (n < 1) fail(path + ".n", "must be >= 1");
      bool printed = false;
      if (j.contains("printed_lambda")) {
        if (!j["printed_lambda"].is_boolean()) fail(path + ".printed_lambda", "expected a boolean");
        printed = j["printed_lambda"].get<bool>();
      }
      return Space::parallelogram(n, printed);
    }
    if (kind == "snowflake") {
      const double alpha = parse_real(field(j, "alpha", path), path + ".alpha");
      if (!(alpha > 0.0 && alpha <= 1.0)) fail(path + ".alpha", "must lie in (0, 1]");
      return Space::snowflake(space_from_json(field(j, "base", path), path + ".base"), alpha);
    }
    if (kind == "bipartite") {
      const std::size_t n = parse_count(field(j, "n", path), path + ".n");
      if (n < 1) fail(path + ".n", "must be >= 1");
      return Space::bipartite(n);
    }
    if (kind == "real") return Space::real_line();
  } catch (const JsonError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown space kind '" + kind + "'");
}

Point point_from_json(const json& j, const Space& s, const std::string& path) {
  const Space& root = root_of(s);
  if (root.is<BipartiteGraph>()) {
    const json& side = field(j, "side", path);
    if (!side.is_string() || (side != "left" && side != "right")) fail(path + ".side", "expected \"left\" or \"right\"");
    return Vertex{side == "left" ? Side::Left : Side::Right, parse_count(field(j, "index", path), path + ".index")};
  }
  if (root.is<Schatten>()) {
    const json& rows = field(j, "matrix", path);
    if (!rows.is_array() || rows.empty()) fail(path + ".matrix", "expected a nonempty array of rows");
    const std::size_t m = rows.size();
    std::vector<cplx> e;
    for (std::size_t i = 0; i < m; ++i) {
      const std::string rp = path + ".matrix[" + std::to_string(i) + "]";
      auto row = parse_entries(rows[i], rp);
      if (row.size() != m) fail(rp, "matrix must be square");
      e.insert(e.end(), row.begin(), row.end());
    }
    return CMatrix(m, std::move(e));
  }
  if (j.is_array()) return CVector::unit(parse_entries(j, path));
  auto e = parse_entries(field(j, "entries", path), path + ".entries");
  if (!j.contains("weights")) return CVector::unit(std::move(e));
  const json& wj = j["weights"];
  if (!wj.is_array() || wj.size() != e.size()) fail(path + ".weights", "expected one weight per entry");
  std::vector<double> w;
  for (std::size_t k = 0; k < wj.size(); ++k) w.push_back(parse_real(wj[k], path + ".weights[" + std::to_string(k) + "]"));
  try {
    return CVector(std::move(e), std::move(w));
  } catch (const std::invalid_argument& ex) {
    fail(path, ex.what());
  }
}

FiniteDist dist_from_json(const json& j, const Space* inherited, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const Space space = j.contains("space") ? space_from_json(j["space"], path + ".space")
                      : inherited         ? *inherited
                                          : (fail(path + ".space", "missing field"), Space::real_line());
  const json& aj = field(j, "atoms", path);
  const json& pj = field(j, "probs", path);
  if (!aj.is_array() || aj.empty()) fail(path + ".atoms", "expected a nonempty array");
  if (!pj.is_array() || pj.size() != aj.size()) fail(path + ".probs", "expected one probability per atom");
  std::vector<Point> atoms;
  std::vector<double> probs;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const std::string ap = path + ".atoms[" + std::to_string(i) + "]";
    atoms.push_back(point_from_json(aj[i], space, ap));
    try {
      space.validate_point(atoms.back());
    } catch (const std::invalid_argument& e) {
      fail(ap, e.what());
    }
    probs.push_back(parse_real(pj[i], path + ".probs[" + std::to_string(i) + "]"));
  }
  try {
    return FiniteDist(space, std::move(atoms), std::move(probs));
  } catch (const std::invalid_argument& e) {
    fail(path + ".probs", e.what());
  }
}

Config config_from_json(const json& j) {
  if (!j.is_object()) fail("config", "expected an object");
  std::optional<Space> space;
  if (j.contains("space")) space = space_from_json(j["space"], "space");
  const double p = parse_real(field(j, "p", "config"), "p");
  if (!(p > 0.0) || !std::isfinite(p)) fail("p", "must be positive and finite");
  FiniteDist x = dist_from_json(field(j, "X", "config"), space ? &*space : nullptr, "X");
  FiniteDist y = dist_from_json(field(j, "Y", "config"), space ? &*space : nullptr, "Y");
  if (!(x.space() == y.space())) fail("Y.space", "X and Y must live in the same space");
  try {
    return Config(std::move(x), std::move(y), p);
  } catch (const std::invalid_argument& e) {
    fail("config", e.what());
  }
}

Config config_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("config", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string ratio_csv_header() { return "name,p,q,space,value,bound,slack"; }

std::string ratio_csv_row(const RatioReport& r) {
  return to_string(r.name) + "," + format_real(r.p) + "," + (r.q ? format_real(*r.q) : "") + "," + csv_field(r.space) + "," +
         format_real(r.value) + "," + (r.paper_bound ? format_real(*r.paper_bound) : "") + "," +
         (r.slack ? format_real(*r.slack) : "");
}

}  // namespace banach
