// Command-line front end: constants grids, ratio reports, construction
// checks, scalar suites and seeded searches.
//
// Exit codes: 0 success, 1 tolerance breach, 2 input error.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "banach/check_suites.hpp"
#include "banach/constants.hpp"
#include "banach/constructions.hpp"
#include "banach/json_io.hpp"
#include "banach/search.hpp"

using namespace banach;

namespace {

constexpr int kOk = 0;
constexpr int kBreach = 1;
constexpr int kInputError = 2;

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double parse_number(const std::string& s, const std::string& what) {
  try {
    return parse_real(json(s), what);
  } catch (const JsonError& e) {
    throw InputError(e.what());
  }
}

std::vector<double> parse_list(const std::vector<std::string>& items, const std::string& what) {
  std::vector<double> out;
  for (const auto& s : items) out.push_back(parse_number(s, what));
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  const double v = parse_number(s, what);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) throw InputError(what + ": expected a positive integer");
  return std::size_t(v);
}

struct SpaceSpec {
  Space space;
  std::size_t dimension = 0;
};

// lq:<q>[:<d>] | lq0:<q>[:<d>] | schatten:<q>[:<m>] | parallelogram:<n> | real
// | snowflake:<alpha>:<base spec>
SpaceSpec parse_space(const std::string& text) {
  const auto parts = split(text, ':');
  const std::string& kind = parts[0];
  if (kind == "snowflake") {
    if (parts.size() < 3) throw InputError("--space: snowflake:<alpha>:<base>");
    const double alpha = parse_number(parts[1], "--space alpha");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("--space: snowflake alpha must lie in (0, 1]");
    SpaceSpec base = parse_space(text.substr(kind.size() + parts[1].size() + 2));
    return {Space::snowflake(base.space, alpha), base.dimension};
  }
  if (kind == "real" && parts.size() == 1) return {Space::real_line(), 0};
  if ((kind == "lq" || kind == "lq0" || kind == "schatten") && (parts.size() == 2 || parts.size() == 3)) {
    const double q = parse_number(parts[1], "--space q");
    if (!(q >= 1.0)) throw InputError("--space: q must be >= 1");
    const std::size_t d = parts.size() == 3 ? parse_size(parts[2], "--space dimension") : 0;
    if (kind == "schatten") return {Space::schatten(q), d};
    return {Space::lq(q, kind == "lq0"), d};
  }
  if (kind == "parallelogram" && parts.size() == 2) return {Space::parallelogram(parse_size(parts[1], "--space n")), 0};
  throw InputError("--space: cannot parse '" + text + "'");
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_output(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// constants

struct ConstantsArgs {
  double pmin = 1.0, pmax = 4.0, step = 0.5;
  std::string qmin, qmax, qstep;
};

std::string cell(const std::function<double()>& f) {
  try {
    return format_real(f());
  } catch (const std::invalid_argument&) {
    return "";
  }
}

std::vector<double> grid(double lo, double hi, double step, const std::string& what) {
  if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(hi)) throw InputError(what + ": need min <= max and step > 0");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = lo + double(i) * step;
    if (v > hi + 1e-9 * step) break;
    out.push_back(v);
  }
  return out;
}

int run_constants(const ConstantsArgs& a) {
  if (!(a.pmin >= 1.0)) throw InputError("--pmin must be >= 1");
  const auto ps = grid(a.pmin, a.pmax, a.step, "p grid");
  const double qlo = a.qmin.empty() ? a.pmin : parse_number(a.qmin, "--qmin");
  const double qhi = a.qmax.empty() ? a.pmax : parse_number(a.qmax, "--qmax");
  const double qst = a.qstep.empty() ? a.step : parse_number(a.qstep, "--qstep");
  if (!(qlo >= 1.0)) throw InputError("--qmin must be >= 1");
  const auto qs = grid(qlo, qhi, qst, "q grid");
  std::ostringstream out;
  out << "p,q,c,C,C_opt,theta_max,snowflake,Q_star,bm_bound,general_bound\n";
  for (double p : ps)
    for (double q : qs) {
      const PQ pq{p, q};
      out << format_real(p) << ',' << format_real(q) << ',' << cell([&] { return c_exponent(pq); }) << ','
          << cell([&] { return C_exponent(pq); }) << ',' << cell([&] { return C_opt_exponent(pq); }) << ','
          << cell([&] { return theta_max(pq); }) << ',' << cell([&] { return snowflake_exponent(pq).value; }) << ','
          << cell([&] { return snowflake_exponent(pq).Q_star; }) << ',' << cell([&] { return bm_bound(pq); }) << ','
          << cell([&] { return general_bound(p); }) << '\n';
    }
  std::cout << out.str();
  return kOk;
}

// ---------------------------------------------------------------------------
// ratio

bool breached(const RatioReport& r, double tol) {
  if (!r.slack) return false;
  const double scale = std::max(1.0, std::abs(*r.paper_bound));
  return r.bound_kind == BoundKind::Upper ? *r.slack < -tol * scale : *r.slack > tol * scale;
}

std::vector<RatioReport> all_reports(const Config& c, std::ostream& err) {
  std::vector<RatioReport> out;
  auto add = [&](const char* what, auto f) {
    try {
      out.push_back(f());
    } catch (const DegenerateRatio& e) {
      err << "skipped " << what << ": " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
      err << "skipped " << what << ": " << e.what() << '\n';
    }
  };
  add("roundness", [&] { return roundness_ratio(c); });
  if (c.space().is_linear()) {
    add("mixture", [&] { return mixture_ratio(c); });
    if (c.p >= 1.0)
      add("barycenter", [&] { return barycenter_ratio(c); });
    else
      add("barycenter", [&] { return random_point_barycenter_ratio(c); });
    add("jensen", [&] { return jensen_ratio(c.X, c.p); });
  }
  add("metric_barycenter", [&] { return metric_barycenter_ratio(c); });
  add("log_roundness", [&] { return log_roundness_report(c); });
  return out;
}

int emit_reports(const std::vector<RatioReport>& reports, bool as_json, double tol, std::ostream& out) {
  bool bad = false;
  if (as_json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    out << arr.dump(2) << '\n';
  } else {
    for (const auto& r : reports) out << ratio_csv_row(r) << '\n';
  }
  for (const auto& r : reports) bad = bad || breached(r, tol);
  return bad ? kBreach : kOk;
}

int run_ratio(const std::string& path, bool as_json, double tol) {
  const Config c = config_from_string(read_input(path));
  std::ostringstream out, err;
  if (!as_json) out << ratio_csv_header() << '\n';
  const int code = emit_reports(all_reports(c, err), as_json, tol, out);
  std::cerr << err.str();
  std::cout << out.str();
  return code;
}

// ---------------------------------------------------------------------------
// verify

struct ConstructionArgs {
  std::string name;
  std::string n = "2";
  std::string q = "2";
  std::string p = "2";
  std::string eps = "0.1";
  std::string kind = "two_point";
};

int as_int(double v, const std::string& what) {
  if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError(what + ": expected an integer");
  return int(v);
}

NamedConstruction build(const std::string& name, double n_real, double q, double p, double eps,
                        const std::string& kind) {
  const int n = as_int(n_real, "--n");
  if (name == "fn" || name == "fn_q") return make_fn(n, q, p);
  if (name == "fn_inf") return make_fn(n, std::numeric_limits<double>::infinity(), p);
  if (name == "bipartite") return make_bipartite(n, p);
  if (name == "disjoint_bernoulli") return make_disjoint_bernoulli(n, q, p);
  if (name == "schatten_parallelogram") return make_schatten_parallelogram(n, p);
  if (name == "two_point") return make_two_point(p);
  if (name == "eps_atom") return make_eps_atom(eps, p);
  std::string k = kind;
  if (name.rfind("jensen_", 0) == 0) k = name.substr(7);
  else if (name != "jensen") throw InputError("unknown construction '" + name + "'");
  const JensenParams jp{p, eps, n, q};
  if (k == "two_point") return make_jensen(JensenKind::TwoPoint, jp);
  if (k == "eps") return make_jensen(JensenKind::Eps, jp);
  if (k == "basis") return make_jensen(JensenKind::Basis, jp);
  if (k == "rademacher") return make_jensen(JensenKind::Rademacher, jp);
  throw InputError("unknown jensen kind '" + k + "'");
}

std::string params_string(const NamedConstruction& nc) {
  std::string s;
  for (const auto& [k, v] : nc.params) s += (s.empty() ? "" : ";") + k + "=" + format_real(v);
  return s;
}

const char* kVerifyHeader = "construction,params,target,prediction_kind,predicted,computed,slack,tolerance,pass";

std::string verify_row(const NamedConstruction& nc, const Verification& v) {
  return to_string(nc.id) + "," + params_string(nc) + "," + to_string(nc.target) + "," +
         to_string(nc.prediction_kind) + "," + format_real(v.predicted) + "," + format_real(v.computed) + "," +
         format_real(v.slack) + "," + format_real(v.tolerance) + "," + (v.pass ? "true" : "false");
}

int run_verify(const ConstructionArgs& a, bool as_json) {
  const auto nc = build(a.name, parse_number(a.n, "--n"), parse_number(a.q, "--q"), parse_number(a.p, "--p"),
                        parse_number(a.eps, "--eps"), a.kind);
  const auto v = verify(nc);
  if (as_json) {
    json j = to_json(v);
    j["construction"] = to_json(nc);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << kVerifyHeader << '\n' << verify_row(nc, v) << '\n';
  }
  return v.pass ? kOk : kBreach;
}

// ---------------------------------------------------------------------------
// check

int run_check(const std::string& name, const SuiteOptions& o, const std::vector<std::string>& params) {
  SuiteOptions opts = o;
  opts.params = parse_list(params, "--params");
  const auto r = run_check_suite(name, opts);
  std::ostringstream out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out << (i ? "," : "") << r.columns[i];
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  std::cout << out.str();
  std::cerr << r.name << ": checked " << r.checked << ", violations " << r.violations << '\n';
  return r.pass() ? kOk : kBreach;
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string space = "lq:2";
  std::string objective = "roundness";
  std::string p = "1";
  long budget = 1000;
  int restarts = 1;
  std::uint64_t seed = 0;
  int min_atoms = 1;
  int max_atoms_x = 4;
  int max_atoms_y = 4;
  bool no_warm_start = false;
  std::string out;
};

int run_search_cmd(const SearchArgs& a) {
  const auto sp = parse_space(a.space);
  const auto obj = objective_from_string(a.objective);
  if (!obj) throw InputError("--objective: expected roundness, barycenter or mixture");
  SearchSpec spec;
  spec.space = sp.space;
  spec.dimension = sp.dimension;
  spec.objective = *obj;
  spec.p = parse_number(a.p, "--p");
  spec.budget = a.budget;
  spec.restarts = a.restarts;
  spec.seed = a.seed;
  spec.min_atoms_x = spec.min_atoms_y = a.min_atoms;
  spec.max_atoms_x = a.max_atoms_x;
  spec.max_atoms_y = a.max_atoms_y;
  spec.warm_start = !a.no_warm_start;
  const auto r = run_search(spec);
  if (!a.out.empty()) {
    json j = to_json(r);
    j["spec"] = {{"space", to_json(spec.space)}, {"objective", to_string(spec.objective)}, {"p", spec.p},
                 {"budget", spec.budget},         {"restarts", spec.restarts},            {"seed", spec.seed}};
    write_output(a.out, j.dump(2) + "\n");
  }
  std::cout << "objective,space,p,best_ratio,warm_start_ratio,best_restart,accepted,label\n"
            << to_string(spec.objective) << ',' << spec.space.label() << ',' << format_real(spec.p) << ','
            << format_real(r.best_ratio) << ',' << (r.warm_start_ratio ? format_real(*r.warm_start_ratio) : "")
            << ',' << r.best_restart << ',' << r.accepted << ',' << r.label << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepVerifyArgs {
  std::string name;
  std::vector<std::string> n = {"2"}, q = {"2"}, p = {"2"}, eps = {"0.1"};
  std::string kind = "two_point";
};

int run_sweep_verify(const SweepVerifyArgs& a) {
  const auto ns = parse_list(a.n, "--n"), qs = parse_list(a.q, "--q"), ps = parse_list(a.p, "--p"),
             es = parse_list(a.eps, "--eps");
  std::ostringstream out;
  out << kVerifyHeader << '\n';
  bool bad = false;
  for (double n : ns)
    for (double q : qs)
      for (double p : ps)
        for (double e : es) {
          const auto nc = build(a.name, n, q, p, e, a.kind);
          const auto v = verify(nc);
          bad = bad || !v.pass;
          out << verify_row(nc, v) << '\n';
        }
  std::cout << out.str();
  return bad ? kBreach : kOk;
}

int run_sweep_ratio(const std::string& path, const std::vector<std::string>& p_list, double tol) {
  const Config base = config_from_string(read_input(path));
  const auto ps = parse_list(p_list, "--p");
  std::ostringstream out, err;
  out << ratio_csv_header() << '\n';
  int code = kOk;
  for (double p : ps) {
    if (!(p > 0.0) || !std::isfinite(p)) throw InputError("--p: values must be positive and finite");
    const Config c(base.X, base.Y, p);
    code = std::max(code, emit_reports(all_reports(c, err), false, tol, out));
  }
  std::cerr << err.str();
  std::cout << out.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment inequalities and moduli of metric spaces"};
  app.require_subcommand(1);

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Exponent and constant grid as CSV");
  constants->add_option("--pmin", ca.pmin, "Smallest p")->capture_default_str();
  constants->add_option("--pmax", ca.pmax, "Largest p")->capture_default_str();
  constants->add_option("--step", ca.step, "p step")->capture_default_str();
  constants->add_option("--qmin", ca.qmin, "Smallest q (default: pmin)");
  constants->add_option("--qmax", ca.qmax, "Largest q (default: pmax)");
  constants->add_option("--qstep", ca.qstep, "q step (default: step)");

  std::string ratio_path;
  bool ratio_json = false;
  double tolerance = 1e-7;
  auto* ratio = app.add_subcommand("ratio", "All applicable ratio reports for a Config JSON");
  ratio->add_option("config", ratio_path, "Config JSON file, or - for stdin")->required();
  ratio->add_flag("--json", ratio_json, "JSON instead of CSV");
  ratio->add_option("--tolerance", tolerance, "Relative tolerance on bounds")->capture_default_str();

  ConstructionArgs va;
  bool verify_json = false;
  auto* verify_cmd = app.add_subcommand("verify", "Compare a construction's predicted and computed ratio");
  verify_cmd->add_option("construction", va.name, "fn, fn_inf, fn_q, bipartite, disjoint_bernoulli, jensen, "
                                                  "jensen_<kind>, schatten_parallelogram, two_point, eps_atom")
      ->required();
  verify_cmd->add_option("--n", va.n, "Size parameter")->capture_default_str();
  verify_cmd->add_option("--q", va.q, "L_q exponent (inf allowed)")->capture_default_str();
  verify_cmd->add_option("--p", va.p, "Moment exponent")->capture_default_str();
  verify_cmd->add_option("--eps", va.eps, "Atom mass")->capture_default_str();
  verify_cmd->add_option("--kind", va.kind, "Jensen kind: two_point, eps, basis, rademacher")->capture_default_str();
  verify_cmd->add_flag("--json", verify_json, "JSON instead of CSV");

  std::string suite;
  SuiteOptions so;
  std::vector<std::string> suite_params;
  auto* check = app.add_subcommand("check", "Run a scalar inequality suite");
  check->add_option("suite", suite, "alpha, beta, subadditivity, smoothing, hilbert, cosine, laplace")->required();
  check->add_option("--grid", so.grid, "Grid size (0: suite default)");
  check->add_option("--seeds", so.seeds, "Random instances per parameter (0: suite default)");
  check->add_option("--tolerance", so.tolerance, "Tolerance (0: suite default)");
  check->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
  check->add_option("--params", suite_params, "q or s values")->delimiter(',');

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Seeded hill-climb for large ratios (empirical lower bounds)");
  search->add_option("--space", sa.space, "lq:<q>[:<d>], lq0:<q>[:<d>], schatten:<q>[:<m>], parallelogram:<n>, "
                                          "real, snowflake:<alpha>:<base>")
      ->capture_default_str();
  search->add_option("--objective", sa.objective, "roundness, barycenter or mixture")->capture_default_str();
  search->add_option("--p", sa.p, "Moment exponent")->capture_default_str();
  search->add_option("--budget", sa.budget, "Proposals per restart")->capture_default_str();
  search->add_option("--restarts", sa.restarts, "Independent restarts")->capture_default_str();
  search->add_option("--seed", sa.seed, "RNG seed")->required();
  search->add_option("--min-atoms", sa.min_atoms, "Fewest atoms per side")->capture_default_str();
  search->add_option("--max-atoms-x", sa.max_atoms_x, "Most atoms of X")->capture_default_str();
  search->add_option("--max-atoms-y", sa.max_atoms_y, "Most atoms of Y")->capture_default_str();
  search->add_flag("--no-warm-start", sa.no_warm_start, "Random starts only");
  search->add_option("--out", sa.out, "Write the full result JSON here");

  auto* sweep = app.add_subcommand("sweep", "Run verify or ratio over a parameter grid");
  sweep->require_subcommand(1);
  SweepVerifyArgs sv;
  auto* sweep_verify = sweep->add_subcommand("verify", "Construction checks over a grid");
  sweep_verify->add_option("construction", sv.name, "Construction name")->required();
  sweep_verify->add_option("--n", sv.n, "Size values")->delimiter(',');
  sweep_verify->add_option("--q", sv.q, "q values")->delimiter(',');
  sweep_verify->add_option("--p", sv.p, "p values")->delimiter(',');
  sweep_verify->add_option("--eps", sv.eps, "eps values")->delimiter(',');
  sweep_verify->add_option("--kind", sv.kind, "Jensen kind")->capture_default_str();
  std::string sweep_path;
  std::vector<std::string> sweep_ps;
  auto* sweep_ratio = sweep->add_subcommand("ratio", "Ratio reports of one Config over p values");
  sweep_ratio->add_option("config", sweep_path, "Config JSON file, or - for stdin")->required();
  sweep_ratio->add_option("--p", sweep_ps, "p values")->delimiter(',')->required();
  sweep_ratio->add_option("--tolerance", tolerance, "Relative tolerance on bounds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*constants) return run_constants(ca);
    if (*ratio) return run_ratio(ratio_path, ratio_json, tolerance);
    if (*verify_cmd) return run_verify(va, verify_json);
    if (*check) return run_check(suite, so, suite_params);
    if (*search) return run_search_cmd(sa);
    if (*sweep_verify) return run_sweep_verify(sv);
    if (*sweep_ratio) return run_sweep_ratio(sweep_path, sweep_ps, tolerance);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DegenerateRatio& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kBreach;
  }
  return kInputError;
}
