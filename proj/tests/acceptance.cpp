// Acceptance suite: one PASS/FAIL line per criterion, exit 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "banach/check_suites.hpp"
#include "banach/constants.hpp"
#include "banach/constructions.hpp"
#include "banach/json_io.hpp"
#include "banach/moduli.hpp"
#include "banach/scalar_checks.hpp"
#include "banach/search.hpp"

using namespace banach;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Collects failures for one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
    if (!ok) ++failed;
  }
  long failed = 0;
};

std::string g(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

Outcome fn_sharpness() {
  Outcome o;
  double worst_low = kInf;
  for (int n : {2, 3, 5, 10})
    for (double p : {1.0, 2.0, 3.0}) {
      const auto nc = make_fn(n, kInf, p);
      const double v = barycenter_ratio(nc.config).value;
      const double lower = 2.0 * std::pow(1.5 - 1.0 / n, p);
      const double upper = general_bound(p);
      worst_low = std::min(worst_low, v - lower);
      const std::string tag = "n=" + std::to_string(n) + " p=" + g(p) + " ratio=" + g(v);
      o.expect(v >= lower - 1e-4, tag + " below " + g(lower));
      o.expect(v <= upper + 1e-7, tag + " above " + g(upper));
    }
  o.detail = "min(ratio - lower) = " + g(worst_low);
  return o;
}

Outcome bipartite_metric() {
  Outcome o;
  double worst = 0.0;
  for (int n : {1, 2, 4, 100})
    for (double p : {1.0, 2.0, 3.0}) {
      const auto nc = make_bipartite(n, p);
      const double v = metric_barycenter_ratio(nc.config).value;
      const double expect = (n - 1.0) / n * std::pow(2.0, p) + 1.0;
      worst = std::max(worst, std::abs(v - expect));
      const std::string tag = "n=" + std::to_string(n) + " p=" + g(p) + " ratio=" + g(v);
      o.expect(std::abs(v - expect) <= 1e-12, tag + " expected " + g(expect));
      o.expect(v <= metric_bound(p), tag + " above 2^p + 1");
    }
  o.detail = "max |ratio - (n-1)/n 2^p - 1| = " + g(worst);
  return o;
}

Outcome jensen_branches() {
  Outcome o;
  double worst = 0.0;
  auto agree = [&](const NamedConstruction& nc, const std::string& tag) {
    const double v = jensen_ratio(nc.config.X, nc.config.p).value;
    worst = std::max(worst, std::abs(v - nc.predicted));
    o.expect(std::abs(v - nc.predicted) <= 1e-10, tag + " computed " + g(v) + " predicted " + g(nc.predicted));
    return v;
  };
  agree(make_jensen(JensenKind::TwoPoint, {3.0}), "two_point p=3");
  agree(make_jensen(JensenKind::Eps, {2.0, 0.01}), "eps(0.01) p=2");
  agree(make_jensen(JensenKind::Basis, {2.0, 0.5, 10, 2.0}), "basis(10,2) p=2");

  // One (p, q) inside each range of c, paired with the family realizing that branch.
  struct Branch {
    int range;
    PQ pq;
    JensenKind kind;
  };
  const Branch branches[] = {{0, {1.5, 1.8}, JensenKind::TwoPoint},
                             {1, {2.0, 1.5}, JensenKind::Rademacher},
                             {2, {2.0, 4.0}, JensenKind::Basis},
                             {3, {4.0, 3.0}, JensenKind::Eps}};
  std::string gaps;
  for (const auto& b : branches) {
    const auto ranges = c_exponent_ranges(b.pq);
    o.expect(ranges[std::size_t(b.range)].has_value(), "range " + std::to_string(b.range + 1) + " sample outside");
    const double target = std::pow(2.0, c_exponent(b.pq));
    const auto nc = make_jensen(b.kind, {b.pq.p, 1e-4, 200, b.pq.q});
    const double v = agree(nc, "range " + std::to_string(b.range + 1));
    o.expect(v > target - 0.05, "range " + std::to_string(b.range + 1) + " ratio " + g(v) + " <= " + g(target - 0.05));
    gaps += (gaps.empty() ? "" : ", ") + g(v - target);
  }
  o.detail = "max |computed - predicted| = " + g(worst) + "; ratio - 2^c per range: " + gaps;
  return o;
}

// A point (p, q) inside range k (0-based) of the roundness exponent.
PQ sample_range(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto lerp = [&](double a, double b) { return a + (b - a) * u(rng); };
  switch (k) {
    case 0: {
      const double p = lerp(2.0, 6.0);
      return {p, lerp(p / (p - 1.0), p)};
    }
    case 1: {
      const double q = lerp(2.0, 6.0);
      return {lerp(q / (q - 1.0), q), q};
    }
    default: {
      const double q = lerp(1.0, 2.0);
      return {lerp(1.0, q), q};
    }
  }
}

FiniteDist random_dist(std::mt19937_64& rng, const Space& s, std::size_t atoms, std::size_t dim) {
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<Point> pts;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    std::vector<cplx> e(dim);
    for (auto& z : e) z = {n(rng), n(rng)};
    pts.push_back(CVector::unit(std::move(e)));
    w.push_back(u(rng));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return FiniteDist(s, std::move(pts), std::move(w));
}

Outcome roundness_sharpness() {
  Outcome o;
  double worst = 0.0;
  for (PQ pq : {PQ{2, 2}, PQ{3, 3}, PQ{4, 2}, PQ{2, 4}}) {
    const auto nc = make_disjoint_bernoulli(12, pq.q, pq.p);
    const double v = roundness_ratio(nc.config).value;
    const double expect = (1.0 - 1.0 / 12.0) * std::pow(2.0, 1.0 + pq.p * (pq.q - 2.0) / pq.q);
    worst = std::max(worst, std::abs(v - expect));
    o.expect(std::abs(v - expect) <= 1e-9, "(p,q)=(" + g(pq.p) + "," + g(pq.q) + ") ratio " + g(v) + " expected " +
                                               g(expect));
  }
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> atoms(1, 4);
  double max_excess = -kInf;
  for (int range : {0, 1, 4})
    for (int seed = 0; seed < 500; ++seed) {
      const PQ pq = sample_range(rng, range == 4 ? 2 : range);
      o.expect(C_exponent_ranges(pq)[std::size_t(range)].has_value(), "sample outside range");
      const Space s = Space::lq(pq.q);
      const Config c(random_dist(rng, s, std::size_t(atoms(rng)), 3), random_dist(rng, s, std::size_t(atoms(rng)), 3),
                     pq.p);
      const double v = roundness_ratio(c).value;
      const double bound = std::pow(2.0, C_exponent(pq));
      max_excess = std::max(max_excess, v - bound);
      o.expect(v <= bound + 1e-7, "range " + std::to_string(range + 1) + " ratio " + g(v) + " > 2^C = " + g(bound));
    }
  o.detail = "max deviation " + g(worst) + "; max(ratio - 2^C) over 1500 configs = " + g(max_excess);
  return o;
}

Outcome schatten_gap() {
  Outcome o;
  const auto nc = make_schatten_parallelogram(64, 1.0);
  const double v = roundness_ratio(nc.config).value;
  const double lower = 63.0 / 64.0 * 2.0 * std::numbers::sqrt2;
  o.expect(v >= lower - 1e-9, "ratio " + g(v) + " below " + g(lower));
  o.expect(v <= 4.0, "ratio " + g(v) + " above 4");
  o.detail = "ratio = " + g(v) + " (2 sqrt 2 = " + g(2.0 * std::numbers::sqrt2) + ")";
  return o;
}

Outcome scalar_suites() {
  Outcome o;
  std::string counts;
  for (const char* name : {"alpha", "beta", "subadditivity", "smoothing", "hilbert"}) {
    const auto r = run_check_suite(name);
    o.expect(r.pass(), std::string(name) + ": " + std::to_string(r.violations) + " violations");
    counts += std::string(counts.empty() ? "" : ", ") + name + " " + std::to_string(r.violations) + "/" +
              std::to_string(r.checked);
  }
  SuiteOptions beta;
  beta.params = {1.5, 2.5};
  const auto b = run_check_suite("beta", beta);
  for (const auto& row : b.rows) o.expect(row[4] == "true" && row[3] == "true", "q=" + row[0] + " not detected");
  o.detail = "violations/checked: " + counts;
  return o;
}

Outcome log_identities() {
  Outcome o;
  SuiteOptions opts;
  opts.tolerance = 1e-6;
  double worst = 0.0;
  for (const char* name : {"cosine", "laplace"}) {
    const auto r = run_check_suite(name, opts);
    o.expect(r.pass(), std::string(name) + ": " + std::to_string(r.violations) + " violations");
    o.expect(r.checked == (std::string(name) == "cosine" ? 50 : 20), std::string(name) + ": wrong instance count");
    for (const auto& row : r.rows) worst = std::max(worst, std::abs(std::stod(row.back())));
  }
  o.detail = "max deviation = " + g(worst);
  return o;
}

Outcome constants_algebra() {
  Outcome o;
  const int N = 200;
  double worst = 0.0;
  auto near = [&](double a, double b, const std::string& what) {
    worst = std::max(worst, std::abs(a - b));
    o.expect(std::abs(a - b) <= 1e-12, what + ": " + g(a) + " vs " + g(b));
  };
  long snow = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const PQ pq{1.0 + 7.0 * i / (N - 1), 1.0 + 7.0 * j / (N - 1)};
      const double p = pq.p, q = pq.q;
      const std::string at = "(" + g(p) + "," + g(q) + ")";
      const double c = c_exponent(pq);
      near(c, std::min({1.0, p - 1.0, p / q, p * (q - 1.0) / q}), "c min form " + at);
      for (const auto& v : c_exponent_ranges(pq))
        if (v) near(c, *v, "c piecewise " + at);
      const double Copt = C_opt_exponent(pq);
      near(Copt, std::max({1.0, p - 1.0, p * (q - 2.0) / q + 1.0}), "C_opt max form " + at);
      for (const auto& v : C_opt_exponent_ranges(pq))
        if (v) near(Copt, *v, "C_opt piecewise " + at);
      const auto Cr = C_exponent_ranges(pq);
      const int range = C_range(pq);
      o.expect(Cr[std::size_t(range)].has_value(), "C range " + at);
      near(C_exponent(pq), *Cr[std::size_t(range)], "C piecewise " + at);
      near(c, p * theta_max(pq) / 2.0, "c = p theta_max / 2 " + at);
      o.expect(bm_bound(pq) <= general_bound(p), "bm > general " + at);
      if (1.0 / p + 1.0 / q >= 1.0) {
        ++snow;
        near(snowflake_exponent(pq).value, std::max(p / q, 2.0 - p / q), "snowflake " + at);
      }
    }
  o.detail = std::to_string(N * N) + " grid points, " + std::to_string(snow) +
             " snowflake points; max deviation = " + g(worst);
  return o;
}

Outcome search_checks() {
  Outcome o;
  SearchSpec spec;
  spec.space = Space::lq(3.0);
  spec.p = 2.0;
  spec.budget = 3000;
  spec.restarts = 4;
  spec.seed = 12345;
  auto run_with = [&](const char* threads) {
    setenv("MODULI_THREADS", threads, 1);
    return to_json(run_search(spec)).dump();
  };
  const std::string a = run_with("1"), b = run_with("4"), c = run_with("4");
  unsetenv("MODULI_THREADS");
  o.expect(a == b && b == c, "fixed-seed search output differs between runs");

  SearchSpec real;
  real.space = Space::real_line();
  real.p = 1.0;
  real.budget = 100000;
  real.seed = 7;
  const auto r = run_search(real);
  double top = 0.0;
  for (const auto& e : r.trace) {
    top = std::max(top, e.ratio);
    o.expect(e.ratio <= 2.0 + 1e-9, "trace ratio " + g(e.ratio) + " at " + std::to_string(e.iteration));
  }
  o.expect(r.best_ratio <= 2.0 + 1e-9, "best ratio " + g(r.best_ratio));
  o.expect(certify_ratio(r.best_config, SearchObjective::Roundness) == r.best_ratio, "certificate mismatch");
  o.detail = "bitwise identical over 3 runs; real line p=1 best = " + g(r.best_ratio) + " after " +
             std::to_string(r.accepted) + " accepted moves";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"F_n barycenter sharpness", 5.0, fn_sharpness},
      {"K_{n,n} metric barycenter", 1.0, bipartite_metric},
      {"Jensen modulus branches", 10.0, jensen_branches},
      {"roundness sharpness and L_q range sweep", 60.0, roundness_sharpness},
      {"Schatten parallelogram gap", 5.0, schatten_gap},
      {"scalar property suites", 30.0, scalar_suites},
      {"L_0 log identities", 10.0, log_identities},
      {"constants algebra", 2.0, constants_algebra},
      {"search determinism and soundness", 60.0, search_checks},
  };
  int failed = 0, index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.expect(secs < c.limit_s, "runtime " + g(secs) + " s over limit " + g(c.limit_s) + " s");
    const bool pass = o.failed == 0;
    if (!pass) ++failed;
    std::printf("%s %d %s (%.2f s, limit %g s): %s\n", pass ? "PASS" : "FAIL", index, c.name, secs, c.limit_s,
                o.detail.c_str());
    for (const auto& f : o.failures) std::printf("     %s\n", f.c_str());
    if (o.failed > long(o.failures.size()))
      std::printf("     ... %ld failures in total\n", o.failed);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
