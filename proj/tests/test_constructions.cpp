#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "banach/constructions.hpp"

using namespace banach;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// min over u of the symmetrized F_n objective, by a grid plus golden-section
// polish; the objective is convex in u.
double fn_u_oracle(int n, double q, double p) {
  const double N = n;
  auto f = [&](double u) {
    const double x = std::pow(std::pow(std::abs(3 * N - 2 - u), q) + (N - 1) * std::pow(std::abs(N + 2 + u), q) +
                                  N * std::pow(std::abs(N - 2 + u), q),
                              p / q);
    const double y = std::pow(std::pow(std::abs(3 * N - 2 + u), q) + (N - 1) * std::pow(std::abs(N + 2 - u), q) +
                                  N * std::pow(std::abs(N - 2 - u), q),
                              p / q);
    return x + y;
  };
  double best_u = 0.0, best = kInf;
  for (int i = -3000; i <= 3000; ++i) {
    const double u = 3.0 * N * i / 3000.0;
    if (f(u) < best) {
      best = f(u);
      best_u = u;
    }
  }
  double a = best_u - 3.0 * N / 1500.0, b = best_u + 3.0 * N / 1500.0;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return std::min(best, f(0.5 * (a + b))) / std::pow(2.0 * N, p * (q + 1.0) / q);
}

Point permute(const Point& x, const std::vector<std::size_t>& perm) {
  const auto& v = std::get<CVector>(x);
  std::vector<cplx> e(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) e[perm[k]] = v.entries[k];
  return CVector(std::move(e), v.weights);
}

FiniteDist permute(const FiniteDist& d, const std::vector<std::size_t>& perm) {
  std::vector<Point> atoms;
  for (const auto& a : d.atoms()) atoms.push_back(permute(a, perm));
  return FiniteDist(d.space(), std::move(atoms), d.probs());
}

}  // namespace

TEST_CASE("F_n examples") {
  const auto a = make_fn(2, kInf, 1.0);
  CHECK(a.predicted == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(a.prediction_kind == PredictionKind::ExactRatio);
  CHECK(a.id == ConstructionId::Fn_inf);
  CHECK(make_fn(5, kInf, 2.0).predicted == doctest::Approx(3.38).epsilon(1e-14));
  const auto q3 = make_fn(3, 3.0, 3.0);
  CHECK(q3.predicted == doctest::Approx(2.0 * 596.0 / 1296.0).epsilon(1e-14));
  CHECK(q3.prediction_kind == PredictionKind::LowerBound);
  CHECK(q3.id == ConstructionId::Fn_q);
  CHECK_THROWS(make_fn(1, kInf, 1.0));
}

TEST_CASE("F_n membership and cross distances") {
  for (int n : {2, 3, 5, 9}) {
    for (double q : {1.0, 2.0, 3.0, kInf}) {
      const auto fn = make_fn(n, q, 1.0);
      CHECK(fn.config.X.size() == std::size_t(n));
      for (const FiniteDist* d : {&fn.config.X, &fn.config.Y})
        for (const auto& a : d->atoms()) {
          const auto& v = std::get<CVector>(a);
          cplx s = 0.0;
          for (const auto& z : v.entries) {
            s += z;
            CHECK(z.real() == std::round(z.real()));
          }
          CHECK(s == cplx(0.0));
        }
      // Every entry of a - b is +-2n.
      const double expect = std::isinf(q) ? 2.0 * n : std::pow(2.0 * n, 1.0 + 1.0 / q);
      for (const auto& x : fn.config.X.atoms())
        for (const auto& y : fn.config.Y.atoms())
          CHECK(fn.config.space().distance(x, y) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("F_n with finite q against the u-grid oracle") {
  for (int n : {2, 3, 4})
    for (double q : {1.5, 2.0, 3.0})
      for (double p : {1.0, 2.0, 3.0}) {
        const auto fn = make_fn(n, q, p);
        const double oracle = fn_u_oracle(n, q, p);
        CHECK(fn.predicted == doctest::Approx(oracle).epsilon(1e-9));
        const auto v = verify(fn);
        CHECK(v.pass);
        CHECK(v.computed == doctest::Approx(oracle).epsilon(1e-4));
      }
}

TEST_CASE("permutation invariance of F_n") {
  std::mt19937_64 rng(11);
  for (int n : {3, 4, 6}) {
    for (double q : {1.0, 2.5, kInf}) {
      const auto fn = make_fn(n, q, 1.5);
      std::vector<std::size_t> sigma(static_cast<std::size_t>(n)), rho(static_cast<std::size_t>(n));
      std::iota(sigma.begin(), sigma.end(), 0);
      std::iota(rho.begin(), rho.end(), 0);
      std::shuffle(sigma.begin(), sigma.end(), rng);
      std::shuffle(rho.begin(), rho.end(), rng);
      std::vector<std::size_t> perm;
      for (auto s : sigma) perm.push_back(s);
      for (auto r : rho) perm.push_back(std::size_t(n) + r);

      const Config& c = fn.config;
      const Config t(permute(c.X, perm), permute(c.Y, perm), c.p);
      CHECK(cross_moment(t.X, t.Y, c.p) == doctest::Approx(cross_moment(c.X, c.Y, c.p)).epsilon(1e-12));
      CHECK(self_moment(t.X, c.p) == doctest::Approx(self_moment(c.X, c.p)).epsilon(1e-12));
      CHECK(self_moment(t.Y, c.p) == doctest::Approx(self_moment(c.Y, c.p)).epsilon(1e-12));
      CHECK(roundness_ratio(t).value == doctest::Approx(roundness_ratio(c).value).epsilon(1e-12));
      CHECK(mixture_ratio(t).value == doctest::Approx(mixture_ratio(c).value).epsilon(1e-12));

      std::normal_distribution<double> g;
      std::vector<cplx> z(2 * std::size_t(n));
      cplx sum = 0.0;
      for (auto& e : z) sum += (e = g(rng));
      for (auto& e : z) e -= sum / double(z.size());
      const Point zp = CVector(z, std::vector<double>(z.size(), 1.0));
      CHECK(barycenter_objective(t, permute(zp, perm)) == doctest::Approx(barycenter_objective(c, zp)).epsilon(1e-12));
    }
  }
}

TEST_CASE("bipartite examples") {
  CHECK(make_bipartite(1, 1.0).predicted == 1.0);
  CHECK(verify(make_bipartite(1, 1.0)).computed == doctest::Approx(1.0));
  CHECK(make_bipartite(4, 2.0).predicted == 4.0);
  const auto big = make_bipartite(100, 1.0);
  CHECK(big.predicted == doctest::Approx(2.98).epsilon(1e-14));
  CHECK(verify(big).pass);
  CHECK(big.target == Target::MetricBarycenter);
}

TEST_CASE("disjoint Bernoulli examples") {
  const auto a = make_disjoint_bernoulli(8, 2.0, 2.0);
  CHECK(a.predicted == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(verify(a).pass);
  const auto one = make_disjoint_bernoulli(1, 2.0, 3.0);
  CHECK(one.predicted == 0.0);
  CHECK(roundness_ratio(one.config).value == 0.0);
  const auto b = make_disjoint_bernoulli(8, 4.0, 4.0);
  CHECK(roundness_ratio(b.config).value == doctest::Approx(7.0).epsilon(1e-12));
  CHECK_THROWS(make_disjoint_bernoulli(15, 2.0, 2.0));
}

TEST_CASE("disjoint Bernoulli pair distances") {
  for (double q : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    const auto db = make_disjoint_bernoulli(5, q, 1.0);
    const Space& s = db.config.space();
    const auto& xs = db.config.X.atoms();
    const auto& ys = db.config.Y.atoms();
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i != j) {
          CHECK(s.distance(xs[i], xs[j]) == doctest::Approx(std::pow(2.0, (q - 1.0) / q)).epsilon(1e-15));
          CHECK(s.distance(ys[i], ys[j]) == doctest::Approx(std::pow(2.0, (q - 1.0) / q)).epsilon(1e-15));
        }
        CHECK(s.distance(xs[i], ys[j]) == doctest::Approx(std::pow(2.0, 1.0 / q)).epsilon(1e-15));
      }
  }
}

TEST_CASE("Rademacher system") {
  for (int n : {3, 14, 20, 100}) {
    const auto r = rademacher_system(n);
    REQUIRE(r.size() == std::size_t(n));
    const std::size_t len = r.front().size();
    if (n <= 14) CHECK(len == std::size_t(1) << n);
    // Each pair is uniform on {-1,1}^2: mean zero and uncorrelated.
    for (int i = 0; i < n; i += std::max(1, n / 7))
      for (int j = 0; j < n; j += std::max(1, n / 5)) {
        double mi = 0.0, cov = 0.0;
        for (std::size_t w = 0; w < len; ++w) {
          mi += r[std::size_t(i)][w];
          cov += r[std::size_t(i)][w] * r[std::size_t(j)][w];
        }
        CHECK(mi == 0.0);
        CHECK(cov == (i == j ? double(len) : 0.0));
      }
  }
}

TEST_CASE("Jensen constructions") {
  CHECK(make_jensen(JensenKind::TwoPoint, {3.0}).predicted == 4.0);
  const auto e = make_jensen(JensenKind::Eps, {2.0, 0.01});
  CHECK(e.predicted == doctest::Approx(2 * 0.01 * 0.99 / (0.99 * 0.0001 + 0.01 * 0.9801)).epsilon(1e-15));
  // At p = 2 the formula collapses to 2 for every eps.
  CHECK(e.predicted == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(make_jensen(JensenKind::Basis, {2.0, 0.5, 10, 2.0}).predicted == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS(make_jensen(JensenKind::Eps, {2.0, 1.0}));
  CHECK_THROWS(make_jensen(JensenKind::Eps, {2.0, 0.0}));
  for (JensenKind k : {JensenKind::TwoPoint, JensenKind::Eps, JensenKind::Basis, JensenKind::Rademacher})
    for (double p : {1.0, 1.5, 3.0}) {
      const auto nc = make_jensen(k, {p, 0.2, 6, 3.0});
      const auto v = verify(nc);
      CHECK(v.pass);
      CHECK(v.computed == doctest::Approx(nc.predicted).epsilon(1e-12));
    }
  // Large n goes through the Walsh realization.
  const auto big = make_jensen(JensenKind::Rademacher, {3.0, 0.5, 40, 1.5});
  CHECK(verify(big).pass);
}

TEST_CASE("Schatten parallelogram examples") {
  CHECK(make_schatten_parallelogram(16, 1.0).predicted == doctest::Approx(15.0 / 16.0 * 2.0 * std::sqrt(2.0)));
  const auto one = make_schatten_parallelogram(1, 2.0);
  CHECK(one.predicted == 0.0);
  CHECK(roundness_ratio(one.config).value == 0.0);
  const auto four = make_schatten_parallelogram(4, 2.0);
  CHECK(four.predicted == 3.0);
  CHECK(roundness_ratio(four.config).value == doctest::Approx(3.0).epsilon(1e-12));
  // Cross pairs are at distance 1, same-side pairs at 2^(1/2).
  const Space& s = four.config.space();
  CHECK(s.distance(four.config.X.atoms()[0], four.config.Y.atoms()[1]) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.distance(four.config.X.atoms()[0], four.config.X.atoms()[1]) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("two-point and eps-atom") {
  for (double p : {1.0, 2.0, 3.5}) {
    const auto tp = make_two_point(p);
    CHECK(tp.predicted == doctest::Approx(std::pow(2.0, 2.0 - p)));
    CHECK(verify(tp).pass);
  }
  // One-dimensional oracle: minimize eps |1 - r|^p + (1 - eps) |r|^p over r in [0, 1].
  for (double eps : {0.5, 0.1, 0.01})
    for (double p : {1.5, 2.0, 3.0}) {
      double best = kInf;
      for (int i = 0; i <= 200000; ++i) {
        const double r = i / 200000.0;
        best = std::min(best, eps * std::pow(1.0 - r, p) + (1.0 - eps) * std::pow(r, p));
      }
      const auto ea = make_eps_atom(eps, p);
      CHECK(ea.predicted == doctest::Approx(2.0 * eps * (1.0 - eps) / best).epsilon(1e-8));
      CHECK(verify(ea).pass);
    }
  CHECK(make_eps_atom(0.5, 2.0).predicted == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(make_eps_atom(1e-9, 2.0).predicted == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(make_eps_atom(0.1, 3.0).predicted == doctest::Approx(2.0 * std::pow(std::sqrt(0.1) + std::sqrt(0.9), 2.0)));
  CHECK(make_eps_atom(0.1, 3.0).predicted == doctest::Approx(3.2).epsilon(1e-12));
  CHECK_THROWS(make_eps_atom(0.1, 1.0));
}

TEST_CASE("every exact construction verifies") {
  std::vector<NamedConstruction> all;
  for (int n : {2, 3, 7}) all.push_back(make_fn(n, kInf, 1.0 + n % 3));
  all.push_back(make_bipartite(6, 1.5));
  all.push_back(make_disjoint_bernoulli(6, 3.0, 2.0));
  all.push_back(make_schatten_parallelogram(10, 1.0));
  all.push_back(make_two_point(1.5));
  all.push_back(make_eps_atom(0.3, 2.5));
  for (const auto& nc : all) {
    const auto v = verify(nc);
    INFO(to_string(nc.id));
    CHECK(v.pass);
    CHECK(v.slack == doctest::Approx(v.predicted - v.computed));
  }
}

TEST_CASE("names round trip") {
  for (int k = 0; k <= int(ConstructionId::EpsAtom); ++k) {
    const auto id = ConstructionId(k);
    CHECK(construction_from_string(to_string(id)) == id);
  }
  CHECK_FALSE(construction_from_string("nope").has_value());
}
