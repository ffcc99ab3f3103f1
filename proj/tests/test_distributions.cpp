#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "banach/distributions.hpp"

using namespace banach;

namespace {

Point r(double x) { return CVector::real({x}); }

FiniteDist random_dist(std::mt19937_64& rng, const Space& s, std::size_t atoms, std::size_t dim) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<Point> pts;
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    std::vector<cplx> e(dim);
    for (auto& z : e) z = {g(rng), g(rng)};
    pts.push_back(CVector::unit(std::move(e)));
    w.push_back(u(rng));
    total += w.back();
  }
  for (auto& x : w) x /= total;
  return FiniteDist(s, std::move(pts), std::move(w));
}

}  // namespace

TEST_CASE("FiniteDist validation") {
  const Space s = Space::real_line();
  CHECK_THROWS(FiniteDist(s, {r(0)}, {0.9}));
  CHECK_THROWS(FiniteDist(s, {r(0), r(1)}, {1.5, -0.5}));
  CHECK_THROWS(FiniteDist(s, {}, {}));
  CHECK_THROWS(FiniteDist(s, {Vertex{}}, {1.0}));
  CHECK_THROWS(FiniteDist(Space::lq(2.0), {CVector::real({1, 2}), CVector::real({1})}, {0.5, 0.5}));
  CHECK_NOTHROW(FiniteDist(s, {r(0), r(1)}, {0.25, 0.75}));
  CHECK_THROWS(Config(FiniteDist::dirac(s, r(0)), FiniteDist::dirac(Space::lq(1.0), r(0)), 1.0));
  CHECK_THROWS(Config(FiniteDist::dirac(s, r(0)), FiniteDist::dirac(s, r(0)), 0.0));
}

TEST_CASE("mixture examples") {
  const Space s = Space::real_line();
  const auto m = mixture(FiniteDist::dirac(s, r(0)), FiniteDist::dirac(s, r(1)));
  CHECK(m.size() == 2);
  CHECK(m.probs()[0] == 0.5);
  CHECK(m.probs()[1] == 0.5);

  const auto x = FiniteDist::uniform(s, {r(0), r(1)});
  const auto mx = mixture(x, x);
  CHECK(mx.atoms() == x.atoms());
  CHECK(mx.probs() == x.probs());

  const auto mixed = mixture(x, FiniteDist::dirac(s, r(0)));
  REQUIRE(mixed.size() == 2);
  CHECK(mixed.atoms()[0] == r(0));
  CHECK(mixed.probs()[0] == 0.75);
  CHECK(mixed.probs()[1] == 0.25);

  CHECK_THROWS(mixture(x, FiniteDist::dirac(Space::lq(2.0), r(0))));
}

TEST_CASE("cross and self moments") {
  // F_n with n = 2 in l_inf^4: every cross distance is 2n = 4.
  const Space linf = Space::lq(std::numeric_limits<double>::infinity(), true);
  const auto a = FiniteDist::uniform(linf, {CVector::real({4, -4, 0, 0}), CVector::real({-4, 4, 0, 0})});
  const auto b = FiniteDist::uniform(linf, {CVector::real({0, 0, 4, -4}), CVector::real({0, 0, -4, 4})});
  CHECK(cross_moment(a, b, 1.0) == 4.0);

  const Space s = Space::real_line();
  CHECK(cross_moment(FiniteDist::dirac(s, r(2)), FiniteDist::dirac(s, r(2)), 1.5) == 0.0);

  const Space g = Space::bipartite(2);
  const auto left = FiniteDist::uniform(g, {Vertex{Side::Left, 0}, Vertex{Side::Left, 1}});
  const auto right = FiniteDist::uniform(g, {Vertex{Side::Right, 0}, Vertex{Side::Right, 1}});
  CHECK(cross_moment(left, right, 3.0) == 1.0);

  CHECK(self_moment(FiniteDist::uniform(s, {r(-1), r(1)}), 2.0) == 2.0);
  CHECK(self_moment(FiniteDist::dirac(s, r(5)), 2.0) == 0.0);

  // uniform{+-e1, +-e2} in l_1^2: per point 0 + 2 + 2 + 2 over 4 partners.
  const Space l1 = Space::lq(1.0);
  const auto pm = FiniteDist::uniform(
      l1, {CVector::real({1, 0}), CVector::real({-1, 0}), CVector::real({0, 1}), CVector::real({0, -1})});
  double oracle = 0.0;
  const double pts[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (auto& u : pts)
    for (auto& v : pts) oracle += (std::abs(u[0] - v[0]) + std::abs(u[1] - v[1])) / 16.0;
  CHECK(oracle == 1.5);
  CHECK(self_moment(pm, 1.0) == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("mean and centered moment") {
  const Space s = Space::real_line();
  CHECK(mean(FiniteDist::uniform(s, {r(-1), r(1)})) == r(0));
  CHECK(centered_moment(FiniteDist::uniform(s, {r(-1), r(1)}), 5.0) == 1.0);
  CHECK(centered_moment(FiniteDist::dirac(s, r(3)), 2.0) == 0.0);

  const FiniteDist eps(s, {r(1.0), r(0.0)}, {0.1, 0.9});
  CHECK(std::get<CVector>(mean(eps)).entries[0].real() == doctest::Approx(0.1).epsilon(1e-15));

  const Space l3 = Space::lq(3.0);
  std::vector<Point> basis;
  for (int i = 0; i < 4; ++i)
    for (double sg : {1.0, -1.0}) {
      std::vector<cplx> e(4, 0.0);
      e[std::size_t(i)] = sg;
      basis.push_back(CVector::unit(e));
    }
  const auto bd = FiniteDist::uniform(l3, basis);
  const Point mu = mean(bd);
  for (const auto& z : std::get<CVector>(mu).entries) CHECK(std::abs(z) < 1e-15);
  CHECK(centered_moment(bd, 2.5) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS(mean(FiniteDist::dirac(Space::bipartite(2), Vertex{})));
  CHECK_THROWS(mean(FiniteDist::dirac(Space::snowflake(s, 0.5), r(0))));
}

TEST_CASE("log cross moment") {
  const Space s = Space::real_line();
  CHECK(log_cross_moment(FiniteDist::dirac(s, r(0)), FiniteDist::dirac(s, r(1))) == 0.0);
  CHECK(log_cross_moment(FiniteDist::dirac(s, r(2)), FiniteDist::dirac(s, r(2))) ==
        -std::numeric_limits<double>::infinity());
  const auto x = FiniteDist::uniform(s, {r(0), r(2)});
  const auto y = FiniteDist::uniform(s, {r(1), r(3)});
  // Pairs: |0-1|, |0-3|, |2-1|, |2-3| = 1, 3, 1, 1.
  CHECK(log_cross_moment(x, y) == doctest::Approx(std::log(3.0) / 4.0).epsilon(1e-15));
}

TEST_CASE("mixture second-moment identity") {
  std::mt19937_64 rng(99);
  for (double p : {0.5, 1.0, 1.7, 2.0, 3.0}) {
    for (const Space& s : {Space::lq(1.0), Space::lq(2.5), Space::lq(std::numeric_limits<double>::infinity())}) {
      for (int t = 0; t < 20; ++t) {
        const auto x = random_dist(rng, s, 1 + t % 4, 3);
        const auto y = random_dist(rng, s, 1 + (t / 2) % 5, 3);
        const auto z = mixture(x, y);
        const double lhs = cross_moment(z, z, p);
        const double rhs = 0.5 * cross_moment(x, y, p) + 0.25 * self_moment(x, p) + 0.25 * self_moment(y, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        CHECK(cross_moment(x, y, p) == doctest::Approx(cross_moment(y, x, p)).epsilon(1e-12));
        CHECK(cross_moment(x, y, p) >= 0.0);
      }
    }
  }
}

TEST_CASE("Jensen baseline") {
  std::mt19937_64 rng(5);
  for (double p : {1.0, 1.5, 2.0, 4.0})
    for (int t = 0; t < 50; ++t) {
      const auto x = random_dist(rng, Space::lq(1.0 + t % 4), 1 + t % 6, 4);
      CHECK(centered_moment(x, p) <= self_moment(x, p) * (1 + 1e-12) + 1e-15);
    }
}
