#include "banach/constructions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace banach {

namespace {

const cplx kI{0.0, 1.0};

std::vector<Point> as_points(const std::vector<std::vector<double>>& rows, const std::vector<double>& weights) {
  std::vector<Point> pts;
  for (const auto& r : rows) pts.push_back(CVector(std::vector<cplx>(r.begin(), r.end()), weights));
  return pts;
}

}  // namespace

std::string to_string(ConstructionId id) {
  switch (id) {
    case ConstructionId::Fn_inf: return "fn_inf";
    case ConstructionId::Fn_q: return "fn_q";
    case ConstructionId::Bipartite: return "bipartite";
    case ConstructionId::DisjointBernoulli: return "disjoint_bernoulli";
    case ConstructionId::JensenTwoPoint: return "jensen_two_point";
    case ConstructionId::JensenEps: return "jensen_eps";
    case ConstructionId::JensenBasis: return "jensen_basis";
    case ConstructionId::JensenRademacher: return "jensen_rademacher";
    case ConstructionId::SchattenParallelogram: return "schatten_parallelogram";
    case ConstructionId::TwoPoint: return "two_point";
    case ConstructionId::EpsAtom: return "eps_atom";
  }
  return "unknown";
}

std::optional<ConstructionId> construction_from_string(const std::string& s) {
  for (int k = 0; k <= int(ConstructionId::EpsAtom); ++k)
    if (to_string(ConstructionId(k)) == s) return ConstructionId(k);
  return std::nullopt;
}

std::string to_string(PredictionKind k) {
  switch (k) {
    case PredictionKind::ExactRatio: return "exact";
    case PredictionKind::LowerBound: return "lower_bound";
    case PredictionKind::UpperBoundLimit: return "upper_bound_limit";
  }
  return "unknown";
}

std::string to_string(Target t) {
  switch (t) {
    case Target::Barycenter: return "barycenter";
    case Target::Mixture: return "mixture";
    case Target::Roundness: return "roundness";
    case Target::Jensen: return "jensen";
    case Target::MetricBarycenter: return "metric_barycenter";
    case Target::SingleBarycenterInverse: return "single_barycenter_inverse";
  }
  return "unknown";
}

NamedConstruction make_fn(int n, double q, double p) {
  if (n < 2) throw std::invalid_argument("make_fn: n must be >= 2");
  if (!(q >= 1.0)) throw std::invalid_argument("make_fn: q must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("make_fn: p must be >= 1");
  const std::int64_t N = n;
  const std::size_t len = 2 * std::size_t(n);
  std::vector<std::vector<double>> a_rows, b_rows;
  for (std::int64_t j = 0; j < N; ++j) {
    std::vector<std::int64_t> a(len), b(len);
    for (std::int64_t k = 0; k < N; ++k) {
      a[k] = k == j ? 3 * N - 2 : -(N + 2);
      a[N + k] = N - 2;
      b[k] = N - 2;
      b[N + k] = k == j ? 3 * N - 2 : -(N + 2);
    }
    std::int64_t sa = 0, sb = 0;
    for (std::size_t k = 0; k < len; ++k) {
      sa += a[k];
      sb += b[k];
    }
    if (sa != 0 || sb != 0) throw std::logic_error("make_fn: atom outside the zero-sum hyperplane");
    a_rows.emplace_back(a.begin(), a.end());
    b_rows.emplace_back(b.begin(), b.end());
  }
  const Space space = Space::lq(q, true);
  const std::vector<double> w(len, 1.0);
  Config cfg(FiniteDist::uniform(space, as_points(a_rows, w)), FiniteDist::uniform(space, as_points(b_rows, w)), p);

  const double nn = n;
  if (std::isinf(q)) {
    return {ConstructionId::Fn_inf, {{"n", nn}, {"q", q}, {"p", p}}, std::move(cfg),
            2.0 * std::pow((3.0 * nn - 2.0) / (2.0 * nn), p), PredictionKind::ExactRatio, Target::Barycenter};
  }
  const double s = std::pow(3.0 * nn - 2.0, q) + (nn - 1.0) * std::pow(nn + 2.0, q) + nn * std::pow(std::abs(nn - 2.0), q);
  const double predicted = 2.0 * std::pow(s, p / q) / std::pow(2.0 * nn, p * (q + 1.0) / q);
  return {ConstructionId::Fn_q, {{"n", nn}, {"q", q}, {"p", p}}, std::move(cfg), predicted, PredictionKind::LowerBound,
          Target::Barycenter};
}

NamedConstruction make_bipartite(int n, double p) {
  if (n < 1) throw std::invalid_argument("make_bipartite: n must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("make_bipartite: p must be >= 1");
  const Space space = Space::bipartite(std::size_t(n));
  std::vector<Point> left, right;
  for (int i = 0; i < n; ++i) {
    left.push_back(Vertex{Side::Left, std::size_t(i)});
    right.push_back(Vertex{Side::Right, std::size_t(i)});
  }
  Config cfg(FiniteDist::uniform(space, left), FiniteDist::uniform(space, right), p);
  const double predicted = (double(n) - 1.0) / double(n) * std::pow(2.0, p) + 1.0;
  return {ConstructionId::Bipartite, {{"n", double(n)}, {"p", p}}, std::move(cfg), predicted, PredictionKind::ExactRatio,
          Target::MetricBarycenter};
}

std::vector<std::vector<double>> rademacher_system(int n) {
  if (n < 1) throw std::invalid_argument("rademacher_system: n must be >= 1");
  std::vector<std::vector<double>> rows;
  if (n <= 14) {
    const std::size_t len = std::size_t(1) << n;
    for (int i = 0; i < n; ++i) {
      std::vector<double> r(len);
      for (std::size_t w = 0; w < len; ++w) r[w] = (w >> i) & 1u ? -1.0 : 1.0;
      rows.push_back(std::move(r));
    }
    return rows;
  }
  if (n > 1 << 16) throw std::invalid_argument("rademacher_system: n too large");
  std::size_t len = 1;
  while (len <= std::size_t(n)) len <<= 1;
  // Walsh function w_a(x) = (-1)^{popcount(a & x)}, a = 1..n.
  for (int a = 1; a <= n; ++a) {
    std::vector<double> r(len);
    for (std::size_t x = 0; x < len; ++x) r[x] = __builtin_popcountll(std::size_t(a) & x) & 1 ? -1.0 : 1.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

NamedConstruction make_disjoint_bernoulli(int n, double q, double p) {
  if (n < 1) throw std::invalid_argument("make_disjoint_bernoulli: n must be >= 1");
  if (n > 14) throw std::invalid_argument("make_disjoint_bernoulli: n must be <= 14 (atoms have length 2^(n+1))");
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("make_disjoint_bernoulli: q must lie in [1, inf)");
  if (!(p >= 1.0)) throw std::invalid_argument("make_disjoint_bernoulli: p must be >= 1");
  const auto r = rademacher_system(n);
  const std::size_t half = r.front().size();
  const std::vector<double> w(2 * half, 1.0 / double(half));
  std::vector<std::vector<double>> xs, ys;
  for (const auto& ri : r) {
    std::vector<double> x(2 * half, 0.0), y(2 * half, 0.0);
    std::copy(ri.begin(), ri.end(), x.begin());
    std::copy(ri.begin(), ri.end(), y.begin() + std::ptrdiff_t(half));
    xs.push_back(std::move(x));
    ys.push_back(std::move(y));
  }
  const Space space = Space::lq(q);
  Config cfg(FiniteDist::uniform(space, as_points(xs, w)), FiniteDist::uniform(space, as_points(ys, w)), p);
  const double predicted = (1.0 - 1.0 / double(n)) * std::pow(2.0, 1.0 + p * (q - 2.0) / q);
  return {ConstructionId::DisjointBernoulli, {{"n", double(n)}, {"q", q}, {"p", p}}, std::move(cfg), predicted,
          PredictionKind::ExactRatio, Target::Roundness};
}

NamedConstruction make_jensen(JensenKind kind, const JensenParams& jp) {
  const double p = jp.p;
  if (!(p >= 1.0)) throw std::invalid_argument("make_jensen: p must be >= 1");
  auto single = [&](FiniteDist d) { return Config(d, d, p); };
  switch (kind) {
    case JensenKind::TwoPoint: {
      const Space s = Space::real_line();
      return {ConstructionId::JensenTwoPoint, {{"p", p}},
              single(FiniteDist::uniform(s, {CVector::real({-1.0}), CVector::real({1.0})})), std::pow(2.0, p - 1.0),
              PredictionKind::ExactRatio, Target::Jensen};
    }
    case JensenKind::Eps: {
      const double e = jp.eps;
      if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("make_jensen: eps must lie in (0, 1)");
      const Space s = Space::real_line();
      FiniteDist d(s, {CVector::real({1.0}), CVector::real({0.0})}, {e, 1.0 - e});
      const double predicted = 2.0 * e * (1.0 - e) / ((1.0 - e) * std::pow(e, p) + e * std::pow(1.0 - e, p));
      return {ConstructionId::JensenEps, {{"eps", e}, {"p", p}}, single(std::move(d)), predicted,
              PredictionKind::ExactRatio, Target::Jensen};
    }
    case JensenKind::Basis: {
      const int n = jp.n;
      const double q = jp.q;
      if (n < 1) throw std::invalid_argument("make_jensen: n must be >= 1");
      if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("make_jensen: q must lie in [1, inf)");
      std::vector<Point> atoms;
      for (int i = 0; i < n; ++i)
        for (double sign : {1.0, -1.0}) {
          std::vector<cplx> e(std::size_t(n), 0.0);
          e[std::size_t(i)] = sign;
          atoms.push_back(CVector::unit(std::move(e)));
        }
      const double nn = n;
      const double predicted = (nn - 1.0) / nn * std::pow(2.0, p / q) + std::pow(2.0, p) / (2.0 * nn);
      return {ConstructionId::JensenBasis, {{"n", nn}, {"q", q}, {"p", p}},
              single(FiniteDist::uniform(Space::lq(q), std::move(atoms))), predicted, PredictionKind::ExactRatio,
              Target::Jensen};
    }
    case JensenKind::Rademacher: {
      const int n = jp.n;
      const double q = jp.q;
      if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("make_jensen: q must lie in [1, inf)");
      const auto r = rademacher_system(n);
      const std::vector<double> w(r.front().size(), 1.0 / double(r.front().size()));
      std::vector<std::vector<double>> rows;
      for (const auto& ri : r) {
        rows.push_back(ri);
        std::vector<double> neg(ri);
        for (auto& x : neg) x = -x;
        rows.push_back(std::move(neg));
      }
      const double nn = n;
      const double predicted = (nn - 1.0) / nn * std::pow(2.0, p * (q - 1.0) / q) + std::pow(2.0, p) / (2.0 * nn);
      return {ConstructionId::JensenRademacher, {{"n", nn}, {"q", q}, {"p", p}},
              single(FiniteDist::uniform(Space::lq(q), as_points(rows, w))), predicted, PredictionKind::ExactRatio,
              Target::Jensen};
    }
  }
  throw std::invalid_argument("make_jensen: unknown kind");
}

NamedConstruction make_schatten_parallelogram(int n, double p) {
  if (n < 1) throw std::invalid_argument("make_schatten_parallelogram: n must be >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("make_schatten_parallelogram: p must be >= 1");
  const std::size_t len = 2 * std::size_t(n);
  const Space space = Space::parallelogram(std::size_t(n));
  std::vector<Point> xs, ys;
  for (std::size_t k = 0; k < std::size_t(n); ++k) {
    std::vector<cplx> x(len, 0.0), y(len, 0.0);
    x[k] = 1.0;
    y[std::size_t(n) + k] = kI;
    xs.push_back(CVector::unit(std::move(x)));
    ys.push_back(CVector::unit(std::move(y)));
  }
  Config cfg(FiniteDist::uniform(space, xs), FiniteDist::uniform(space, ys), p);
  const double predicted = (1.0 - 1.0 / double(n)) * std::pow(2.0, p / 2.0 + 1.0);
  return {ConstructionId::SchattenParallelogram, {{"n", double(n)}, {"p", p}}, std::move(cfg), predicted,
          PredictionKind::ExactRatio, Target::Roundness};
}

NamedConstruction make_two_point(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("make_two_point: p must be >= 1");
  const Space s = Space::real_line();
  const auto u = FiniteDist::uniform(s, {CVector::real({0.0}), CVector::real({1.0})});
  Config cfg(u, u, p);
  return {ConstructionId::TwoPoint, {{"p", p}}, std::move(cfg), std::pow(2.0, 2.0 - p), PredictionKind::ExactRatio,
          Target::Barycenter};
}

NamedConstruction make_eps_atom(double eps, double p) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("make_eps_atom: eps must lie in (0, 1)");
  if (!(p > 1.0)) throw std::invalid_argument("make_eps_atom: p must be > 1");
  const Space s = Space::real_line();
  FiniteDist d(s, {CVector::real({1.0}), CVector::real({0.0})}, {eps, 1.0 - eps});
  const double e = 1.0 / (p - 1.0);
  const double predicted = 2.0 * std::pow(std::pow(eps, e) + std::pow(1.0 - eps, e), p - 1.0);
  return {ConstructionId::EpsAtom, {{"eps", eps}, {"p", p}}, Config(d, d, p), predicted, PredictionKind::ExactRatio,
          Target::SingleBarycenterInverse};
}

Verification verify(const NamedConstruction& nc, const BarycenterOptions& opts) {
  Verification v{};
  v.predicted = nc.predicted;
  bool solver = false;
  switch (nc.target) {
    case Target::Barycenter:
      v.report = barycenter_ratio(nc.config, opts);
      solver = true;
      break;
    case Target::Mixture: v.report = mixture_ratio(nc.config); break;
    case Target::Roundness: v.report = roundness_ratio(nc.config); break;
    case Target::Jensen: v.report = jensen_ratio(nc.config.X, nc.config.p); break;
    case Target::MetricBarycenter: v.report = metric_barycenter_ratio(nc.config); break;
    case Target::SingleBarycenterInverse: {
      const BarycenterCert cert = minimize_barycenter(nc.config, opts);
      const double cross = cross_moment(nc.config.X, nc.config.Y, nc.config.p);
      // With X = Y in law the two-term objective is twice the single term.
      v.computed = cross / (0.5 * cert.value);
      solver = true;
      break;
    }
  }
  if (v.report) v.computed = v.report->value;
  v.slack = v.predicted - v.computed;
  switch (nc.prediction_kind) {
    case PredictionKind::ExactRatio:
      v.tolerance = (solver ? 1e-4 : 1e-6) * std::max(1.0, std::abs(v.predicted));
      v.pass = std::abs(v.slack) <= v.tolerance;
      break;
    case PredictionKind::LowerBound:
      v.tolerance = 1e-7;
      v.pass = v.computed >= v.predicted - v.tolerance;
      break;
    case PredictionKind::UpperBoundLimit:
      v.tolerance = 1e-7;
      v.pass = v.computed <= v.predicted + v.tolerance;
      break;
  }
  return v;
}

}  // namespace banach
