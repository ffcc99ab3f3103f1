#include "banach/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "banach/constants.hpp"
#include "banach/parallel.hpp"

namespace banach {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<double> ambient_q(const Space& s) {
  if (s.is<WeightedLq>()) return s.as<WeightedLq>().q;
  if (s.is<Schatten>()) return s.as<Schatten>().q;
  return std::nullopt;
}

RatioReport make_report(RatioName name, const Config& c, double num, double den) {
  RatioReport r;
  r.name = name;
  r.numerator = num;
  r.denominator = den;
  r.value = num / den;
  r.p = c.p;
  r.space = c.space().label();
  r.q = ambient_q(c.space());
  return r;
}

void attach_bound(RatioReport& r, std::optional<double> bound, BoundKind kind = BoundKind::Upper) {
  r.bound_kind = kind;
  if (!bound) return;
  r.paper_bound = bound;
  r.slack = *bound - r.value;
}

void require_linear(const Space& s, const char* who) {
  if (!s.is_linear()) throw std::invalid_argument(std::string(who) + ": space " + s.label() + " has no linear structure");
}

// Finite-q WeightedLq without the hyperplane restriction is an honest L_q.
std::optional<double> plain_lq(const Space& s) {
  if (!s.is<WeightedLq>()) return std::nullopt;
  const auto& k = s.as<WeightedLq>();
  if (std::isinf(k.q)) return std::nullopt;
  return k.q;
}

// Upper bound on the barycenter/mixture ratio for the space.
std::optional<double> bm_bound_for(const Space& s, double p, bool restricted_inf) {
  if (p < 1.0) return std::nullopt;
  if (s.is<RealLine>()) return bm_bound({p, 2.0});
  if (s.is<WeightedLq>() && !std::isinf(s.as<WeightedLq>().q) && !(restricted_inf && s.as<WeightedLq>().zero_sum))
    return bm_bound({p, s.as<WeightedLq>().q});
  if (s.is_linear()) return general_bound(p);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Barycenter objective kernel. WeightedLq and RealLine are evaluated on raw
// coordinate arrays; other linear kinds go through the Space interface.

// 1/2 EX + 1/2 EY as raw coordinates.
std::vector<cplx> mixture_mean(const Config& c) {
  const Point ex = mean(c.X);
  const Point ey = mean(c.Y);
  const auto mx = coordinates(ex);
  const auto my = coordinates(ey);
  std::vector<cplx> z(mx.size());
  for (std::size_t k = 0; k < z.size(); ++k) z[k] = 0.5 * mx[k] + 0.5 * my[k];
  return z;
}

class Kernel {
 public:
  explicit Kernel(const Config& c) : c_(c), shape_(c.X.atoms().front()) {
    const Space& s = c.space();
    if (s.is<WeightedLq>()) {
      q_ = s.as<WeightedLq>().q;
      fast_ = true;
    } else if (s.is<RealLine>()) {
      q_ = 1.0;
      fast_ = true;
    }
    if (const auto* v = std::get_if<CVector>(&shape_)) weights_ = v->weights;
    auto add = [&](const FiniteDist& d) {
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.probs()[i] == 0.0) continue;
        const auto co = coordinates(d.atoms()[i]);
        atoms_.emplace_back(co.begin(), co.end());
        mass_.push_back(d.probs()[i]);
      }
    };
    add(c.X);
    add(c.Y);
    dim_ = atoms_.front().size();
  }

  std::size_t dim() const { return dim_; }
  const Point& shape() const { return shape_; }
  const std::vector<std::vector<cplx>>& atoms() const { return atoms_; }

  // Objective at z; adds its subgradient to grad when non-null.
  double eval(const std::vector<cplx>& z, std::vector<cplx>* grad) const {
    if (grad) std::fill(grad->begin(), grad->end(), cplx(0.0));
    double total = 0.0;
    std::vector<cplx> d(dim_);
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      for (std::size_t k = 0; k < dim_; ++k) d[k] = z[k] - atoms_[a][k];
      total += fast_ ? fast_term(d, mass_[a], grad) : generic_term(d, mass_[a], grad);
    }
    return total;
  }

 private:
  double fast_term(const std::vector<cplx>& d, double m, std::vector<cplx>* grad) const {
    const double p = c_.p;
    if (std::isinf(q_)) {
      std::size_t arg = dim_;
      double best = -1.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        if (weights_[k] <= 0.0) continue;
        const double a2 = std::norm(d[k]);
        if (a2 > best) {
          best = a2;
          arg = k;
        }
      }
      if (arg == dim_) throw std::invalid_argument("barycenter: sup norm needs a positive weight");
      const double nrm = std::sqrt(best);
      if (nrm == 0.0) return 0.0;
      const double pw = std::pow(nrm, p);
      if (grad) (*grad)[arg] += m * p * (pw / nrm) * d[arg] / nrm;
      return m * pw;
    }
    double s = 0.0;
    if (q_ == 2.0) {
      for (std::size_t k = 0; k < dim_; ++k) s += weights_[k] * std::norm(d[k]);
      const double nrm = std::sqrt(s);
      if (nrm == 0.0) return 0.0;
      const double pw = std::pow(nrm, p);
      if (grad) {
        const double f = m * p * pw / s;
        for (std::size_t k = 0; k < dim_; ++k) (*grad)[k] += f * weights_[k] * d[k];
      }
      return m * pw;
    }
    if (q_ == 1.0) {
      for (std::size_t k = 0; k < dim_; ++k) s += weights_[k] * std::abs(d[k]);
      if (s == 0.0) return 0.0;
      const double pw = std::pow(s, p);
      if (grad) {
        const double f = m * p * pw / s;
        for (std::size_t k = 0; k < dim_; ++k) {
          const double a = std::abs(d[k]);
          if (a > 0.0) (*grad)[k] += f * weights_[k] * d[k] / a;
        }
      }
      return m * pw;
    }
    for (std::size_t k = 0; k < dim_; ++k) {
      const double a = std::abs(d[k]);
      if (a > 0.0) s += weights_[k] * std::pow(a, q_);
    }
    if (s == 0.0) return 0.0;
    const double nrm = std::pow(s, 1.0 / q_);
    const double pw = std::pow(nrm, p);
    if (grad) {
      // d/dz ||d||^p = p ||d||^(p-q) w_k |d_k|^(q-2) d_k
      const double f = m * p * pw / s;
      for (std::size_t k = 0; k < dim_; ++k) {
        const double a = std::abs(d[k]);
        if (a > 0.0) (*grad)[k] += f * weights_[k] * std::pow(a, q_ - 2.0) * d[k];
      }
    }
    return m * pw;
  }

  double generic_term(const std::vector<cplx>& d, double m, std::vector<cplx>* grad) const {
    const Point diff = with_coordinates(shape_, d);
    const Point zero = with_coordinates(shape_, std::vector<cplx>(dim_, 0.0));
    const double v = c_.space().powered_distance(diff, zero, c_.p);
    if (grad && v > 0.0) accumulate_norm_power_gradient(c_.space(), diff, c_.p, m, *grad);
    return m * v;
  }

  const Config& c_;
  Point shape_;
  bool fast_ = false;
  double q_ = 2.0;
  std::vector<double> weights_;
  std::vector<std::vector<cplx>> atoms_;
  std::vector<double> mass_;
  std::size_t dim_ = 0;
};

struct StartResult {
  std::vector<cplx> z;
  double value = kInf;
  long iterations = 0;
};

void project_zero_sum(std::vector<cplx>& g) {
  cplx s = 0.0;
  for (const auto& x : g) s += x;
  s /= double(g.size());
  for (auto& x : g) x -= s;
}

StartResult descend(const Kernel& kernel, std::vector<cplx> z, double s0, bool zero_sum, const BarycenterOptions& o) {
  StartResult out;
  std::vector<cplx> g(kernel.dim());
  double window_ref = kInf;
  long window_start = 0;
  long k = 1;
  for (; k <= std::max(1L, o.max_iterations); ++k) {
    const double f = kernel.eval(z, &g);
    if (f < out.value || out.z.empty()) {
      out.value = f;
      out.z = z;
    }
    if (k == 1) window_ref = out.value;
    if (o.stall_window > 0 && k - window_start >= o.stall_window) {
      if (!(out.value < window_ref - o.stall_rtol * std::abs(window_ref))) break;
      window_ref = out.value;
      window_start = k;
    }
    double raw = 0.0;
    for (const auto& x : g) raw += std::norm(x);
    if (zero_sum) project_zero_sum(g);
    double gn = 0.0;
    for (const auto& x : g) gn += std::norm(x);
    gn = std::sqrt(gn);
    // A zero subgradient certifies a minimizer of the convex objective. After
    // projection, cancellation leaves rounding noise that must not be
    // normalized into a full step.
    if (gn <= 1e-12 * std::sqrt(raw) || s0 == 0.0) break;
    const double step = s0 / std::sqrt(double(k)) / gn;
    for (std::size_t i = 0; i < z.size(); ++i) z[i] -= step * g[i];
    if (zero_sum) project_zero_sum(z);
  }
  out.iterations = std::min(k, o.max_iterations);
  return out;
}

double euclidean_diameter(const std::vector<std::vector<cplx>>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) s += std::norm(pts[i][k] - pts[j][k]);
      best = std::max(best, s);
    }
  return std::sqrt(best);
}

struct Accumulator {
  double sum = 0.0, carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

std::string to_string(RatioName name) {
  switch (name) {
    case RatioName::Barycenter: return "barycenter";
    case RatioName::Mixture: return "mixture";
    case RatioName::Roundness: return "roundness";
    case RatioName::Jensen: return "jensen";
    case RatioName::MetricBarycenter: return "metric_barycenter";
    case RatioName::LogRoundness: return "log_roundness";
  }
  return "unknown";
}

std::string to_string(StartLabel s) {
  switch (s.kind) {
    case StartLabel::Atom: return "atom:" + std::to_string(s.index);
    case StartLabel::MixtureMean: return "mixture_mean";
    case StartLabel::Zero: return "zero";
  }
  return "unknown";
}

std::optional<double> roundness_bound(const Space& s, double p) {
  if (s.is<Snowflake>()) {
    const auto& k = s.as<Snowflake>();
    return roundness_bound(*k.base, k.alpha * p);
  }
  if (s.is<RealLine>()) return p <= 2.0 ? 2.0 : std::pow(2.0, p - 1.0);
  if (const auto q = plain_lq(s); q && p >= 1.0) return std::pow(2.0, C_exponent({p, *q}));
  // L_q with p <= q <= 2 sits in L_p, where roundness is at most 2.
  if (const auto q = plain_lq(s); q && p < 1.0 && p <= *q && *q <= 2.0) return 2.0;
  // Triangle inequality twice: E d(X,X')^p <= 2^{max(p,1)-1} 2 E d(X,Y)^p.
  return std::pow(2.0, std::max(p, 1.0) + 1.0);
}

RatioReport roundness_ratio(const Config& c) {
  const double sx = self_moment(c.X, c.p);
  const double sy = self_moment(c.Y, c.p);
  const double cross = cross_moment(c.X, c.Y, c.p);
  if (!(cross > 0.0)) throw DegenerateRatio("roundness_ratio: E d(X,Y)^p vanishes", sx + sy, cross);
  RatioReport r = make_report(RatioName::Roundness, c, sx + sy, cross);
  attach_bound(r, roundness_bound(c.space(), c.p));
  return r;
}

RatioReport jensen_ratio(const FiniteDist& x, double p) {
  require_linear(x.space(), "jensen_ratio");
  if (!(p >= 1.0)) throw std::invalid_argument("jensen_ratio: p must be >= 1");
  const double self = self_moment(x, p);
  const double centered = centered_moment(x, p);
  if (!(centered > 0.0)) throw DegenerateRatio("jensen_ratio: constant distribution", self, centered);
  const Config c(x, x, p);
  RatioReport r = make_report(RatioName::Jensen, c, self, centered);
  std::optional<double> bound;
  if (const auto q = plain_lq(x.space())) bound = std::pow(2.0, c_exponent({p, *q}));
  if (x.space().is<RealLine>()) bound = std::pow(2.0, c_exponent({p, 2.0}));
  attach_bound(r, bound, BoundKind::Lower);
  return r;
}

double barycenter_objective(const Config& c, const Point& z) {
  c.space().validate_point(z);
  Accumulator acc;
  for (const FiniteDist* d : {&c.X, &c.Y})
    for (std::size_t i = 0; i < d->size(); ++i) {
      if (d->probs()[i] == 0.0) continue;
      acc.add(d->probs()[i] * c.space().powered_distance(d->atoms()[i], z, c.p));
    }
  return acc.value();
}

RatioReport mixture_ratio(const Config& c) {
  require_linear(c.space(), "mixture_ratio");
  const double num = barycenter_objective(c, with_coordinates(c.X.atoms().front(), mixture_mean(c)));
  const double cross = cross_moment(c.X, c.Y, c.p);
  if (!(cross > 0.0)) throw DegenerateRatio("mixture_ratio: E d(X,Y)^p vanishes", num, cross);
  RatioReport r = make_report(RatioName::Mixture, c, num, cross);
  attach_bound(r, bm_bound_for(c.space(), c.p, false));
  return r;
}

BarycenterCert minimize_barycenter(const Config& c, const BarycenterOptions& opts) {
  require_linear(c.space(), "minimize_barycenter");
  if (!(c.p >= 1.0)) throw std::invalid_argument("minimize_barycenter: p must be >= 1 (objective is not convex below 1)");
  const Kernel kernel(c);
  const bool zero_sum = c.space().is<WeightedLq>() && c.space().as<WeightedLq>().zero_sum;

  std::vector<std::vector<cplx>> starts;
  std::vector<StartLabel> labels;
  auto push = [&](std::vector<cplx> z, StartLabel l) {
    if (std::find(starts.begin(), starts.end(), z) != starts.end()) return;
    starts.push_back(std::move(z));
    labels.push_back(l);
  };
  std::size_t idx = 0;
  for (const FiniteDist* d : {&c.X, &c.Y})
    for (const auto& a : d->atoms()) {
      const auto co = coordinates(a);
      push(std::vector<cplx>(co.begin(), co.end()), {StartLabel::Atom, idx++});
    }
  push(mixture_mean(c), {StartLabel::MixtureMean, 0});
  push(std::vector<cplx>(kernel.dim(), 0.0), {StartLabel::Zero, 0});

  const double s0 = euclidean_diameter(kernel.atoms());
  std::vector<StartResult> results(starts.size());
  auto run = [&](std::size_t i) { results[i] = descend(kernel, starts[i], s0, zero_sum, opts); };
  if (opts.parallel)
    parallel_for(starts.size(), run);
  else
    for (std::size_t i = 0; i < starts.size(); ++i) run(i);

  // Min-reduce with index tie-break; independent of scheduling.
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value < results[best].value) best = i;

  BarycenterCert cert;
  cert.z_star = with_coordinates(kernel.shape(), results[best].z);
  cert.value = barycenter_objective(c, cert.z_star);
  cert.iterations = results[best].iterations;
  cert.starts = int(starts.size());
  cert.best_start = labels[best];
  // Guarantee value <= objective at every start under the reference
  // evaluation order, not only the kernel's.
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Point zs = with_coordinates(kernel.shape(), starts[i]);
    const double v = barycenter_objective(c, zs);
    if (v < cert.value) {
      cert.value = v;
      cert.z_star = zs;
      cert.best_start = labels[i];
      cert.iterations = 0;
    }
  }
  return cert;
}

RatioReport barycenter_ratio(const Config& c, const BarycenterOptions& opts) {
  BarycenterCert cert = minimize_barycenter(c, opts);
  const double cross = cross_moment(c.X, c.Y, c.p);
  if (!(cross > 0.0)) throw DegenerateRatio("barycenter_ratio: E d(X,Y)^p vanishes", cert.value, cross);
  RatioReport r = make_report(RatioName::Barycenter, c, cert.value, cross);
  attach_bound(r, bm_bound_for(c.space(), c.p, true));
  r.solver_info = std::move(cert);
  return r;
}

RatioReport metric_barycenter_ratio(const Config& c, const std::vector<Point>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("metric_barycenter_ratio: no candidate points");
  double best = kInf;
  for (const auto& z : candidates) best = std::min(best, barycenter_objective(c, z));
  const double cross = cross_moment(c.X, c.Y, c.p);
  if (!(cross > 0.0)) throw DegenerateRatio("metric_barycenter_ratio: E d(X,Y)^p vanishes", best, cross);
  RatioReport r = make_report(RatioName::MetricBarycenter, c, best, cross);
  if (c.p >= 1.0) attach_bound(r, metric_bound(c.p));
  return r;
}

RatioReport metric_barycenter_ratio(const Config& c) {
  std::vector<Point> candidates;
  if (c.space().is<BipartiteGraph>()) {
    const std::size_t n = c.space().as<BipartiteGraph>().n;
    for (Side side : {Side::Left, Side::Right})
      for (std::size_t i = 0; i < n; ++i) candidates.push_back(Vertex{side, i});
  } else {
    for (const FiniteDist* d : {&c.X, &c.Y})
      for (const auto& a : d->atoms())
        if (std::find(candidates.begin(), candidates.end(), a) == candidates.end()) candidates.push_back(a);
  }
  return metric_barycenter_ratio(c, candidates);
}

RatioReport log_roundness_report(const Config& c) {
  const double lxx = log_cross_moment(c.X, c.X);
  const double lyy = log_cross_moment(c.Y, c.Y);
  const double lxy = log_cross_moment(c.X, c.Y);
  RatioReport r;
  r.name = RatioName::LogRoundness;
  r.p = c.p;
  r.space = c.space().label();
  r.q = ambient_q(c.space());
  r.numerator = (std::isinf(lxx) || std::isinf(lyy)) ? -kInf : lxx + lyy;
  r.denominator = 2.0 * lxy;
  // A -inf left side satisfies the inequality whatever the right side is.
  r.value = std::isinf(r.numerator) ? -kInf : r.numerator - r.denominator;
  if (std::isinf(r.value)) r.note = "left side is -inf; trivially satisfied";
  std::optional<double> bound;
  if (c.space().is<RealLine>()) bound = 0.0;
  attach_bound(r, bound);
  return r;
}

RatioReport random_point_barycenter_ratio(const Config& c) {
  const double sx = self_moment(c.X, c.p);
  const double sy = self_moment(c.Y, c.p);
  const double cross = cross_moment(c.X, c.Y, c.p);
  const double num = 0.5 * (sx + sy) + cross;
  if (!(cross > 0.0)) throw DegenerateRatio("random_point_barycenter_ratio: E d(X,Y)^p vanishes", num, cross);
  RatioReport r = make_report(RatioName::Barycenter, c, num, cross);
  r.note = "z drawn from the mixture law; upper estimate of the infimum";
  // Valid when the space sits isometrically in L_p, p in (0, 2]: the real
  // line, or L_q with p <= q <= 2.
  const Space& s = c.space();
  const bool embeds = s.is<RealLine>() || (plain_lq(s) && c.p <= *plain_lq(s) && *plain_lq(s) <= 2.0);
  if (embeds && c.p <= 2.0) attach_bound(r, std::min(2.0, std::pow(2.0, 2.0 - c.p)));
  return r;
}

}  // namespace banach
