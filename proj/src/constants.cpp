#include "banach/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace banach {

namespace {

constexpr double kAgree = 1e-12;
// Slack on range membership so that boundary points computed in floating
// point are not lost between two closed ranges.
constexpr double kEdge = 1e-12;

bool le(double a, double b) { return a <= b + kEdge * std::max(1.0, std::abs(b)); }

// q/(q-1), +inf at q = 1.
double conj(double q) { return q == 1.0 ? std::numeric_limits<double>::infinity() : q / (q - 1.0); }

void validate(PQ pq, const char* who) {
  if (!(pq.p >= 1.0) || !std::isfinite(pq.p)) throw std::invalid_argument(std::string(who) + ": p must be a finite real >= 1");
  if (!(pq.q >= 1.0) || !std::isfinite(pq.q)) throw std::invalid_argument(std::string(who) + ": q must be a finite real >= 1");
}

void require_agreement(double closed, const std::vector<std::optional<double>>& ranges, const char* who, PQ pq,
                       bool require_cover) {
  bool covered = false;
  for (const auto& r : ranges) {
    if (!r) continue;
    covered = true;
    if (std::abs(*r - closed) > kAgree * std::max(1.0, std::abs(closed)))
      throw std::logic_error(std::string(who) + ": piecewise form disagrees at p=" + std::to_string(pq.p) +
                             " q=" + std::to_string(pq.q));
  }
  if (require_cover && !covered)
    throw std::logic_error(std::string(who) + ": no range contains p=" + std::to_string(pq.p) + " q=" + std::to_string(pq.q));
}

}  // namespace

std::vector<std::optional<double>> c_exponent_ranges(PQ pq) {
  const double p = pq.p, q = pq.q, qc = conj(q);
  std::vector<std::optional<double>> out(4);
  if ((le(p, q) && le(q, 2.0)) || (le(p, qc) && le(qc, 2.0))) out[0] = p - 1.0;
  if (le(q, p) && le(p, qc)) out[1] = p * (q - 1.0) / q;
  if (le(qc, p) && le(p, q)) out[2] = p / q;
  if ((le(qc, p) && le(2.0, qc)) || (le(q, p) && le(2.0, q))) out[3] = 1.0;
  return out;
}

double c_exponent(PQ pq) {
  validate(pq, "c_exponent");
  const double p = pq.p, q = pq.q;
  const double v = std::min({1.0, p - 1.0, p / q, p * (q - 1.0) / q});
  require_agreement(v, c_exponent_ranges(pq), "c_exponent", pq, true);
  return v;
}

std::vector<std::optional<double>> C_exponent_ranges(PQ pq) {
  const double p = pq.p, q = pq.q, qc = conj(q), pc = conj(p);
  std::vector<std::optional<double>> out(5);
  if (le(pc, q) && le(q, p)) out[0] = p - 1.0;
  if (le(qc, p) && le(p, q)) out[1] = p * (q - 2.0) / q + 1.0;
  if (le(2.0, q) && le(p, qc)) out[2] = 2.0 - p / q;
  if (le(q, 2.0) && le(q, p) && le(p, qc)) out[3] = p / q;
  if (le(p, q) && le(q, 2.0)) out[4] = 1.0;
  return out;
}

namespace {

// Ranges 3 and 5 overlap on q = 2, p < 2 with different values; both are upper
// bounds there, so the smaller one (range 5) is used and range 3 is dropped.
std::vector<std::optional<double>> C_effective_ranges(PQ pq) {
  auto r = C_exponent_ranges(pq);
  if (r[2] && r[4] && *r[4] < *r[2]) r[2].reset();
  return r;
}

}  // namespace

int C_range(PQ pq) {
  validate(pq, "C_range");
  const auto r = C_effective_ranges(pq);
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k]) return int(k);
  throw std::logic_error("C_range: no range contains the point");
}

double C_exponent(PQ pq) {
  validate(pq, "C_exponent");
  const auto ranges = C_effective_ranges(pq);
  const auto first = std::find_if(ranges.begin(), ranges.end(), [](const auto& r) { return r.has_value(); });
  if (first == ranges.end())
    throw std::logic_error("C_exponent: no range contains p=" + std::to_string(pq.p) + " q=" + std::to_string(pq.q));
  require_agreement(**first, ranges, "C_exponent", pq, true);
  return **first;
}

std::vector<std::optional<double>> C_opt_exponent_ranges(PQ pq) {
  const double p = pq.p, q = pq.q;
  std::vector<std::optional<double>> out(3);
  if (le(2.0, p) && le(q, p)) out[0] = p - 1.0;
  if (le(2.0, q) && le(p, q)) out[1] = p * (q - 2.0) / q + 1.0;
  if (le(p, 2.0) && le(q, 2.0)) out[2] = 1.0;
  return out;
}

double C_opt_exponent(PQ pq) {
  validate(pq, "C_opt_exponent");
  const double p = pq.p, q = pq.q;
  const double v = std::max({1.0, p - 1.0, p * (q - 2.0) / q + 1.0});
  require_agreement(v, C_opt_exponent_ranges(pq), "C_opt_exponent", pq, true);
  return v;
}

SnowflakeExponent snowflake_exponent(PQ pq) {
  validate(pq, "snowflake_exponent");
  const double p = pq.p, q = pq.q, r = p / q;
  // With t = pQ/q >= p the four terms are t + {-1, 1 - 2r} and -t + {3, 1 + 2r}.
  const double a = std::max(-1.0, 1.0 - 2.0 * r);
  const double b = std::max(3.0, 1.0 + 2.0 * r);
  const double t_star = 0.5 * (b - a);
  if (t_star <= p) return {std::max(p + a, b - p), q};
  return {0.5 * (a + b), t_star / r};
}

double general_bound(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("general_bound: p must be >= 1");
  return std::pow(3.0, p) / std::pow(2.0, p - 1.0);
}

double metric_bound(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("metric_bound: p must be >= 1");
  return std::pow(2.0, p) + 1.0;
}

double bm_bound(PQ pq) {
  const double c = c_exponent(pq);
  const double C = C_exponent(pq);
  const double first = general_bound(pq.p) * std::pow(std::sqrt(2.0) / 3.0, 2.0 * c);
  const double second = (std::pow(2.0, C) + 2.0) / std::pow(2.0, c + 1.0);
  return std::min(first, second);
}

bool theta_p_admissible(ThetaP tp) {
  if (!(tp.theta >= 0.0 && tp.theta <= 1.0)) return false;
  const double lo = 2.0 / (2.0 - tp.theta);
  const double hi = tp.theta == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 / tp.theta;
  return std::isfinite(tp.p) && le(lo, tp.p) && le(tp.p, hi);
}

InterpolationBounds interpolation_bounds(ThetaP tp) {
  if (!theta_p_admissible(tp))
    throw std::invalid_argument("interpolation_bounds: need theta in [0,1] and 2/(2-theta) <= p <= 2/theta");
  const double th = tp.theta, p = tp.p;
  InterpolationBounds out;
  out.r_bound = std::pow(2.0, 1.0 + (1.0 - th) * p);
  out.j_bound = std::pow(2.0, th * p / 2.0);
  const double first = general_bound(p) * std::pow(std::sqrt(2.0) / 3.0, p * th);
  const double second = (1.0 + std::pow(2.0, (1.0 - th) * p)) / std::pow(2.0, th * p / 2.0);
  out.mb_bound = std::min(first, second);

  // Selector: the first expression on [1/(1-theta), 2/theta], the second on
  // [2/(2-theta), 1/(1-theta)].
  const double cross = th == 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - th);
  const double tol = kAgree * std::max(1.0, out.mb_bound);
  if (cross <= p && std::abs(first - out.mb_bound) > tol)
    throw std::logic_error("interpolation_bounds: selector disagrees with the minimum");
  if (p <= cross && std::abs(second - out.mb_bound) > tol)
    throw std::logic_error("interpolation_bounds: selector disagrees with the minimum");
  return out;
}

double theta_max(PQ pq) {
  validate(pq, "theta_max");
  const double p = pq.p, q = pq.q;
  const double t = 2.0 * std::min({1.0 / p, 1.0 - 1.0 / p, 1.0 / q, 1.0 - 1.0 / q});
  if (std::abs(c_exponent(pq) - p * t / 2.0) > kAgree * std::max(1.0, p))
    throw std::logic_error("theta_max: c = p theta_max / 2 fails");
  return t;
}

}  // namespace banach
