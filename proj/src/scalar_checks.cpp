#include "banach/scalar_checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "banach/quadrature.hpp"

namespace banach {

namespace {

using cplx = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate_probs(const std::vector<double>& p, const char* who) {
  if (p.empty()) throw std::invalid_argument(std::string(who) + ": empty probability vector");
  double s = 0.0;
  for (double x : p) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": negative or non-finite probability");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument(std::string(who) + ": probabilities must sum to 1");
}

double phi(double x, double s) { return std::copysign(std::pow(std::abs(x), s), x); }

double moment(const ScalarDist& d, double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.atoms.size(); ++i) s += d.probs[i] * std::pow(std::abs(d.atoms[i]), q);
  return s;
}

// E exp(-s (A - B)^2) for independent A, B.
double gauss_pair(const ScalarDist& a, const ScalarDist& b, double s) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.atoms.size(); ++i)
    for (std::size_t j = 0; j < b.atoms.size(); ++j) {
      const double d = a.atoms[i] - b.atoms[j];
      t += a.probs[i] * b.probs[j] * std::exp(-s * d * d);
    }
  return t;
}

// e^{-s} - e^{-s w} without cancellation or overflow.
double laplace_gap(double s, double w) {
  if (w >= 1.0) return -std::exp(-s) * std::expm1(-s * (w - 1.0));
  return std::exp(-s * w) * std::expm1(-s * (1.0 - w));
}

// Integral of h(u) for u between 0 and d (d may be negative), where h has a
// log singularity of multiplicity m at u = 0. Dyadic panels toward 0; the last
// panel uses m log|u| + C with C fitted at its outer end.
double toward_root(const std::function<double(double)>& h, double d, int m) {
  constexpr int kLevels = 50;
  double total = 0.0;
  double outer = d;
  for (int k = 0; k < kLevels; ++k) {
    const double inner = 0.5 * outer;
    total += gauss_panel(h, std::min(inner, outer), std::max(inner, outer));
    outer = inner;
  }
  const double delta = std::abs(outer);
  const double c = h(outer) - m * std::log(delta);
  return total + m * (delta * std::log(delta) - delta) + c * delta;
}

}  // namespace

ScalarDist::ScalarDist(std::vector<double> a, std::vector<double> p) : atoms(std::move(a)), probs(std::move(p)) {
  if (atoms.size() != probs.size()) throw std::invalid_argument("ScalarDist: atoms and probs differ in length");
  validate_probs(probs, "ScalarDist");
  for (double x : atoms)
    if (!std::isfinite(x)) throw std::invalid_argument("ScalarDist: non-finite atom");
}

double ScalarDist::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) s += probs[i] * atoms[i];
  return s;
}

KernelMatrix::KernelMatrix(std::vector<double> m, std::vector<double> n, std::vector<cplx> v)
    : mu(std::move(m)), nu(std::move(n)), values(std::move(v)) {
  validate_probs(mu, "KernelMatrix mu");
  validate_probs(nu, "KernelMatrix nu");
  if (values.size() != mu.size() * nu.size())
    throw std::invalid_argument("KernelMatrix: expected " + std::to_string(mu.size() * nu.size()) + " values, got " +
                                std::to_string(values.size()));
}

double alpha_fn(double x, double y, double q) {
  if (!(q >= 3.0)) throw std::invalid_argument("alpha_fn: q must be >= 3");
  return std::pow(std::abs(x + y), q) - std::pow(std::abs(x), q) - std::pow(std::abs(y), q) - q * phi(x, q - 1.0) * y -
         q * x * phi(y, q - 1.0);
}

double beta_ratio(double beta, double q) {
  if (!(beta > 0.0 && beta <= 0.5)) throw std::invalid_argument("beta_ratio: beta must lie in (0, 1/2]");
  if (!(q > 0.0)) throw std::invalid_argument("beta_ratio: q must be positive");
  const double b = beta, c = 1.0 - beta, t = std::pow(2.0, q);
  const double num = b * b * t * std::pow(c, q) + c * c * t * std::pow(b, q) + 2.0 * b * c * std::pow(1.0 - 2.0 * b, q);
  const double den = 2.0 * b * std::pow(c, q) + 2.0 * c * std::pow(b, q);
  return num / den;
}

ScalarDist beta_dist(double beta) {
  if (!(beta > 0.0 && beta <= 0.5)) throw std::invalid_argument("beta_dist: beta must lie in (0, 1/2]");
  return ScalarDist({1.0 - beta, -beta}, {beta, 1.0 - beta});
}

CheckResult check_subadditivity(const ScalarDist& x, const ScalarDist& y, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("check_subadditivity: q must be positive");
  if (std::abs(x.mean()) > 1e-12 || std::abs(y.mean()) > 1e-12)
    throw std::invalid_argument("check_subadditivity: inputs must be mean-zero (means " + std::to_string(x.mean()) +
                                ", " + std::to_string(y.mean()) + ")");
  double lhs = 0.0;
  for (std::size_t i = 0; i < x.atoms.size(); ++i)
    for (std::size_t j = 0; j < y.atoms.size(); ++j)
      lhs += x.probs[i] * y.probs[j] * std::pow(std::abs(x.atoms[i] + y.atoms[j]), q);
  const double rhs = moment(x, q) + moment(y, q);
  return {lhs, rhs, lhs >= rhs - 1e-10 * std::max(1.0, rhs)};
}

IdentityResult laplace_log_identity(const ScalarDist& w) {
  double lhs = 0.0, ew = 0.0, wmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.atoms.size(); ++i) {
    if (!(w.atoms[i] > 0.0)) throw std::invalid_argument("laplace_log_identity: atoms must be strictly positive");
    lhs += w.probs[i] * std::log(w.atoms[i]);
    ew += w.probs[i] * w.atoms[i];
    wmin = std::min(wmin, w.atoms[i]);
  }
  auto g = [&](double s) {
    double t = 0.0;
    for (std::size_t i = 0; i < w.atoms.size(); ++i) t += w.probs[i] * laplace_gap(s, w.atoms[i]);
    return t / s;
  };
  // Tail beyond S is at most e^{-S}/S + e^{-S wmin}/(S wmin).
  double upper = 1.0;
  while (std::exp(-upper) / upper + std::exp(-upper * wmin) / (upper * wmin) > 1e-12) upper *= 2.0;

  constexpr double kLow = 1e-12;
  // On [0, kLow] the integrand equals E[W] - 1 up to O(s).
  double rhs = (ew - 1.0) * kLow;
  for (double a = kLow; a < upper; a *= 10.0) rhs += integrate_adaptive(g, a, std::min(10.0 * a, upper), 1e-15, 1e-13);
  return {lhs, rhs};
}

CheckResult gaussian_smoothing_check(const ScalarDist& x, const ScalarDist& y, double s) {
  if (!(s >= 0.0)) throw std::invalid_argument("gaussian_smoothing_check: s must be >= 0");
  const double xy = gauss_pair(x, y, s);
  const double lhs = 0.25 * (gauss_pair(x, x, s) + gauss_pair(y, y, s) + 2.0 * xy);
  return {lhs, xy, lhs >= xy - 1e-12};
}

double cosine_log_moment(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("cosine_log_moment: alpha must be finite");
  double a = std::fmod(alpha, kTwoPi);
  if (a < 0) a += kTwoPi;
  const double tol = 1e-15 * kTwoPi;
  // log|cos t - cos a| = log 2 + log|sin((t+a)/2)| + log|sin((t-a)/2)|; the
  // first factor vanishes at t = 2pi - a (mod 2pi), the second at t = a.
  const double plus_root = a == 0.0 ? 0.0 : kTwoPi - a;
  auto near = [tol](double x, double r) { return std::abs(x - r) <= tol || std::abs(std::abs(x - r) - kTwoPi) <= tol; };
  auto g = [a](double t) {
    return std::numbers::ln2 + std::log(std::abs(std::sin(0.5 * (t + a)))) + std::log(std::abs(std::sin(0.5 * (t - a))));
  };
  // Integrand at x0 + u; a factor vanishing at x0 becomes |sin(u/2)|, so no
  // cancellation occurs as u -> 0.
  auto local = [&](double x0) {
    const bool kills_minus = near(x0, a), kills_plus = near(x0, plus_root);
    return [=](double u) {
      const double fp = kills_plus ? std::sin(0.5 * u) : std::sin(0.5 * (x0 + u + a));
      const double fm = kills_minus ? std::sin(0.5 * u) : std::sin(0.5 * (x0 + u - a));
      return std::numbers::ln2 + std::log(std::abs(fp)) + std::log(std::abs(fm));
    };
  };
  auto multiplicity = [&](double x) { return int(near(x, a)) + int(near(x, plus_root)); };

  std::vector<double> cuts = {0.0, kTwoPi, a, plus_root};
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [tol](double u, double v) { return std::abs(u - v) <= tol; }),
             cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double mid = 0.5 * (lo + hi);
    const int ml = multiplicity(lo), mr = multiplicity(hi);
    total += ml > 0 ? toward_root(local(lo), mid - lo, ml) : integrate_adaptive(g, lo, mid, 1e-15, 1e-13);
    total += mr > 0 ? toward_root(local(hi), mid - hi, mr) : integrate_adaptive(g, mid, hi, 1e-15, 1e-13);
  }
  return total / kTwoPi;
}

double constant_log_moment(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("constant_log_moment: c must be finite");
  if (std::abs(c) <= 1.0) return cosine_log_moment(std::acos(c));
  auto g = [c](double t) { return std::log(std::abs(std::cos(t) - c)); };
  return integrate_adaptive(g, 0.0, kTwoPi, 1e-15, 1e-13) / kTwoPi;
}

std::string to_string(const HilbertVariant& v) {
  if (std::holds_alternative<HilbertRoundness>(v)) return "roundness";
  if (std::holds_alternative<HilbertAntisym>(v)) return "antisym";
  return "mixture";
}

CheckResult verify_scalar_hilbert(const KernelMatrix& f, const HilbertVariant& variant) {
  const std::size_t m = f.rows(), k = f.cols();
  double norm2 = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) norm2 += f.mu[i] * f.nu[j] * std::norm(f(i, j));

  // Row averages over nu and column averages over mu.
  std::vector<cplx> row(m, 0.0), col(k, 0.0);
  cplx total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      row[i] += f.nu[j] * f(i, j);
      col[j] += f.mu[i] * f(i, j);
      total += f.mu[i] * f.nu[j] * f(i, j);
    }

  double lhs = 0.0, rhs = 0.0;
  if (std::holds_alternative<HilbertRoundness>(variant)) {
    lhs = 2.0 * norm2;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t i2 = 0; i2 < m; ++i2) rhs += f.mu[i] * f.mu[i2] * std::norm(row[i] - row[i2]);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t j2 = 0; j2 < k; ++j2) rhs += f.nu[j] * f.nu[j2] * std::norm(col[j] - col[j2]);
  } else if (const auto* mx = std::get_if<HilbertMixture>(&variant)) {
    lhs = std::max(std::norm(1.0 - mx->alpha) + std::norm(1.0 - mx->beta), 1.0) * norm2;
    for (std::size_t i = 0; i < m; ++i) rhs += f.mu[i] * std::norm(row[i] - mx->alpha * total);
    for (std::size_t j = 0; j < k; ++j) rhs += f.nu[j] * std::norm(col[j] - mx->beta * total);
  } else {
    if (m != k || f.mu != f.nu) throw std::invalid_argument("verify_scalar_hilbert: antisym needs a square kernel with mu = nu");
    lhs = 2.0 * norm2;
    for (std::size_t c = 0; c < m; ++c) {
      cplx s = 0.0;
      for (std::size_t x = 0; x < m; ++x) s += f.mu[x] * (f(x, c) - f(c, x));
      rhs += f.mu[c] * std::norm(s);
    }
  }
  return {lhs, rhs, lhs >= rhs - 1e-12 * std::max(1.0, lhs)};
}

double mixture_ab_constant(cplx alpha, cplx beta, double theta, double p) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("mixture_ab_constant: theta must lie in [0, 1]");
  const double lo = 2.0 / (2.0 - theta), hi = theta == 0.0 ? std::numeric_limits<double>::infinity() : 2.0 / theta;
  if (!(p >= lo * (1 - 1e-12) && p <= hi * (1 + 1e-12)))
    throw std::invalid_argument("mixture_ab_constant: need 2/(2-theta) <= p <= 2/theta");
  const double first = std::max(std::pow(std::norm(1.0 - alpha) + std::norm(1.0 - beta), p * theta), 1.0);
  if (theta == 1.0) return first;
  // ((a^r + b^r)^{1/r})^{p(1-theta)}, with r = inf when theta p = 2.
  const double a = 1.0 + std::abs(alpha), b = 1.0 + std::abs(beta);
  const double gap = 2.0 - theta * p;
  double norm_r;
  if (gap <= 1e-15) {
    norm_r = std::max(a, b);
  } else {
    const double r = 2.0 * p * (1.0 - theta) / gap;
    const double big = std::max(a, b);
    norm_r = big * std::pow(std::pow(a / big, r) + std::pow(b / big, r), 1.0 / r);
  }
  return first * std::pow(norm_r, p * (1.0 - theta));
}

}  // namespace banach
