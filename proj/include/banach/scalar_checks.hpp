#pragma once

// Scalar and Hilbert-space inequalities: q >= 3 sub-additivity, log-moment
// identities for the L_0 case, and the quadratic Parseval inequalities.

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace banach {

/// Finitely supported real random variable.
struct ScalarDist {
  ScalarDist(std::vector<double> atoms, std::vector<double> probs);

  std::vector<double> atoms;
  std::vector<double> probs;

  double mean() const;
};

/// f on a product of two finite probability spaces; values row-major m x k.
struct KernelMatrix {
  KernelMatrix(std::vector<double> mu, std::vector<double> nu, std::vector<std::complex<double>> values);

  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<std::complex<double>> values;

  std::size_t rows() const { return mu.size(); }
  std::size_t cols() const { return nu.size(); }
  std::complex<double> operator()(std::size_t i, std::size_t j) const { return values[i * nu.size() + j]; }
};

struct CheckResult {
  double lhs;
  double rhs;
  bool holds;
};

/// |x+y|^q - |x|^q - |y|^q - q phi_{q-1}(x) y - q x phi_{q-1}(y),
/// phi_s(x) = sign(x)|x|^s. Requires q >= 3.
double alpha_fn(double x, double y, double q);

/// E|X+Y|^q / (E|X|^q + E|Y|^q) for the centered two-point law with mass beta
/// at 1 - beta and 1 - beta at -beta.
double beta_ratio(double beta, double q);

/// E|X+Y|^q against E|X|^q + E|Y|^q for independent centered X, Y.
/// Throws unless both means vanish within 1e-12.
CheckResult check_subadditivity(const ScalarDist& x, const ScalarDist& y, double q);

/// The two-point law used by beta_ratio.
ScalarDist beta_dist(double beta);

struct IdentityResult {
  double lhs;
  double rhs;
};

/// E log W against the Laplace integral of (e^{-s} - E e^{-sW}) / s.
IdentityResult laplace_log_identity(const ScalarDist& w);

/// E exp(-s (Z-Z')^2) against E exp(-s (X-Y)^2), Z the half-half mixture.
CheckResult gaussian_smoothing_check(const ScalarDist& x, const ScalarDist& y, double s);

/// (1/2pi) int_0^{2pi} log|cos t - cos alpha| dt.
double cosine_log_moment(double alpha);
/// (1/2pi) int_0^{2pi} log|cos t - c| dt for a constant c.
double constant_log_moment(double c);

struct HilbertRoundness {};
struct HilbertMixture {
  std::complex<double> alpha{0.5, 0.0};
  std::complex<double> beta{0.5, 0.0};
};
struct HilbertAntisym {};
using HilbertVariant = std::variant<HilbertRoundness, HilbertMixture, HilbertAntisym>;

std::string to_string(const HilbertVariant& v);

/// Weighted-sum evaluation of the scalar quadratic inequality for f. Antisym
/// needs a square kernel with mu = nu.
CheckResult verify_scalar_hilbert(const KernelMatrix& f, const HilbertVariant& variant);

/// Constant of the (alpha, beta) mixture inequality on [F,H]_theta at exponent p:
/// max{(|1-a|^2+|1-b|^2)^{p theta}, 1} ((1+|a|)^r + (1+|b|)^r)^{1 - theta p/2},
/// r = 2p(1-theta)/(2-theta p).
double mixture_ab_constant(std::complex<double> alpha, std::complex<double> beta, double theta, double p);

}  // namespace banach
