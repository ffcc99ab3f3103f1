#pragma once

// Ratio computations for the barycentric, mixture, roundness and Jensen
// moduli on a single finitely supported configuration.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "banach/distributions.hpp"

namespace banach {

enum class RatioName { Barycenter, Mixture, Roundness, Jensen, MetricBarycenter, LogRoundness };

std::string to_string(RatioName name);

/// Upper: value <= bound is the claim. Lower: value >= bound.
enum class BoundKind { Upper, Lower };

struct StartLabel {
  enum Kind { Atom, MixtureMean, Zero } kind = Zero;
  /// For Atom: index into X's atoms followed by Y's atoms.
  std::size_t index = 0;
};

std::string to_string(StartLabel s);

struct BarycenterCert {
  Point z_star;
  double value = 0.0;
  long iterations = 0;
  int starts = 0;
  StartLabel best_start;
};

struct RatioReport {
  RatioName name = RatioName::Roundness;
  double value = 0.0;
  std::optional<double> paper_bound;
  std::optional<double> slack;
  BoundKind bound_kind = BoundKind::Upper;
  std::optional<BarycenterCert> solver_info;

  double numerator = 0.0;
  double denominator = 0.0;
  double p = 0.0;
  std::string space;
  /// Exponent of the ambient L_q when there is one.
  std::optional<double> q;
  std::string note;
};

/// Zero denominator; carries both raw moments.
class DegenerateRatio : public std::domain_error {
 public:
  DegenerateRatio(const std::string& what, double numerator, double denominator)
      : std::domain_error(what), numerator_(numerator), denominator_(denominator) {}
  double numerator() const { return numerator_; }
  double denominator() const { return denominator_; }

 private:
  double numerator_;
  double denominator_;
};

struct BarycenterOptions {
  long max_iterations = 50000;
  /// Stop a start once the best value has not improved by more than
  /// stall_rtol (relative) over this many iterations; 0 disables.
  long stall_window = 5000;
  double stall_rtol = 1e-9;
  bool parallel = true;
};

RatioReport roundness_ratio(const Config& c);
RatioReport jensen_ratio(const FiniteDist& x, double p);
RatioReport mixture_ratio(const Config& c);

double barycenter_objective(const Config& c, const Point& z);
BarycenterCert minimize_barycenter(const Config& c, const BarycenterOptions& opts = {});
RatioReport barycenter_ratio(const Config& c, const BarycenterOptions& opts = {});

/// Exact minimum over candidate barycenters.
RatioReport metric_barycenter_ratio(const Config& c, const std::vector<Point>& candidates);
/// Candidates default to every vertex for graphs and to the atoms otherwise.
RatioReport metric_barycenter_ratio(const Config& c);

/// Gap E log d(X,X') + E log d(Y,Y') - 2 E log d(X,Y); -inf allowed.
RatioReport log_roundness_report(const Config& c);

/// Barycenter estimate for any p > 0 with z drawn from the mixture:
/// (1/2 (E d(X,X')^p + E d(Y,Y')^p) + E d(X,Y)^p) / E d(X,Y)^p.
RatioReport random_point_barycenter_ratio(const Config& c);

/// Known upper bound on roundness for the space at exponent p, if any.
std::optional<double> roundness_bound(const Space& s, double p);

}  // namespace banach
