#pragma once

// Closed-form exponents and constants for moment inequalities in L_q.
// Each min/max formula is cross-checked against its piecewise expansion on
// every call; a disagreement throws std::logic_error.

#include <optional>
#include <vector>

namespace banach {

struct PQ {
  double p;
  double q;
};

struct ThetaP {
  double theta;
  double p;
};

/// min{1, p-1, p/q, p(q-1)/q}
double c_exponent(PQ pq);
/// Piecewise exponent bounding roundness in L_q (five closed ranges).
double C_exponent(PQ pq);
/// max{1, p-1, p(q-2)/q + 1}
double C_opt_exponent(PQ pq);

/// Values of every closed range containing (p, q), in range order; empty
/// entries for ranges that do not contain the point.
std::vector<std::optional<double>> c_exponent_ranges(PQ pq);
std::vector<std::optional<double>> C_exponent_ranges(PQ pq);
std::vector<std::optional<double>> C_opt_exponent_ranges(PQ pq);

/// Index (0-based) of the first range of C_exponent containing (p, q). On
/// q = 2, p < 2 the third and fifth ranges disagree; the fifth (smaller) wins.
int C_range(PQ pq);

struct SnowflakeExponent {
  double value;
  double Q_star;
};

/// min over Q >= q of max{pQ/q - 1, 3 - pQ/q, 1 + p(Q-2)/q, 1 + p(2-Q)/q}.
SnowflakeExponent snowflake_exponent(PQ pq);

/// 3^p / 2^(p-1)
double general_bound(double p);
/// 2^p + 1
double metric_bound(double p);
/// Barycenter/mixture bound in L_q.
double bm_bound(PQ pq);

struct InterpolationBounds {
  double r_bound;
  double j_bound;
  double mb_bound;
};

bool theta_p_admissible(ThetaP tp);
InterpolationBounds interpolation_bounds(ThetaP tp);

/// 2 min{1/p, 1-1/p, 1/q, 1-1/q}
double theta_max(PQ pq);

}  // namespace banach
