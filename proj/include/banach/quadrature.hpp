#pragma once

// Gauss-Legendre quadrature with adaptive panel bisection.

#include <functional>
#include <vector>

namespace banach {

struct GaussRule {
  std::vector<double> nodes;  // on [-1, 1]
  std::vector<double> weights;
};

/// n-point rule; nodes by Newton iteration on P_n.
const GaussRule& gauss_legendre(int n);

/// Fixed rule on [a, b].
double gauss_panel(const std::function<double(double)>& f, double a, double b, int n = 20);

/// Bisects each panel until its two-half estimate agrees with the whole-panel
/// estimate within max(abs_tol, rel_tol * |first estimate|), or depth runs out.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-13,
                          double rel_tol = 1e-12, int max_depth = 40);

}  // namespace banach
