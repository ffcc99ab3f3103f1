#pragma once

// Seeded property suites over the scalar and Hilbert-case inequalities.
//
//   alpha          alpha_fn >= -tol (1+|x|+|y|)^q on a grid over [-10, 10]^2
//   beta           per q: least beta_ratio over a beta grid; below 1 expected
//                  exactly for q in (0, 3) minus {2}
//   subadditivity  random centered pairs
//   smoothing      Gaussian-smoothing inequality on random pairs, per s
//   hilbert        Parseval inequalities on random complex kernels
//   cosine         cosine_log_moment against -log 2 on an alpha grid
//   laplace        laplace_log_identity on random positive laws

#include <cstdint>
#include <string>
#include <vector>

namespace banach {

struct SuiteOptions {
  /// Grid size; 0 picks the suite default.
  int grid = 0;
  /// Random instances per parameter; 0 picks the suite default.
  int seeds = 0;
  /// 0 picks the suite default.
  double tolerance = 0.0;
  std::uint64_t seed = 1;
  /// q values (alpha, beta, subadditivity) or s values (smoothing); empty
  /// picks the suite default.
  std::vector<double> params;
};

struct SuiteReport {
  std::string name;
  std::vector<std::string> columns;
  /// CSV rows: every evaluation for cosine, laplace and beta, violations only
  /// for the others.
  std::vector<std::vector<std::string>> rows;
  long checked = 0;
  long violations = 0;
  double tolerance = 0.0;

  bool pass() const { return violations == 0; }
};

std::vector<std::string> check_suite_names();

/// Throws std::invalid_argument for an unknown name or bad options.
SuiteReport run_check_suite(const std::string& name, const SuiteOptions& opts = {});

}  // namespace banach
