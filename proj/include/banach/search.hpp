#pragma once

// Seeded hill-climbing over finitely supported configurations. Values found
// are empirical lower bounds on the corresponding modulus.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banach/moduli.hpp"

namespace banach {

enum class SearchObjective { Roundness, Barycenter, Mixture };

std::string to_string(SearchObjective o);
std::optional<SearchObjective> objective_from_string(const std::string& s);

struct SearchSpec {
  Space space = Space::lq(2.0);
  SearchObjective objective = SearchObjective::Roundness;
  double p = 1.0;
  int min_atoms_x = 1;
  int max_atoms_x = 4;
  int min_atoms_y = 1;
  int max_atoms_y = 4;
  /// Proposals per restart.
  long budget = 1000;
  int restarts = 1;
  std::uint64_t seed = 0;
  /// Ambient dimension of random atoms; 0 picks 2 * max atoms for L_q and
  /// 2 x 2 matrices for Schatten. Fixed by the space for the other kinds.
  std::size_t dimension = 0;
  /// Restart 0 starts from a library construction when one matches.
  bool warm_start = true;
  /// Solver settings for the barycenter objective; also used by the final
  /// certification so that both agree exactly.
  BarycenterOptions barycenter{2000, 500, 1e-9, false};
};

struct TraceEntry {
  /// restart * budget + proposal index.
  long iteration = 0;
  double ratio = 0.0;
};

struct SearchResult {
  Config best_config;
  double best_ratio = 0.0;
  /// Running best over restarts taken in order; strictly increasing.
  std::vector<TraceEntry> trace;
  std::uint64_t seed = 0;
  int best_restart = 0;
  std::optional<double> warm_start_ratio;
  long accepted = 0;
  std::string label = "empirical lower bound";
};

/// Throws std::invalid_argument for invalid specs and for graph spaces.
SearchResult run_search(const SearchSpec& spec);

/// The value of record: recomputed through the moduli module. Throws
/// DegenerateRatio for a vanishing denominator.
double certify_ratio(const Config& c, SearchObjective objective, const BarycenterOptions& opts = {});

}  // namespace banach
