#pragma once

// Extremal configurations with their predicted ratio values.

#include <map>
#include <optional>
#include <string>

#include "banach/moduli.hpp"

namespace banach {

enum class ConstructionId {
  Fn_inf,
  Fn_q,
  Bipartite,
  DisjointBernoulli,
  JensenTwoPoint,
  JensenEps,
  JensenBasis,
  JensenRademacher,
  SchattenParallelogram,
  TwoPoint,
  EpsAtom
};

enum class PredictionKind { ExactRatio, LowerBound, UpperBoundLimit };

/// Quantity the prediction refers to.
enum class Target {
  Barycenter,
  Mixture,
  Roundness,
  Jensen,
  MetricBarycenter,
  /// E d(X,Y)^p / inf_z E d(X,z)^p for X = Y in law.
  SingleBarycenterInverse
};

std::string to_string(ConstructionId id);
std::optional<ConstructionId> construction_from_string(const std::string& s);
std::string to_string(PredictionKind k);
std::string to_string(Target t);

struct NamedConstruction {
  ConstructionId id;
  std::map<std::string, double> params;
  Config config;
  double predicted;
  PredictionKind prediction_kind;
  Target target;
};

/// F_n in the zero-sum hyperplane of l_q^{2n}; q = inf gives the exact
/// ratio, finite q a lower bound.
NamedConstruction make_fn(int n, double q, double p);
NamedConstruction make_bipartite(int n, double p);
/// Rademacher systems with disjoint supports; n <= 14.
NamedConstruction make_disjoint_bernoulli(int n, double q, double p);

enum class JensenKind { TwoPoint, Eps, Basis, Rademacher };
struct JensenParams {
  double p = 2.0;
  double eps = 0.5;
  int n = 2;
  double q = 2.0;
};
NamedConstruction make_jensen(JensenKind kind, const JensenParams& params);

NamedConstruction make_schatten_parallelogram(int n, double p);
/// X, Y independent, each uniform on {0, 1} in the real line.
NamedConstruction make_two_point(double p);
NamedConstruction make_eps_atom(double eps, double p);

/// Rademacher functions r_1..r_n as coordinate vectors over a uniform
/// probability space. n <= 14 uses {-1,1}^n; larger n uses n distinct
/// non-constant Walsh functions on 2^k points, which have the same joint law
/// for every pair.
std::vector<std::vector<double>> rademacher_system(int n);

struct Verification {
  double predicted;
  double computed;
  double slack;
  double tolerance;
  bool pass;
  std::optional<RatioReport> report;
};

/// Recomputes the target ratio through the moduli module and compares.
Verification verify(const NamedConstruction& nc, const BarycenterOptions& opts = {});

}  // namespace banach
