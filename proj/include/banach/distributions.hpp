#pragma once

// Finitely supported laws on a Space and their exact moment functionals.

#include <cstddef>
#include <vector>

#include "banach/spaces.hpp"

namespace banach {

class FiniteDist {
 public:
  /// Throws std::invalid_argument unless probs are >= 0, sum to 1 within
  /// 1e-12 and every atom belongs to the space.
  FiniteDist(Space space, std::vector<Point> atoms, std::vector<double> probs);

  static FiniteDist uniform(Space space, std::vector<Point> atoms);
  static FiniteDist dirac(Space space, Point atom);

  const Space& space() const { return space_; }
  const std::vector<Point>& atoms() const { return atoms_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  Space space_;
  std::vector<Point> atoms_;
  std::vector<double> probs_;
};

struct Config {
  Config(FiniteDist x, FiniteDist y, double p);

  const Space& space() const { return X.space(); }

  FiniteDist X;
  FiniteDist Y;
  double p;
};

/// Half-half mixture; atoms equal as values are merged.
FiniteDist mixture(const FiniteDist& x, const FiniteDist& y);

/// E d(X,Y)^p for independent X, Y.
double cross_moment(const FiniteDist& x, const FiniteDist& y, double p);
double self_moment(const FiniteDist& x, double p);

Point mean(const FiniteDist& x);
double centered_moment(const FiniteDist& x, double p);

/// E log d(X,Y); -inf when a coinciding pair carries positive mass.
double log_cross_moment(const FiniteDist& x, const FiniteDist& y);

}  // namespace banach
