#include "banach/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace banach {

namespace {

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

void require_same_space(const FiniteDist& x, const FiniteDist& y, const char* who) {
  if (!(x.space() == y.space())) throw std::invalid_argument(std::string(who) + ": distributions live on different spaces");
}

}  // namespace

FiniteDist::FiniteDist(Space space, std::vector<Point> atoms, std::vector<double> probs)
    : space_(std::move(space)), atoms_(std::move(atoms)), probs_(std::move(probs)) {
  if (atoms_.empty()) throw std::invalid_argument("FiniteDist: at least one atom required");
  if (atoms_.size() != probs_.size()) throw std::invalid_argument("FiniteDist: atoms and probs differ in length");
  Accumulator total;
  for (double w : probs_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("FiniteDist: probabilities must be finite and >= 0");
    total.add(w);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw std::invalid_argument("FiniteDist: probabilities must sum to 1");
  for (const auto& a : atoms_) space_.validate_point(a);
  // Linear kinds need a common shape so that means are defined.
  if (space_.is_linear() || space_.is<Snowflake>()) {
    for (const auto& a : atoms_) {
      if (a.index() != atoms_.front().index()) throw std::invalid_argument("FiniteDist: mixed point types");
      if (const auto* v = std::get_if<CVector>(&a)) {
        const auto& f = std::get<CVector>(atoms_.front());
        if (v->size() != f.size() || v->weights != f.weights)
          throw std::invalid_argument("FiniteDist: atoms differ in length or coordinate weights");
      } else if (const auto* m = std::get_if<CMatrix>(&a)) {
        if (m->dim != std::get<CMatrix>(atoms_.front()).dim)
          throw std::invalid_argument("FiniteDist: atoms differ in matrix dimension");
      }
    }
  }
}

FiniteDist FiniteDist::uniform(Space space, std::vector<Point> atoms) {
  const std::size_t n = atoms.size();
  if (n == 0) throw std::invalid_argument("FiniteDist::uniform: no atoms");
  return FiniteDist(std::move(space), std::move(atoms), std::vector<double>(n, 1.0 / double(n)));
}

FiniteDist FiniteDist::dirac(Space space, Point atom) {
  return FiniteDist(std::move(space), {std::move(atom)}, {1.0});
}

Config::Config(FiniteDist x, FiniteDist y, double p_) : X(std::move(x)), Y(std::move(y)), p(p_) {
  require_same_space(X, Y, "Config");
  if (!(p > 0.0) || !std::isfinite(p)) throw std::invalid_argument("Config: p must be a positive real");
}

FiniteDist mixture(const FiniteDist& x, const FiniteDist& y) {
  require_same_space(x, y, "mixture");
  std::vector<Point> atoms;
  std::vector<double> probs;
  auto add = [&](const Point& a, double w) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      if (atoms[k] == a) {
        probs[k] += w;
        return;
      }
    }
    atoms.push_back(a);
    probs.push_back(w);
  };
  for (std::size_t i = 0; i < x.size(); ++i) add(x.atoms()[i], 0.5 * x.probs()[i]);
  for (std::size_t j = 0; j < y.size(); ++j) add(y.atoms()[j], 0.5 * y.probs()[j]);
  return FiniteDist(x.space(), std::move(atoms), std::move(probs));
}

double cross_moment(const FiniteDist& x, const FiniteDist& y, double p) {
  require_same_space(x, y, "cross_moment");
  if (!(p > 0.0)) throw std::invalid_argument("cross_moment: p must be positive");
  const Space& s = x.space();
  Accumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pi = x.probs()[i];
    if (pi == 0.0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double w = pi * y.probs()[j];
      if (w == 0.0) continue;
      acc.add(w * s.powered_distance(x.atoms()[i], y.atoms()[j], p));
    }
  }
  return acc.value();
}

double self_moment(const FiniteDist& x, double p) { return cross_moment(x, x, p); }

Point mean(const FiniteDist& x) {
  if (!x.space().is_linear()) throw std::invalid_argument("mean: space " + x.space().label() + " has no linear structure");
  const auto first = coordinates(x.atoms().front());
  std::vector<cplx> m(first.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = coordinates(x.atoms()[i]);
    for (std::size_t k = 0; k < c.size(); ++k) m[k] += x.probs()[i] * c[k];
  }
  return with_coordinates(x.atoms().front(), std::move(m));
}

double centered_moment(const FiniteDist& x, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("centered_moment: p must be positive");
  const Point mu = mean(x);
  Accumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.probs()[i] == 0.0) continue;
    acc.add(x.probs()[i] * x.space().powered_distance(x.atoms()[i], mu, p));
  }
  return acc.value();
}

double log_cross_moment(const FiniteDist& x, const FiniteDist& y) {
  require_same_space(x, y, "log_cross_moment");
  Accumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double w = x.probs()[i] * y.probs()[j];
      if (w == 0.0) continue;
      const double d = x.space().distance(x.atoms()[i], y.atoms()[j]);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      acc.add(w * std::log(d));
    }
  }
  return acc.value();
}

}  // namespace banach
