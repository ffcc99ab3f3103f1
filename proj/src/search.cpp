#include "banach/search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "banach/constructions.hpp"
#include "banach/parallel.hpp"

namespace banach {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinScale = 1e-6;
constexpr double kMaxScale = 10.0;

struct Side {
  std::vector<Point> atoms;
  std::vector<double> probs;
  int min_atoms = 1;
  int max_atoms = 1;
};

struct State {
  Side x;
  Side y;
};

// Innermost non-snowflake space.
const Space& root_space(const Space& s) {
  if (s.is<Snowflake>()) return root_space(*s.as<Snowflake>().base);
  return s;
}

bool complex_entries(const Space& s) { return s.is<ParallelogramS1>() || s.is<Schatten>(); }

void project_zero_sum(const Space& s, Point& pt) {
  if (!s.is<WeightedLq>() || !s.as<WeightedLq>().zero_sum) return;
  auto& v = std::get<CVector>(pt);
  cplx m = 0.0;
  for (const auto& z : v.entries) m += z;
  m /= double(v.size());
  for (auto& z : v.entries) z -= m;
}

std::vector<double> normalized(std::vector<double> w) {
  double s = 0.0;
  for (double v : w) s += v;
  for (double& v : w) v /= s;
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) t += w[i];
  w.back() = std::max(0.0, 1.0 - t);
  return w;
}

std::vector<double> dirichlet(std::mt19937_64& rng, const std::vector<double>& shape) {
  std::vector<double> w(shape.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    std::gamma_distribution<double> g(shape[i], 1.0);
    s += (w[i] = g(rng));
  }
  if (!(s > 0.0)) return std::vector<double>(w.size(), 1.0 / double(w.size()));
  return normalized(std::move(w));
}

class Climber {
 public:
  Climber(const SearchSpec& spec, int restart)
      : spec_(spec), space_(spec.space), base_(root_space(spec.space)), rng_(make_seed(spec.seed, restart)) {}

  Point random_point(double sd) {
    std::normal_distribution<double> g(0.0, sd);
    if (base_.is<RealLine>()) return CVector::real({g(rng_)});
    if (base_.is<Schatten>()) {
      const std::size_t m = spec_.dimension == 0 ? 2 : spec_.dimension;
      std::vector<cplx> e(m * m);
      for (auto& z : e) z = {g(rng_), g(rng_)};
      return CMatrix(m, std::move(e));
    }
    if (base_.is<ParallelogramS1>()) {
      std::vector<cplx> e(2 * base_.as<ParallelogramS1>().n);
      for (auto& z : e) z = {g(rng_), g(rng_)};
      return CVector::unit(std::move(e));
    }
    const std::size_t d = spec_.dimension == 0 ? std::size_t(2 * std::max(spec_.max_atoms_x, spec_.max_atoms_y))
                                               : spec_.dimension;
    std::vector<cplx> e(d);
    for (auto& z : e) z = g(rng_);
    Point pt = CVector::unit(std::move(e));
    project_zero_sum(base_, pt);
    return pt;
  }

  State random_state() {
    State s;
    auto fill = [&](Side& side, int lo, int hi) {
      side.min_atoms = lo;
      side.max_atoms = hi;
      std::uniform_int_distribution<int> count(lo, hi);
      const int n = count(rng_);
      for (int i = 0; i < n; ++i) side.atoms.push_back(random_point(1.0));
      side.probs = dirichlet(rng_, std::vector<double>(std::size_t(n), 1.0));
    };
    fill(s.x, spec_.min_atoms_x, spec_.max_atoms_x);
    fill(s.y, spec_.min_atoms_y, spec_.max_atoms_y);
    return s;
  }

  std::optional<State> warm_state() const {
    if (!spec_.warm_start || spec_.objective != SearchObjective::Roundness) return std::nullopt;
    if (space_.is<WeightedLq>()) {
      const int n = std::min(spec_.max_atoms_x, spec_.max_atoms_y);
      if (n < 2) return std::nullopt;
      return walsh_bernoulli(n);
    }
    if (space_.is<ParallelogramS1>() && spec_.p >= 1.0) {
      const auto nc = make_schatten_parallelogram(int(space_.as<ParallelogramS1>().n), spec_.p);
      return from_config(nc.config);
    }
    return std::nullopt;
  }

  double evaluate(const State& s) const {
    try {
      const double v = certify_ratio(to_config(s), spec_.objective, spec_.barycenter);
      return std::isfinite(v) ? v : kNegInf;
    } catch (const DegenerateRatio&) {
      return kNegInf;
    } catch (const std::invalid_argument&) {
      return kNegInf;
    }
  }

  Config to_config(const State& s) const {
    return Config(FiniteDist(space_, s.x.atoms, s.x.probs), FiniteDist(space_, s.y.atoms, s.y.probs), spec_.p);
  }

  // Rescales so that E d(X,Y)^p = 1.
  void normalize(State& s) const {
    const double h = space_.homogeneity();
    if (!(h > 0.0)) return;
    const double cross = cross_moment(FiniteDist(space_, s.x.atoms, s.x.probs),
                                      FiniteDist(space_, s.y.atoms, s.y.probs), spec_.p);
    if (!(cross > 0.0) || !std::isfinite(cross)) return;
    const double factor = std::pow(cross, -1.0 / (h * spec_.p));
    for (auto* side : {&s.x, &s.y})
      for (auto& a : side->atoms) a = scaled(a, factor);
  }

  State propose(const State& s, double scale) {
    State t = s;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = u(rng_);
    Side& side = u(rng_) < 0.5 ? t.x : t.y;
    if (r < 0.6) {
      perturb(side, scale);
    } else if (r < 0.85) {
      std::vector<double> shape(side.probs.size());
      const double kappa = 10.0 / scale;
      for (std::size_t i = 0; i < shape.size(); ++i) shape[i] = kappa * side.probs[i] + 1e-3;
      side.probs = dirichlet(rng_, shape);
    } else {
      const bool can_add = int(side.atoms.size()) < side.max_atoms;
      const bool can_remove = int(side.atoms.size()) > side.min_atoms;
      if (can_add && (!can_remove || u(rng_) < 0.5)) {
        add_atom(side, scale);
      } else if (can_remove) {
        remove_atom(side);
      } else {
        perturb(side, scale);
      }
    }
    return t;
  }

 private:
  static std::mt19937_64 make_seed(std::uint64_t seed, int restart) {
    std::seed_seq seq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), std::uint32_t(restart)};
    return std::mt19937_64(seq);
  }

  State walsh_bernoulli(int n) const {
    // n distinct non-constant Walsh functions on N = 2^k > n points: pairwise
    // independent signs, laid out on disjoint halves of 2N coordinates.
    std::size_t big = 1;
    while (big <= std::size_t(n)) big *= 2;
    const std::vector<double> w(2 * big, 1.0 / double(big));
    State s;
    for (int i = 1; i <= n; ++i) {
      std::vector<cplx> a(2 * big, 0.0), b(2 * big, 0.0);
      for (std::size_t x = 0; x < big; ++x) {
        const double sign = std::popcount(std::size_t(i) & x) % 2 == 0 ? 1.0 : -1.0;
        a[x] = sign;
        b[big + x] = sign;
      }
      s.x.atoms.emplace_back(CVector(std::move(a), w));
      s.y.atoms.emplace_back(CVector(std::move(b), w));
    }
    s.x.probs = s.y.probs = std::vector<double>(std::size_t(n), 1.0 / double(n));
    s.x.min_atoms = spec_.min_atoms_x;
    s.x.max_atoms = std::max(spec_.max_atoms_x, n);
    s.y.min_atoms = spec_.min_atoms_y;
    s.y.max_atoms = std::max(spec_.max_atoms_y, n);
    return s;
  }

  State from_config(const Config& c) const {
    State s;
    s.x.atoms = c.X.atoms();
    s.x.probs = c.X.probs();
    s.y.atoms = c.Y.atoms();
    s.y.probs = c.Y.probs();
    s.x.min_atoms = spec_.min_atoms_x;
    s.x.max_atoms = std::max(spec_.max_atoms_x, int(s.x.atoms.size()));
    s.y.min_atoms = spec_.min_atoms_y;
    s.y.max_atoms = std::max(spec_.max_atoms_y, int(s.y.atoms.size()));
    return s;
  }

  void jitter(Point& pt, std::size_t k, double scale) {
    std::normal_distribution<double> g(0.0, scale);
    const bool cx = complex_entries(base_);
    if (auto* v = std::get_if<CVector>(&pt)) {
      v->entries[k] += cx ? cplx(g(rng_), g(rng_)) : cplx(g(rng_), 0.0);
    } else if (auto* m = std::get_if<CMatrix>(&pt)) {
      m->entries[k] += cplx(g(rng_), g(rng_));
    }
  }

  std::size_t coordinate_count(const Point& pt) const {
    if (const auto* v = std::get_if<CVector>(&pt)) return v->size();
    return std::get<CMatrix>(pt).entries.size();
  }

  void perturb(Side& side, double scale) {
    std::uniform_int_distribution<std::size_t> pick(0, side.atoms.size() - 1);
    Point& pt = side.atoms[pick(rng_)];
    std::uniform_int_distribution<std::size_t> coord(0, coordinate_count(pt) - 1);
    jitter(pt, coord(rng_), scale);
    project_zero_sum(base_, pt);
  }

  void add_atom(Side& side, double scale) {
    std::uniform_int_distribution<std::size_t> pick(0, side.atoms.size() - 1);
    const std::size_t j = pick(rng_);
    Point pt = side.atoms[j];
    for (std::size_t k = 0; k < coordinate_count(pt); ++k) jitter(pt, k, scale);
    project_zero_sum(base_, pt);
    side.atoms.push_back(std::move(pt));
    side.probs[j] *= 0.5;
    side.probs.push_back(side.probs[j]);
    side.probs = normalized(side.probs);
  }

  void remove_atom(Side& side) {
    std::uniform_int_distribution<std::size_t> pick(0, side.atoms.size() - 1);
    const std::size_t j = pick(rng_);
    side.atoms.erase(side.atoms.begin() + std::ptrdiff_t(j));
    side.probs.erase(side.probs.begin() + std::ptrdiff_t(j));
    double s = 0.0;
    for (double v : side.probs) s += v;
    if (!(s > 0.0)) std::fill(side.probs.begin(), side.probs.end(), 1.0);
    side.probs = normalized(side.probs);
  }

  const SearchSpec& spec_;
  const Space& space_;
  const Space& base_;
  std::mt19937_64 rng_;
};

struct RestartOutcome {
  std::optional<State> best;
  double value = kNegInf;
  std::vector<TraceEntry> accepts;
  std::optional<double> warm;
  long accepted = 0;
};

RestartOutcome run_restart(const SearchSpec& spec, int restart) {
  Climber climber(spec, restart);
  RestartOutcome out;
  std::optional<State> start = restart == 0 ? climber.warm_state() : std::nullopt;
  double value = kNegInf;
  if (start) {
    value = climber.evaluate(*start);
    if (value > kNegInf) out.warm = value;
  }
  for (int attempt = 0; value == kNegInf && attempt < 100; ++attempt) {
    start = climber.random_state();
    value = climber.evaluate(*start);
  }
  if (value == kNegInf) throw std::runtime_error("run_search: no non-degenerate starting configuration found");

  State cur = *start;
  const long base_iter = long(restart) * spec.budget;
  out.accepts.push_back({base_iter, value});
  double scale = 1.0;
  for (long it = 0; it < spec.budget; ++it) {
    State cand = climber.propose(cur, scale);
    const double v = climber.evaluate(cand);
    bool accept = v > value;
    if (accept) {
      // Record the value of the normalized configuration, which is what is kept.
      climber.normalize(cand);
      const double vn = climber.evaluate(cand);
      accept = vn > value;
      if (accept) {
        cur = std::move(cand);
        value = vn;
        out.accepts.push_back({base_iter + it + 1, value});
        ++out.accepted;
      }
    }
    scale = std::clamp(scale * (accept ? 1.5 : 0.9), kMinScale, kMaxScale);
  }
  out.best = std::move(cur);
  out.value = value;
  return out;
}

void validate(const SearchSpec& s) {
  if (s.budget < 1) throw std::invalid_argument("run_search: budget must be >= 1");
  if (s.restarts < 1) throw std::invalid_argument("run_search: restarts must be >= 1");
  if (s.min_atoms_x < 1 || s.min_atoms_y < 1) throw std::invalid_argument("run_search: atom bounds must be >= 1");
  if (s.max_atoms_x < s.min_atoms_x || s.max_atoms_y < s.min_atoms_y)
    throw std::invalid_argument("run_search: max atoms below min atoms");
  if (!(s.p > 0.0) || !std::isfinite(s.p)) throw std::invalid_argument("run_search: p must be positive and finite");
  const Space& base = root_space(s.space);
  if (base.is<BipartiteGraph>()) throw std::invalid_argument("run_search: graph spaces are not supported");
  if (s.objective != SearchObjective::Roundness && !s.space.is_linear())
    throw std::invalid_argument("run_search: " + to_string(s.objective) + " needs a linear space");
  if (base.is<WeightedLq>() && s.dimension == 1 && base.as<WeightedLq>().zero_sum)
    throw std::invalid_argument("run_search: zero-sum points need dimension >= 2");
}

}  // namespace

std::string to_string(SearchObjective o) {
  switch (o) {
    case SearchObjective::Roundness: return "roundness";
    case SearchObjective::Barycenter: return "barycenter";
    case SearchObjective::Mixture: return "mixture";
  }
  return "unknown";
}

std::optional<SearchObjective> objective_from_string(const std::string& s) {
  for (auto o : {SearchObjective::Roundness, SearchObjective::Barycenter, SearchObjective::Mixture})
    if (to_string(o) == s) return o;
  return std::nullopt;
}

double certify_ratio(const Config& c, SearchObjective objective, const BarycenterOptions& opts) {
  switch (objective) {
    case SearchObjective::Roundness: return roundness_ratio(c).value;
    case SearchObjective::Barycenter: return barycenter_ratio(c, opts).value;
    case SearchObjective::Mixture: return mixture_ratio(c).value;
  }
  throw std::invalid_argument("certify_ratio: unknown objective");
}

SearchResult run_search(const SearchSpec& spec) {
  validate(spec);
  std::vector<RestartOutcome> outcomes(std::size_t(spec.restarts));
  parallel_for(outcomes.size(), [&](std::size_t r) { outcomes[r] = run_restart(spec, int(r)); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;

  std::vector<TraceEntry> trace;
  long accepted = 0;
  for (const auto& o : outcomes) {
    accepted += o.accepted;
    for (const auto& e : o.accepts)
      if (trace.empty() || e.ratio > trace.back().ratio) trace.push_back(e);
  }

  const State& s = *outcomes[best].best;
  Config cfg(FiniteDist(spec.space, s.x.atoms, s.x.probs), FiniteDist(spec.space, s.y.atoms, s.y.probs), spec.p);
  const double certified = certify_ratio(cfg, spec.objective, spec.barycenter);
  return SearchResult{std::move(cfg), certified,       std::move(trace), spec.seed, int(best),
                      outcomes[0].warm, accepted, "empirical lower bound"};
}

}  // namespace banach
