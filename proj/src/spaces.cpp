#include "banach/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "banach/linalg.hpp"

namespace banach {

namespace {

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string fmt_real(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const CVector& as_vector(const Point& p, const char* who) {
  if (const auto* v = std::get_if<CVector>(&p)) return *v;
  throw std::invalid_argument(std::string(who) + ": expected a vector point");
}

const CMatrix& as_matrix(const Point& p, const char* who) {
  if (const auto* m = std::get_if<CMatrix>(&p)) return *m;
  throw std::invalid_argument(std::string(who) + ": expected a matrix point");
}

const Vertex& as_vertex(const Point& p, const char* who) {
  if (const auto* v = std::get_if<Vertex>(&p)) return *v;
  throw std::invalid_argument(std::string(who) + ": expected a graph vertex");
}

void require_same_shape(const CVector& x, const CVector& y, const char* who) {
  if (x.size() != y.size()) throw std::invalid_argument(std::string(who) + ": mismatched vector lengths");
  if (x.weights != y.weights) throw std::invalid_argument(std::string(who) + ": mismatched coordinate weights");
}

CVector difference(const CVector& x, const CVector& y) {
  CVector d;
  d.entries.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) d.entries[k] = x.entries[k] - y.entries[k];
  d.weights = x.weights;
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// Point types

CVector::CVector(std::vector<cplx> e, std::vector<double> w) : entries(std::move(e)), weights(std::move(w)) {
  if (entries.empty()) throw std::invalid_argument("CVector: at least one entry required");
  if (entries.size() != weights.size()) throw std::invalid_argument("CVector: entries and weights differ in length");
  for (double w8 : weights)
    if (!(w8 >= 0.0) || !std::isfinite(w8)) throw std::invalid_argument("CVector: weights must be finite and >= 0");
  for (const auto& z : entries)
    if (!finite(z)) throw std::invalid_argument("CVector: non-finite entry");
}

CVector CVector::unit(std::vector<cplx> e) {
  std::vector<double> w(e.size(), 1.0);
  return CVector(std::move(e), std::move(w));
}

CVector CVector::real(const std::vector<double>& xs) {
  std::vector<cplx> e(xs.begin(), xs.end());
  return unit(std::move(e));
}

CVector CVector::zeros(std::size_t n) { return unit(std::vector<cplx>(n, 0.0)); }

CMatrix::CMatrix(std::size_t m, std::vector<cplx> e) : dim(m), entries(std::move(e)) {
  if (m == 0) throw std::invalid_argument("CMatrix: dimension must be positive");
  if (entries.size() != m * m) throw std::invalid_argument("CMatrix: entry count must be m*m");
}

CMatrix CMatrix::zeros(std::size_t m) { return CMatrix(m, std::vector<cplx>(m * m, 0.0)); }

CMatrix CMatrix::identity(std::size_t m) {
  CMatrix a = zeros(m);
  for (std::size_t i = 0; i < m; ++i) a(i, i) = 1.0;
  return a;
}

CMatrix CMatrix::diag(const std::vector<cplx>& d) {
  CMatrix a = zeros(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) a(i, i) = d[i];
  return a;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out = zeros(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (rhs.dim != dim) throw std::invalid_argument("CMatrix: dimension mismatch");
  CMatrix out = zeros(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx(0.0)) continue;
      for (std::size_t j = 0; j < dim; ++j) out(i, j) += aik * rhs(k, j);
    }
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rhs.dim != dim) throw std::invalid_argument("CMatrix: dimension mismatch");
  CMatrix out = *this;
  for (std::size_t k = 0; k < entries.size(); ++k) out.entries[k] -= rhs.entries[k];
  return out;
}

// ---------------------------------------------------------------------------
// Norms

double lq_norm(const CVector& x, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm: q must be >= 1");
  if (std::isinf(q)) {
    bool any = false;
    double best = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x.weights[k] <= 0.0) continue;
      any = true;
      best = std::max(best, std::abs(x.entries[k]));
    }
    if (!any) throw std::invalid_argument("lq_norm: q = inf needs a positive weight");
    return best;
  }
  // Scale by the largest modulus to avoid overflow in |x|^q.
  double scale = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x.weights[k] > 0.0) scale = std::max(scale, std::abs(x.entries[k]));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = std::abs(x.entries[k]);
    if (x.weights[k] <= 0.0 || a == 0.0) continue;
    s += x.weights[k] * (q == 1.0 ? a / scale : q == 2.0 ? (a / scale) * (a / scale) : std::pow(a / scale, q));
  }
  return scale * std::pow(s, 1.0 / q);
}

double schatten_norm(const CMatrix& a, double q) {
  if (!(q >= 1.0) || std::isinf(q)) throw std::invalid_argument("schatten_norm: q must lie in [1, inf)");
  for (const auto& z : a.entries)
    if (!finite(z)) throw std::invalid_argument("schatten_norm: non-finite entry");
  const auto sv = singular_values(a);
  const double top = sv.empty() ? 0.0 : sv.front();
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double x : sv) s += std::pow(x / top, q);
  return top * std::pow(s, 1.0 / q);
}

double parallelogram_lambda(std::span<const cplx> c, bool printed_lambda) {
  double rr = 0.0, ii = 0.0, ri = 0.0;
  for (const auto& z : c) {
    rr += z.real() * z.real();
    ii += z.imag() * z.imag();
    ri += z.real() * z.imag();
  }
  const double radicand = printed_lambda ? rr * ii - ri : rr * ii - ri * ri;
  return std::sqrt(std::max(0.0, radicand));
}

double parallelogram_s1_distance(const CVector& a, const CVector& b, std::size_t n, bool printed_lambda) {
  if (a.size() != b.size()) throw std::invalid_argument("parallelogram_s1_distance: mismatched lengths");
  if (a.size() != 2 * n) throw std::invalid_argument("parallelogram_s1_distance: points must have length 2n");
  std::vector<cplx> c(a.size());
  double norm2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    c[k] = a.entries[k] - b.entries[k];
    norm2 += std::norm(c[k]);
  }
  const double lambda = parallelogram_lambda(c, printed_lambda);
  double lower = norm2 - 2.0 * lambda;
  // Rounding can push the radicand just below zero when Re c and Im c are
  // orthogonal with equal lengths.
  if (lower < 0.0 && lower > -1e-12 * std::max(1.0, norm2)) lower = 0.0;
  return 0.5 * std::sqrt(norm2 + 2.0 * lambda) + 0.5 * std::sqrt(std::max(0.0, lower));
}

// ---------------------------------------------------------------------------
// Space

Space::Space(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const WeightedLq& k) {
                   if (!(k.q >= 1.0)) throw std::invalid_argument("WeightedLq: q must be >= 1");
                 },
                 [](const Schatten& k) {
                   if (!(k.q >= 1.0) || std::isinf(k.q)) throw std::invalid_argument("Schatten: q must lie in [1, inf)");
                 },
                 [](const ParallelogramS1& k) {
                   if (k.n == 0) throw std::invalid_argument("ParallelogramS1: n must be positive");
                 },
                 [](const Snowflake& k) {
                   if (!k.base) throw std::invalid_argument("Snowflake: missing base space");
                   if (!(k.alpha > 0.0 && k.alpha <= 1.0))
                     throw std::invalid_argument("Snowflake: alpha must lie in (0, 1]");
                 },
                 [](const BipartiteGraph& k) {
                   if (k.n == 0) throw std::invalid_argument("BipartiteGraph: n must be positive");
                 },
                 [](const RealLine&) {},
             },
             kind_);
}

Space Space::lq(double q, bool zero_sum) { return Space(WeightedLq{q, zero_sum}); }
Space Space::schatten(double q) { return Space(Schatten{q}); }
Space Space::parallelogram(std::size_t n, bool printed_lambda) { return Space(ParallelogramS1{n, printed_lambda}); }
Space Space::snowflake(Space base, double alpha) {
  return Space(Snowflake{std::make_shared<const Space>(std::move(base)), alpha});
}
Space Space::bipartite(std::size_t n) { return Space(BipartiteGraph{n}); }
Space Space::real_line() { return Space(RealLine{}); }

bool Space::is_linear() const { return !is<Snowflake>() && !is<BipartiteGraph>(); }

void Space::validate_point(const Point& p) const {
  std::visit(overloaded{
                 [&](const WeightedLq& k) {
                   const auto& v = as_vector(p, "WeightedLq");
                   if (v.size() == 0) throw std::invalid_argument("WeightedLq: empty vector");
                   if (k.zero_sum) {
                     cplx s = 0.0;
                     double scale = 0.0;
                     for (const auto& z : v.entries) {
                       s += z;
                       scale = std::max(scale, std::abs(z));
                     }
                     if (std::abs(s) > 1e-9 * std::max(1.0, scale) * static_cast<double>(v.size()))
                       throw std::invalid_argument("WeightedLq: point violates the zero-sum constraint (sum " + std::to_string(std::abs(s)) + ")");
                   }
                 },
                 [&](const Schatten&) { as_matrix(p, "Schatten"); },
                 [&](const ParallelogramS1& k) {
                   const auto& v = as_vector(p, "ParallelogramS1");
                   if (v.size() != 2 * k.n) throw std::invalid_argument("ParallelogramS1: points must have length 2n");
                   for (double w : v.weights)
                     if (w != 1.0) throw std::invalid_argument("ParallelogramS1: points must carry unit weights");
                 },
                 [&](const Snowflake& k) { k.base->validate_point(p); },
                 [&](const BipartiteGraph& k) {
                   const auto& v = as_vertex(p, "BipartiteGraph");
                   if (v.index >= k.n) throw std::invalid_argument("BipartiteGraph: vertex index out of range");
                 },
                 [&](const RealLine&) {
                   const auto& v = as_vector(p, "RealLine");
                   if (v.size() != 1) throw std::invalid_argument("RealLine: points are length-1 vectors");
                   if (v.entries[0].imag() != 0.0) throw std::invalid_argument("RealLine: points must be real");
                 },
             },
             kind_);
}

double Space::distance(const Point& x, const Point& y) const {
  return std::visit(overloaded{
                        [&](const WeightedLq& k) {
                          const auto& a = as_vector(x, "WeightedLq");
                          const auto& b = as_vector(y, "WeightedLq");
                          require_same_shape(a, b, "WeightedLq");
                          return lq_norm(difference(a, b), k.q);
                        },
                        [&](const Schatten& k) {
                          const auto& a = as_matrix(x, "Schatten");
                          const auto& b = as_matrix(y, "Schatten");
                          return schatten_norm(a - b, k.q);
                        },
                        [&](const ParallelogramS1& k) {
                          return parallelogram_s1_distance(as_vector(x, "ParallelogramS1"),
                                                           as_vector(y, "ParallelogramS1"), k.n, k.printed_lambda);
                        },
                        [&](const Snowflake& k) { return std::pow(k.base->distance(x, y), k.alpha); },
                        [&](const BipartiteGraph&) {
                          const auto& a = as_vertex(x, "BipartiteGraph");
                          const auto& b = as_vertex(y, "BipartiteGraph");
                          if (a == b) return 0.0;
                          return a.side == b.side ? 2.0 : 1.0;
                        },
                        [&](const RealLine&) {
                          const auto& a = as_vector(x, "RealLine");
                          const auto& b = as_vector(y, "RealLine");
                          if (a.size() != 1 || b.size() != 1) throw std::invalid_argument("RealLine: length-1 points");
                          return std::abs(a.entries[0] - b.entries[0]);
                        },
                    },
                    kind_);
}

double Space::powered_distance(const Point& x, const Point& y, double p) const {
  if (const auto* s = std::get_if<Snowflake>(&kind_)) return s->base->powered_distance(x, y, s->alpha * p);
  return std::pow(distance(x, y), p);
}

double Space::homogeneity() const {
  if (const auto* s = std::get_if<Snowflake>(&kind_)) return s->alpha * s->base->homogeneity();
  if (is<BipartiteGraph>()) return 0.0;
  return 1.0;
}

std::string Space::label() const {
  return std::visit(overloaded{
                        [](const WeightedLq& k) {
                          return std::string(k.zero_sum ? "lq0:" : "lq:") + fmt_real(k.q);
                        },
                        [](const Schatten& k) { return "schatten:" + fmt_real(k.q); },
                        [](const ParallelogramS1& k) {
                          return std::string(k.printed_lambda ? "parallelogram-printed:" : "parallelogram:") +
                                 std::to_string(k.n);
                        },
                        [](const Snowflake& k) { return "snowflake(" + k.base->label() + "," + fmt_real(k.alpha) + ")"; },
                        [](const BipartiteGraph& k) { return "bipartite:" + std::to_string(k.n); },
                        [](const RealLine&) { return std::string("real"); },
                    },
                    kind_);
}

bool Space::operator==(const Space& other) const {
  if (kind_.index() != other.kind_.index()) return false;
  return std::visit(overloaded{
                        [&](const WeightedLq& k) {
                          const auto& o = other.as<WeightedLq>();
                          return k.q == o.q && k.zero_sum == o.zero_sum;
                        },
                        [&](const Schatten& k) { return k.q == other.as<Schatten>().q; },
                        [&](const ParallelogramS1& k) {
                          const auto& o = other.as<ParallelogramS1>();
                          return k.n == o.n && k.printed_lambda == o.printed_lambda;
                        },
                        [&](const Snowflake& k) {
                          const auto& o = other.as<Snowflake>();
                          return k.alpha == o.alpha && *k.base == *o.base;
                        },
                        [&](const BipartiteGraph& k) { return k.n == other.as<BipartiteGraph>().n; },
                        [&](const RealLine&) { return true; },
                    },
                    kind_);
}

// ---------------------------------------------------------------------------
// Linear helpers

std::span<const cplx> coordinates(const Point& p) {
  if (const auto* v = std::get_if<CVector>(&p)) return v->entries;
  if (const auto* m = std::get_if<CMatrix>(&p)) return m->entries;
  throw std::invalid_argument("coordinates: point has no linear structure");
}

Point with_coordinates(const Point& shape, std::vector<cplx> coords) {
  if (const auto* v = std::get_if<CVector>(&shape)) {
    if (coords.size() != v->size()) throw std::invalid_argument("with_coordinates: length mismatch");
    return CVector(std::move(coords), v->weights);
  }
  if (const auto* m = std::get_if<CMatrix>(&shape)) return CMatrix(m->dim, std::move(coords));
  throw std::invalid_argument("with_coordinates: point has no linear structure");
}

Point point_difference(const Point& x, const Point& y) {
  const auto a = coordinates(x);
  const auto b = coordinates(y);
  if (a.size() != b.size()) throw std::invalid_argument("point_difference: shape mismatch");
  std::vector<cplx> d(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) d[k] = a[k] - b[k];
  return with_coordinates(x, std::move(d));
}

Point scaled(const Point& x, double factor) {
  const auto a = coordinates(x);
  std::vector<cplx> d(a.begin(), a.end());
  for (auto& z : d) z *= factor;
  return with_coordinates(x, std::move(d));
}

void accumulate_norm_power_gradient(const Space& space, const Point& diff, double p, double weight,
                                    std::span<cplx> grad) {
  const auto d = coordinates(diff);
  if (grad.size() != d.size()) throw std::invalid_argument("accumulate_norm_power_gradient: size mismatch");
  const double nrm = space.distance(diff, with_coordinates(diff, std::vector<cplx>(d.size(), 0.0)));
  if (nrm == 0.0) return;
  // d/dd ||d||^p = p ||d||^{p-1} * d/dd ||d||
  const double outer = weight * p * std::pow(nrm, p - 1.0);

  std::visit(overloaded{
                 [&](const WeightedLq& k) {
                   const auto& w = std::get<CVector>(diff).weights;
                   if (std::isinf(k.q)) {
                     std::size_t arg = d.size();
                     double best = -1.0;
                     for (std::size_t i = 0; i < d.size(); ++i) {
                       if (w[i] <= 0.0) continue;
                       const double m = std::abs(d[i]);
                       if (m > best) {
                         best = m;
                         arg = i;
                       }
                     }
                     if (arg < d.size() && best > 0.0) grad[arg] += outer * d[arg] / best;
                     return;
                   }
                   // d||d||_q / d d_i = w_i |d_i|^{q-1} (d_i/|d_i|) / ||d||^{q-1}
                   for (std::size_t i = 0; i < d.size(); ++i) {
                     const double m = std::abs(d[i]);
                     if (m == 0.0 || w[i] <= 0.0) continue;
                     grad[i] += outer * w[i] * std::pow(m / nrm, k.q - 1.0) * (d[i] / m);
                   }
                 },
                 [&](const Schatten& k) {
                   // grad ||A||_{S_q} = sum_i (s_i/||A||)^{q-1} u_i v_i^*
                   const auto& a = std::get<CMatrix>(diff);
                   const Svd svd = svd_via_gram(a);
                   const std::size_t m = a.dim;
                   for (std::size_t r = 0; r < m; ++r) {
                     const double s = svd.values[r];
                     if (s == 0.0) continue;
                     const double f = k.q == 1.0 ? 1.0 : std::pow(s / nrm, k.q - 1.0);
                     for (std::size_t i = 0; i < m; ++i)
                       for (std::size_t j = 0; j < m; ++j)
                         grad[i * m + j] += outer * f * svd.u(i, r) * std::conj(svd.v(j, r));
                   }
                 },
                 [&](const ParallelogramS1& k) {
                   if (k.printed_lambda)
                     throw std::invalid_argument("gradient unavailable for the printed-lambda parallelogram norm");
                   // The norm is the top singular value of the real 2n x 2 matrix
                   // M = [Re d, Im d]; its gradient is u v^T with u = M v / s.
                   double rr = 0.0, ii = 0.0, ri = 0.0;
                   for (const auto& z : d) {
                     rr += z.real() * z.real();
                     ii += z.imag() * z.imag();
                     ri += z.real() * z.imag();
                   }
                   const double half_gap = 0.5 * (rr - ii);
                   const double root = std::sqrt(half_gap * half_gap + ri * ri);
                   const double lam = 0.5 * (rr + ii) + root;
                   double v0, v1;
                   if (root == 0.0) {
                     v0 = 1.0;
                     v1 = 0.0;
                   } else if (half_gap >= 0.0) {
                     v0 = half_gap + root;
                     v1 = ri;
                   } else {
                     v0 = ri;
                     v1 = root - half_gap;
                   }
                   const double vn = std::hypot(v0, v1);
                   v0 /= vn;
                   v1 /= vn;
                   const double s = std::sqrt(lam);
                   if (s == 0.0) return;
                   for (std::size_t i = 0; i < d.size(); ++i) {
                     const double ui = (d[i].real() * v0 + d[i].imag() * v1) / s;
                     grad[i] += outer * cplx(ui * v0, ui * v1);
                   }
                 },
                 [&](const RealLine&) { grad[0] += outer * d[0] / std::abs(d[0]); },
                 [&](const auto&) { throw std::invalid_argument("gradient requires a linear space"); },
             },
             space.kind());
}

}  // namespace banach
