#pragma once

// Concrete normed and metric spaces. Every distance used by the toolkit is
// computed through Space::distance / Space::powered_distance.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace banach {

using cplx = std::complex<double>;

/// Complex coordinate vector with per-coordinate (measure) weights.
struct CVector {
  std::vector<cplx> entries;
  std::vector<double> weights;

  CVector() = default;
  CVector(std::vector<cplx> e, std::vector<double> w);

  /// Unit weights.
  static CVector unit(std::vector<cplx> e);
  static CVector real(const std::vector<double>& xs);
  static CVector zeros(std::size_t n);

  std::size_t size() const { return entries.size(); }
  bool operator==(const CVector&) const = default;
};

/// Square complex matrix, row-major.
struct CMatrix {
  std::size_t dim = 0;
  std::vector<cplx> entries;

  CMatrix() = default;
  CMatrix(std::size_t m, std::vector<cplx> e);

  static CMatrix zeros(std::size_t m);
  static CMatrix identity(std::size_t m);
  static CMatrix diag(const std::vector<cplx>& d);

  cplx& operator()(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& rhs) const;
  CMatrix operator-(const CMatrix& rhs) const;
  bool operator==(const CMatrix&) const = default;
};

enum class Side { Left, Right };

/// Vertex of the complete bipartite graph K_{n,n}.
struct Vertex {
  Side side = Side::Left;
  std::size_t index = 0;
  bool operator==(const Vertex&) const = default;
};

using Point = std::variant<CVector, CMatrix, Vertex>;

// ---------------------------------------------------------------------------
// Space kinds

/// Weighted L_q over a finite measure; q = +inf is the sup norm over the
/// positively weighted coordinates. zero_sum restricts the space to the
/// hyperplane {x : sum_k x_k = 0}.
struct WeightedLq {
  double q = 2.0;
  bool zero_sum = false;
};

struct Schatten {
  double q = 1.0;
};

/// C^{2n} under the parallelogram trace-class norm.
struct ParallelogramS1 {
  std::size_t n = 1;
  /// Use the unsquared <Re c, Im c> under the area root.
  bool printed_lambda = false;
};

class Space;

/// d(x,y)^alpha over a base space.
struct Snowflake {
  std::shared_ptr<const Space> base;
  double alpha = 1.0;
};

struct BipartiteGraph {
  std::size_t n = 1;
};

struct RealLine {};

class Space {
 public:
  using Kind = std::variant<WeightedLq, Schatten, ParallelogramS1, Snowflake, BipartiteGraph, RealLine>;

  Space(Kind kind);  // NOLINT(google-explicit-constructor)

  static Space lq(double q, bool zero_sum = false);
  static Space schatten(double q);
  static Space parallelogram(std::size_t n, bool printed_lambda = false);
  static Space snowflake(Space base, double alpha);
  static Space bipartite(std::size_t n);
  static Space real_line();

  const Kind& kind() const { return kind_; }
  template <class K>
  bool is() const {
    return std::holds_alternative<K>(kind_);
  }
  template <class K>
  const K& as() const {
    return std::get<K>(kind_);
  }

  /// Kinds with a vector structure (means, barycenter search).
  bool is_linear() const;

  /// Throws std::invalid_argument when p does not belong to this space.
  void validate_point(const Point& p) const;

  double distance(const Point& x, const Point& y) const;

  /// distance(x,y)^p. Snowflakes fold the exponent into one power call on
  /// the base distance, so (Snowflake(S,a), p) and (S, a*p) agree bitwise.
  double powered_distance(const Point& x, const Point& y, double p) const;

  /// Exponent h with distance(l*x, l*y) = l^h * distance(x, y) for linear
  /// bases; 0 for kinds without a scaling (graphs).
  double homogeneity() const;

  /// Short machine-friendly tag, e.g. "lq:3", "snowflake(real,0.5)".
  std::string label() const;

  bool operator==(const Space& other) const;

 private:
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Norms

/// Weighted l_q norm (sum_k w_k |x_k|^q)^{1/q}; q = inf gives the max of
/// |x_k| over coordinates with w_k > 0.
double lq_norm(const CVector& x, double q);

/// Schatten-q norm via singular values from a cyclic Jacobi
/// eigendecomposition of A*A.
double schatten_norm(const CMatrix& a, double q);

/// Parallelogram trace-class distance between a, b in C^{2n}:
///   1/2 sqrt(|c|^2 + 2 L(c)) + 1/2 sqrt(|c|^2 - 2 L(c)),  c = a - b,
/// L(c) the area spanned by Re c and Im c.
double parallelogram_s1_distance(const CVector& a, const CVector& b, std::size_t n,
                                 bool printed_lambda = false);

/// Area term of the parallelogram norm for a single vector.
double parallelogram_lambda(std::span<const cplx> c, bool printed_lambda = false);

// ---------------------------------------------------------------------------
// Linear structure helpers (CVector / CMatrix points only).

std::span<const cplx> coordinates(const Point& p);
Point with_coordinates(const Point& shape, std::vector<cplx> coords);
Point point_difference(const Point& x, const Point& y);
Point scaled(const Point& x, double factor);

/// Adds weight * grad_d ||d||^p to grad, for d = diff in a linear space.
/// Complex convention: real part is the derivative along Re d_k, imaginary
/// part along Im d_k. Kinks take the zero subgradient for tied or vanishing
/// coordinates; q = inf uses the first maximizing coordinate.
void accumulate_norm_power_gradient(const Space& space, const Point& diff, double p, double weight,
                                    std::span<cplx> grad);

}  // namespace banach
