#include "banach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace banach {

namespace {

// Dense real symmetric matrix, row-major.
struct RealSym {
  std::size_t n;
  std::vector<double> a;
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

double off_diagonal_mass(const RealSym& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j)
      if (i != j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

constexpr int kMaxSweeps = 100;

// Classical cyclic Jacobi (row-by-row sweeps), accumulating rotations in v.
int cyclic_jacobi(RealSym& m, RealSym& v, double tol) {
  const std::size_t n = m.n;
  double frob = 0.0;
  for (double x : m.a) frob += x * x;
  frob = std::sqrt(frob);
  // Absolute target, floored at what double precision can resolve.
  const double target = std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * frob);

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_mass(m) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) continue;
        const double app = m(p, p);
        const double aqq = m(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return sweep;
}

}  // namespace

HermitianEigen hermitian_eigen(const CMatrix& h, double tol) {
  const std::size_t m = h.dim;
  for (const auto& z : h.entries)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("hermitian_eigen: non-finite entry");

  // [[Re H, -Im H], [Im H, Re H]] has the spectrum of H with each eigenvalue
  // doubled; eigenvectors come in pairs (x, y) ~ x + i y.
  const std::size_t n = 2 * m;
  RealSym a{n, std::vector<double>(n * n, 0.0)};
  RealSym v{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      // Symmetrize so tiny non-Hermitian rounding does not leak in.
      const cplx z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(i, j) = z.real();
      a(i + m, j + m) = z.real();
      a(i, j + m) = -z.imag();
      a(i + m, j) = z.imag();
    }
  }
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  HermitianEigen out;
  out.sweeps = cyclic_jacobi(a, v, tol);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  // Select m complex-orthonormal eigenvectors from the 2m real ones. The
  // partner (-y, x) of an accepted (x, y) is i(x + iy) and projects to zero.
  out.vectors = CMatrix::zeros(m);
  std::vector<std::vector<cplx>> chosen;
  std::vector<double> chosen_values;
  std::vector<bool> used(n, false);
  auto residual = [&](std::size_t idx) {
    std::vector<cplx> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = cplx(v(i, idx), v(i + m, idx));
    for (const auto& u : chosen) {
      cplx proj = 0.0;
      for (std::size_t i = 0; i < m; ++i) proj += std::conj(u[i]) * w[i];
      for (std::size_t i = 0; i < m; ++i) w[i] -= proj * u[i];
    }
    return w;
  };
  auto accept = [&](std::size_t idx, std::vector<cplx> w, double nrm) {
    for (auto& z : w) z /= nrm;
    used[idx] = true;
    chosen.push_back(std::move(w));
    chosen_values.push_back(a(idx, idx));
  };
  for (std::size_t idx : order) {
    if (chosen.size() == m) break;
    auto w = residual(idx);
    double nrm = 0.0;
    for (const auto& z : w) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm > 0.5) accept(idx, std::move(w), nrm);
  }
  // Degenerate clusters can leave gaps; fill with the largest residuals.
  while (chosen.size() < m) {
    std::size_t best = n;
    double best_nrm = 0.0;
    for (std::size_t idx : order) {
      if (used[idx]) continue;
      auto w = residual(idx);
      double nrm = 0.0;
      for (const auto& z : w) nrm += std::norm(z);
      nrm = std::sqrt(nrm);
      if (nrm > best_nrm) {
        best_nrm = nrm;
        best = idx;
      }
    }
    if (best == n || best_nrm < 1e-8) break;
    accept(best, residual(best), best_nrm);
  }
  if (chosen.size() != m) throw std::runtime_error("hermitian_eigen: failed to extract eigenvectors");
  std::vector<std::size_t> by_value(m);
  std::iota(by_value.begin(), by_value.end(), 0);
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](std::size_t x, std::size_t y) { return chosen_values[x] < chosen_values[y]; });
  for (std::size_t k = 0; k < m; ++k) {
    out.values.push_back(chosen_values[by_value[k]]);
    for (std::size_t i = 0; i < m; ++i) out.vectors(i, k) = chosen[by_value[k]][i];
  }
  return out;
}

Svd svd_via_gram(const CMatrix& a, double tol) {
  const std::size_t m = a.dim;
  const HermitianEigen eig = hermitian_eigen(a.adjoint() * a, tol);

  Svd out;
  out.u = CMatrix::zeros(m);
  out.v = CMatrix::zeros(m);
  out.values.assign(m, 0.0);
  // Eigenvalues ascend; emit singular values descending.
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t src = m - 1 - k;
    std::vector<cplx> av(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) av[i] += a(i, j) * eig.vectors(j, src);
    double s = 0.0;
    for (const auto& z : av) s += std::norm(z);
    s = std::sqrt(s);
    out.values[k] = s;
    for (std::size_t i = 0; i < m; ++i) {
      out.v(i, k) = eig.vectors(i, src);
      out.u(i, k) = s > 0.0 ? av[i] / s : cplx(0.0);
    }
  }
  // |A v_k| can reorder when eigenvalues are within rounding of each other.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });
  Svd sorted;
  sorted.u = CMatrix::zeros(m);
  sorted.v = CMatrix::zeros(m);
  for (std::size_t k = 0; k < m; ++k) {
    sorted.values.push_back(out.values[order[k]]);
    for (std::size_t i = 0; i < m; ++i) {
      sorted.u(i, k) = out.u(i, order[k]);
      sorted.v(i, k) = out.v(i, order[k]);
    }
  }
  return sorted;
}

std::vector<double> singular_values(const CMatrix& a, double tol) { return svd_via_gram(a, tol).values; }

}  // namespace banach
