#pragma once

#include <vector>

#include "banach/spaces.hpp"

namespace banach {

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  std::vector<double> values;
  /// Column k holds the eigenvector for values[k].
  CMatrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi on the real symmetric embedding [[Re H, -Im H], [Im H, Re H]].
/// Iterates until the off-diagonal Frobenius mass is below tol (absolute).
HermitianEigen hermitian_eigen(const CMatrix& h, double tol = 1e-12);

/// Thin SVD A = U diag(s) V*, singular values descending. V comes from the
/// eigenvectors of A*A; s_k = |A v_k| and u_k = A v_k / s_k (u_k = 0 when
/// s_k vanishes).
struct Svd {
  std::vector<double> values;
  CMatrix u;
  CMatrix v;
};

Svd svd_via_gram(const CMatrix& a, double tol = 1e-12);

std::vector<double> singular_values(const CMatrix& a, double tol = 1e-12);

}  // namespace banach
