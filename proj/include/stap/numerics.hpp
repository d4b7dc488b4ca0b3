#pragma once

#include "stap/types.hpp"

#include <functional>

namespace stap {

struct HermitianSystem {
  CMatrix matrix;   // A, Hermitian
  CVector rhs;      // b
  double ridge = 0; // lambda >= 0
};

/// Solves (A + lambda I) x = b by Cholesky. Throws SingularMatrixError when
/// A + lambda I is not positive definite, std::invalid_argument when A is not
/// Hermitian.
CVector hermitian_solve(const HermitianSystem& system);

struct EigenDecomposition {
  RVector values;   // descending
  CMatrix vectors;  // columns match `values`
};

EigenDecomposition eig_hermitian(const CMatrix& a);

bool is_hermitian(const CMatrix& a, double rel_tol = 1e-12);

/// y = Op(x) for a Hermitian positive semidefinite operator.
using HermitianOperator = std::function<void(const CVector& x, CVector& y)>;

struct CgResult {
  CVector x;
  int iterations = 0;
  double relative_residual = 0;
  bool converged = false;
};

/// Conjugate gradients on (Op + ridge I) x = b without forming the matrix.
/// Stops at ||r|| <= tol ||b|| or after max_iter iterations; in the latter
/// case the iterate with the smallest residual is returned and `converged`
/// is false. Counts vector work in `flops`; the operator counts its own.
CgResult cg_regularized_solve(const HermitianOperator& op, const CVector& b, double ridge, double tol,
                              int max_iter, FlopCounter* flops = nullptr);

}  // namespace stap
