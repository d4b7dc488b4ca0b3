#include "stap/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace stap {

bool is_hermitian(const CMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  if (scale == 0) return true;
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

CVector hermitian_solve(const HermitianSystem& system) {
  const CMatrix& a = system.matrix;
  if (a.rows() != a.cols()) throw DimensionError("hermitian_solve: matrix is not square");
  require_same(system.rhs.size(), a.rows(), "hermitian_solve rhs length");
  if (!(system.ridge >= 0)) throw std::invalid_argument("hermitian_solve: ridge must be >= 0");
  if (!is_hermitian(a)) throw std::invalid_argument("hermitian_solve: matrix is not Hermitian");

  CMatrix shifted = a;
  shifted.diagonal().array() += system.ridge;
  Eigen::LLT<CMatrix, Eigen::Lower> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("hermitian_solve: system is not positive definite");
  }
  CVector x = llt.solve(system.rhs);
  if (!x.allFinite()) throw SingularMatrixError("hermitian_solve: non-finite solution");
  return x;
}

EigenDecomposition eig_hermitian(const CMatrix& a) {
  if (!is_hermitian(a, 1e-10)) throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) throw SingularMatrixError("eig_hermitian: no convergence");
  return EigenDecomposition{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

CgResult cg_regularized_solve(const HermitianOperator& op, const CVector& b, double ridge, double tol,
                              int max_iter, FlopCounter* flops) {
  if (!(ridge >= 0)) throw std::invalid_argument("cg_regularized_solve: ridge must be >= 0");
  if (max_iter < 1) throw std::invalid_argument("cg_regularized_solve: max_iter must be >= 1");
  const long n = b.size();
  const double b_norm = b.norm();

  CgResult result;
  result.x = CVector::Zero(n);
  if (b_norm == 0) {
    result.converged = true;
    return result;
  }

  CVector x = CVector::Zero(n);
  CVector r = b;
  CVector p = r;
  CVector ap(n);
  double rr = r.squaredNorm();
  double best = std::sqrt(rr) / b_norm;
  result.relative_residual = best;

  for (int it = 1; it <= max_iter; ++it) {
    op(p, ap);
    ap += ridge * p;
    const double pap = p.dot(ap).real();
    if (!(pap > 0)) break;  // operator not PD along p
    const double alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    if (flops) flops->add(static_cast<std::uint64_t>(5 * n));

    const double rel = std::sqrt(rr_next) / b_norm;
    result.iterations = it;
    if (rel < best) {
      best = rel;
      result.x = x;
      result.relative_residual = rel;
    }
    if (rel <= tol) {
      result.converged = true;
      return result;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return result;
}

}  // namespace stap
