#include "stap/kernels.hpp"

#include <omp.h>

namespace stap::kernels {

namespace {

using Index = Eigen::Index;

// Shared by both variants: conj(a_i)^T b_j over contiguous columns.
inline cplx column_dot(const CMatrix& a, Index i, const CMatrix& b, Index j) {
  return a.col(i).dot(b.col(j));
}

void check_rows(const CMatrix& a, const CMatrix& b) {
  require_same(a.rows(), b.rows(), "adjoint_product row count");
}

}  // namespace

namespace serial {

CMatrix adjoint_product(const CMatrix& a, const CMatrix& b) {
  check_rows(a, b);
  CMatrix out(a.cols(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) {
    for (Index i = 0; i < a.cols(); ++i) {
      out(i, j) = column_dot(a, i, b, j);
    }
  }
  return out;
}

CMatrix gram(const CMatrix& a) {
  const Index n = a.cols();
  CMatrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      out(i, j) = column_dot(a, i, a, j);
    }
  }
  for (Index j = 0; j < n; ++j) {
    out(j, j) = cplx(out(j, j).real(), 0.0);
    for (Index i = j + 1; i < n; ++i) out(i, j) = std::conj(out(j, i));
  }
  return out;
}

}  // namespace serial

namespace omp {

CMatrix adjoint_product(const CMatrix& a, const CMatrix& b) {
  check_rows(a, b);
  const Index rows = a.cols();
  const Index cols = b.cols();
  CMatrix out(rows, cols);
  const Index total = rows * cols;
#pragma omp parallel for schedule(static) if (total >= 4096)
  for (Index k = 0; k < total; ++k) {
    const Index j = k / rows;
    const Index i = k % rows;
    out(i, j) = column_dot(a, i, b, j);
  }
  return out;
}

CMatrix gram(const CMatrix& a) {
  const Index n = a.cols();
  CMatrix out(n, n);
  // Columns of the upper triangle have unequal length; dynamic scheduling
  // keeps the threads balanced.
#pragma omp parallel for schedule(dynamic, 4) if (n >= 32)
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) {
      out(i, j) = column_dot(a, i, a, j);
    }
  }
  for (Index j = 0; j < n; ++j) {
    out(j, j) = cplx(out(j, j).real(), 0.0);
    for (Index i = j + 1; i < n; ++i) out(i, j) = std::conj(out(j, i));
  }
  return out;
}

}  // namespace omp

}  // namespace stap::kernels
