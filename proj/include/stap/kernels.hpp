#pragma once

// Dense complex products that dominate the runtime. Each kernel exists twice:
// a serial reference and an OpenMP version that splits the output entries
// across threads. Every output entry is computed by the same inner routine in
// both versions, so results agree bit for bit.

#include "stap/types.hpp"

namespace stap::kernels {

namespace serial {
/// A^H B.
CMatrix adjoint_product(const CMatrix& a, const CMatrix& b);
/// A^H A, Hermitian by construction (upper triangle computed, then mirrored).
CMatrix gram(const CMatrix& a);
}  // namespace serial

namespace omp {
CMatrix adjoint_product(const CMatrix& a, const CMatrix& b);
CMatrix gram(const CMatrix& a);
}  // namespace omp

// Default dispatch used by the library.
inline CMatrix adjoint_product(const CMatrix& a, const CMatrix& b) { return omp::adjoint_product(a, b); }
inline CMatrix gram(const CMatrix& a) { return omp::gram(a); }

}  // namespace stap::kernels
