#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace stap {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A system that must be positive definite is not (after any ridge).
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counts complex multiply-accumulates performed by a solver. One complex MAC
/// is 8 real floating-point operations.
struct FlopCounter {
  std::uint64_t cmacs = 0;

  void add(std::uint64_t n) { cmacs += n; }
  std::uint64_t flops() const { return 8 * cmacs; }
};

inline void require_same(long a, long b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": " + std::to_string(a) + " != " + std::to_string(b));
  }
}

}  // namespace stap
