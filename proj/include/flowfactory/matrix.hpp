#pragma once

#include <cstddef>
#include <vector>

#include "flowfactory/rational.hpp"

namespace flowfactory {

/// Dense row-major square matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t size) : n_(size), data_(size * size, T(0)) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  /// Copy with row and column `k` removed.
  Matrix minor(std::size_t k) const {
    Matrix out(n_ - 1);
    for (std::size_t r = 0, rr = 0; r < n_; ++r) {
      if (r == k) continue;
      for (std::size_t c = 0, cc = 0; c < n_; ++c) {
        if (c == k) continue;
        out(rr, cc++) = (*this)(r, c);
      }
      ++rr;
    }
    return out;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RationalMatrix = Matrix<Rational>;

/// Fraction-free Gaussian elimination (Bareiss) with row pivoting.
/// The empty matrix has determinant 1.
BigInt determinant(IntMatrix m);

/// Clears each row's denominators, then runs the integer elimination.
Rational determinant(const RationalMatrix& m);

bool is_zero_line_sum(const RationalMatrix& m);

}  // namespace flowfactory
