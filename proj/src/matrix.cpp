#include "flowfactory/matrix.hpp"

#include <utility>

namespace flowfactory {

BigInt determinant(IntMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  BigInt previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m(pivot, k) == 0) ++pivot;
      if (pivot == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(pivot, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
      }
    }
    previous = m(k, k);
  }
  BigInt det = m(n - 1, n - 1);
  return sign > 0 ? det : BigInt(-det);
}

Rational determinant(const RationalMatrix& m) {
  const std::size_t n = m.size();
  IntMatrix scaled(n);
  BigInt scale = 1;
  for (std::size_t r = 0; r < n; ++r) {
    BigInt row_lcm = 1;
    for (std::size_t c = 0; c < n; ++c) mpz_lcm(row_lcm.get_mpz_t(), row_lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < n; ++c) scaled(r, c) = m(r, c).get_num() * (row_lcm / m(r, c).get_den());
    scale *= row_lcm;
  }
  Rational out(determinant(std::move(scaled)), scale);
  out.canonicalize();
  return out;
}

bool is_zero_line_sum(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    Rational row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row += m(i, j);
      col += m(j, i);
    }
    if (row != 0 || col != 0) return false;
  }
  return true;
}

}  // namespace flowfactory
