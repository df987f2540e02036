#pragma once

// Dense linear algebra over Z_q for prime q: modular inverse by Fermat,
// column rank and linear solves by Gaussian elimination. Desk-scale
// systems only; everything stays in canonical representatives [0, q).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hololab::zq {

inline std::int64_t mod_reduce(std::int64_t v, std::int64_t q) {
  const std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

inline bool is_prime(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

inline std::int64_t mod_pow(std::int64_t base, std::int64_t exp,
                            std::int64_t q) {
  std::int64_t acc = 1 % q;
  std::int64_t b = mod_reduce(base, q);
  while (exp > 0) {
    if (exp & 1) acc = acc * b % q;
    b = b * b % q;
    exp >>= 1;
  }
  return acc;
}

inline std::int64_t mod_inv(std::int64_t a, std::int64_t q) {
  a = mod_reduce(a, q);
  if (a == 0) throw std::invalid_argument("mod_inv: zero is not invertible");
  return mod_pow(a, q - 2, q);  // q prime
}

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::int64_t q = 2;
  std::vector<std::int64_t> data;  // row-major, entries in [0, q)

  Matrix() = default;
  Matrix(int r, int c, std::int64_t modulus)
      : rows(r), cols(c), q(modulus),
        data(static_cast<std::size_t>(r) * c, 0) {}

  std::int64_t& operator()(int r, int c) {
    return data[static_cast<std::size_t>(r) * cols + c];
  }
  std::int64_t operator()(int r, int c) const {
    return data[static_cast<std::size_t>(r) * cols + c];
  }

  std::vector<std::int64_t> mul_vec(const std::vector<std::int64_t>& x) const {
    if (static_cast<int>(x.size()) != cols)
      throw std::invalid_argument("Matrix::mul_vec: dimension mismatch");
    std::vector<std::int64_t> y(rows, 0);
    for (int r = 0; r < rows; ++r) {
      std::int64_t acc = 0;
      for (int c = 0; c < cols; ++c) acc += (*this)(r, c) * x[c] % q;
      y[r] = mod_reduce(acc, q);
    }
    return y;
  }
};

// rank by row reduction; takes a copy on purpose
inline int rank(Matrix a) {
  int r = 0;
  for (int c = 0; c < a.cols && r < a.rows; ++c) {
    int pivot = -1;
    for (int i = r; i < a.rows; ++i)
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a(r, j), a(pivot, j));
    const std::int64_t inv = mod_inv(a(r, c), a.q);
    for (int j = c; j < a.cols; ++j) a(r, j) = a(r, j) * inv % a.q;
    for (int i = 0; i < a.rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const std::int64_t f = a(i, c);
      for (int j = c; j < a.cols; ++j)
        a(i, j) = mod_reduce(a(i, j) - f * a(r, j), a.q);
    }
    ++r;
  }
  return r;
}

// one solution of A x = b over Z_q, or nullopt when inconsistent
inline std::optional<std::vector<std::int64_t>> solve(
    Matrix a, std::vector<std::int64_t> b) {
  if (static_cast<int>(b.size()) != a.rows)
    throw std::invalid_argument("zq::solve: dimension mismatch");
  std::vector<int> pivot_col(a.rows, -1);
  int r = 0;
  for (int c = 0; c < a.cols && r < a.rows; ++c) {
    int pivot = -1;
    for (int i = r; i < a.rows; ++i)
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < a.cols; ++j) std::swap(a(r, j), a(pivot, j));
    std::swap(b[r], b[pivot]);
    const std::int64_t inv = mod_inv(a(r, c), a.q);
    for (int j = c; j < a.cols; ++j) a(r, j) = a(r, j) * inv % a.q;
    b[r] = b[r] * inv % a.q;
    for (int i = 0; i < a.rows; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const std::int64_t f = a(i, c);
      for (int j = c; j < a.cols; ++j)
        a(i, j) = mod_reduce(a(i, j) - f * a(r, j), a.q);
      b[i] = mod_reduce(b[i] - f * b[r], a.q);
    }
    pivot_col[r] = c;
    ++r;
  }
  for (int i = r; i < a.rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<std::int64_t> x(a.cols, 0);
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

}  // namespace hololab::zq
