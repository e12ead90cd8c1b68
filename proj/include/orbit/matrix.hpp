#pragma once

#include <vector>

#include "orbit/poly.hpp"

namespace orbit {

using RatVec = std::vector<Q>;

// Dense row-major rational matrix.
struct RatMatrix {
  size_t rows = 0, cols = 0;
  std::vector<Q> a;

  RatMatrix() = default;
  RatMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, Q(0)) {}
  static RatMatrix identity(size_t n);
  static RatMatrix from_rows(const std::vector<RatVec>& rows);
  // Matrix with the given vectors as columns.
  static RatMatrix from_cols(const std::vector<RatVec>& cols, size_t height);

  Q& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const Q& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  bool square() const { return rows == cols; }
  RatVec col(size_t j) const;
  RatVec row(size_t i) const;
  bool is_zero() const;
  friend bool operator==(const RatMatrix& x, const RatMatrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y);
RatMatrix operator+(const RatMatrix& x, const RatMatrix& y);
RatMatrix operator-(const RatMatrix& x, const RatMatrix& y);
RatMatrix operator*(const Q& s, const RatMatrix& x);
RatVec operator*(const RatMatrix& x, const RatVec& v);
RatMatrix transpose(const RatMatrix& x);
RatMatrix kronecker(const RatMatrix& x, const RatMatrix& y);
RatMatrix mat_pow(const RatMatrix& x, unsigned long n);
RatMatrix poly_eval(const RatPoly& p, const RatMatrix& x);
// Companion matrix of a monic polynomial: subdiagonal ones, last column -c_i.
RatMatrix companion(const RatPoly& monic);

// In-place reduced row echelon form; returns pivot columns.
std::vector<size_t> rref(RatMatrix& m);
size_t rank(RatMatrix m);
// Basis of {v : m v = 0}.
std::vector<RatVec> nullspace(const RatMatrix& m);
// Some solution of m y = b, or false.
bool solve(const RatMatrix& m, const RatVec& b, RatVec& y);
RatMatrix inverse(const RatMatrix& m);  // DomainError if singular
Q determinant(const RatMatrix& m);

// det(x I - m), via Hessenberg reduction modulo word primes and CRT.
RatPoly charpoly(const RatMatrix& m);

Q dot(const RatVec& x, const RatVec& y);
bool is_zero_vec(const RatVec& v);

}  // namespace orbit
