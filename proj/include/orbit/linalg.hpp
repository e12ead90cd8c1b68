#pragma once

#include <utility>
#include <vector>

#include "orbit/algebraic.hpp"
#include "orbit/matrix.hpp"

namespace orbit {

// Subspace of Q^ambient_dim; basis kept in reduced row echelon form.
struct Subspace {
  size_t ambient_dim = 0;
  std::vector<RatVec> basis;

  Subspace() = default;
  Subspace(size_t dim, const std::vector<RatVec>& spanning);
  size_t dim() const { return basis.size(); }
  bool contains(const RatVec& v) const;
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_dim == b.ambient_dim && a.basis == b.basis;
  }
};

// c A with c the lcm of the entry denominators; the scale is returned too.
RatMatrix rescale_to_integer(const RatMatrix& a, Z* scale = nullptr);

struct KrylovResult {
  RatMatrix M;  // (nu+1) x (nu+1), companion shaped
  RatMatrix D;  // d x (nu+1), columns x, Ax, ..., A^nu x
  size_t nu = 0;
};
KrylovResult krylov_reduce(const RatMatrix& a, const RatVec& x);

Subspace subspace_intersect(const Subspace& u, const Subspace& v);
RatMatrix target_matrices(const RatMatrix& m, const RatVec& w);
// {I, M, ..., M^{k-1}} flattened row-major, k the degree of the minimal polynomial.
Subspace polynomial_subspace(const RatMatrix& m);
std::vector<RatPoly> intersect_to_polys(const std::vector<RatMatrix>& t_basis, const RatMatrix& m);

RatPoly matrix_min_poly(const RatMatrix& a);
std::vector<std::pair<AlgebraicNumber, int>> matrix_eigenvalues(const RatMatrix& a);

using AlgVec = std::vector<AlgebraicNumber>;

struct AlgMatrix {
  size_t rows = 0, cols = 0;
  std::vector<AlgebraicNumber> a;

  AlgMatrix() = default;
  AlgMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, AlgebraicNumber(Q(0))) {}
  static AlgMatrix from_rows(const std::vector<AlgVec>& rs);
  AlgebraicNumber& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  const AlgebraicNumber& operator()(size_t i, size_t j) const { return a[i * cols + j]; }
};

std::vector<AlgVec> nullspace(const AlgMatrix& b);
// Nonzero vector orthogonal (plain bilinear dot product) to k independent
// vectors of length k+1, first nonzero coordinate 1.
AlgVec normal_vector(const std::vector<AlgVec>& vectors);
AlgebraicNumber dot(const AlgVec& x, const AlgVec& y);

}  // namespace orbit
