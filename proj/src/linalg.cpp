#include "orbit/linalg.hpp"

#include <algorithm>

namespace orbit {

namespace {

std::vector<RatVec> rref_rows(const std::vector<RatVec>& vs, size_t dim) {
  if (vs.empty()) return {};
  RatMatrix m = RatMatrix::from_rows(vs);
  if (m.cols != dim) throw InvalidInput("vector length does not match ambient dimension");
  size_t r = rref(m).size();
  std::vector<RatVec> out;
  for (size_t i = 0; i < r; ++i) out.push_back(m.row(i));
  return out;
}

}  // namespace

Subspace::Subspace(size_t dim, const std::vector<RatVec>& spanning) : ambient_dim(dim), basis(rref_rows(spanning, dim)) {}

bool Subspace::contains(const RatVec& v) const {
  if (v.size() != ambient_dim) throw InvalidInput("vector length does not match ambient dimension");
  if (is_zero_vec(v)) return true;
  if (basis.empty()) return false;
  std::vector<RatVec> rows = basis;
  rows.push_back(v);
  return rank(RatMatrix::from_rows(rows)) == basis.size();
}

RatMatrix rescale_to_integer(const RatMatrix& a, Z* scale) {
  Z c = 1;
  for (const auto& v : a.a) c = lcm(c, v.get_den());
  if (scale) *scale = c;
  return Q(c) * a;
}

KrylovResult krylov_reduce(const RatMatrix& a, const RatVec& x) {
  if (!a.square() || a.rows != x.size()) throw InvalidInput("krylov_reduce dimension mismatch");
  if (is_zero_vec(x)) throw InvalidInput("krylov_reduce needs a nonzero vector");
  size_t d = x.size();
  std::vector<RatVec> cols{x};
  RatVec next = a * x;
  while (cols.size() < d + 1) {
    std::vector<RatVec> rows = cols;
    rows.push_back(next);
    if (rank(RatMatrix::from_rows(rows)) <= cols.size()) break;
    cols.push_back(next);
    next = a * next;
  }
  KrylovResult k;
  k.nu = cols.size() - 1;
  k.D = RatMatrix::from_cols(cols, d);
  RatVec b;
  if (!solve(k.D, next, b)) throw std::logic_error("krylov: dependent vector not in span");
  size_t m = cols.size();
  k.M = RatMatrix(m, m);
  for (size_t i = 1; i < m; ++i) k.M(i, i - 1) = 1;
  for (size_t i = 0; i < m; ++i) k.M(i, m - 1) = b[i];
  return k;
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim != v.ambient_dim) throw InvalidInput("subspace_intersect ambient dimension mismatch");
  size_t d = u.ambient_dim;
  if (u.dim() == 0 || v.dim() == 0) return Subspace(d, {});
  // Solve sum a_i u_i - sum b_j v_j = 0.
  std::vector<RatVec> cols;
  for (auto& b : u.basis) cols.push_back(b);
  for (auto& b : v.basis) {
    RatVec nb = b;
    for (auto& q : nb) q = -q;
    cols.push_back(nb);
  }
  RatMatrix m = RatMatrix::from_cols(cols, d);
  std::vector<RatVec> out;
  for (auto& coeffs : nullspace(m)) {
    RatVec w(d, Q(0));
    for (size_t i = 0; i < u.dim(); ++i)
      for (size_t k = 0; k < d; ++k) w[k] += coeffs[i] * u.basis[i][k];
    out.push_back(w);
  }
  return Subspace(d, out);
}

RatMatrix target_matrices(const RatMatrix& m, const RatVec& w) {
  if (!m.square() || m.rows != w.size()) throw InvalidInput("target_matrices dimension mismatch");
  std::vector<RatVec> cols{w};
  for (size_t k = 1; k < m.rows; ++k) cols.push_back(m * cols.back());
  return RatMatrix::from_cols(cols, m.rows);
}

Subspace polynomial_subspace(const RatMatrix& m) {
  if (!m.square()) throw InvalidInput("polynomial_subspace needs a square matrix");
  int k = matrix_min_poly(m).degree();
  std::vector<RatVec> vs;
  RatMatrix p = RatMatrix::identity(m.rows);
  for (int i = 0; i < k; ++i) {
    vs.push_back(p.a);
    p = p * m;
  }
  return Subspace(m.rows * m.cols, vs);
}

std::vector<RatPoly> intersect_to_polys(const std::vector<RatMatrix>& t_basis, const RatMatrix& m) {
  if (!m.square()) throw InvalidInput("intersect_to_polys needs a square matrix");
  size_t n2 = m.rows * m.cols;
  int k = matrix_min_poly(m).degree();
  std::vector<RatVec> powers;
  RatMatrix p = RatMatrix::identity(m.rows);
  for (int i = 0; i < k; ++i) {
    powers.push_back(p.a);
    p = p * m;
  }
  std::vector<RatVec> tv;
  for (auto& t : t_basis) {
    if (t.rows != m.rows || t.cols != m.cols) throw InvalidInput("target matrix shape mismatch");
    tv.push_back(t.a);
  }
  Subspace t_space(n2, tv);
  if (t_space.dim() == 0) return {};
  // Coefficient vectors c with sum c_i M^i in span(T).
  std::vector<RatVec> cols = powers;
  for (auto& b : t_space.basis) {
    RatVec nb = b;
    for (auto& q : nb) q = -q;
    cols.push_back(nb);
  }
  RatMatrix sys = RatMatrix::from_cols(cols, n2);
  std::vector<RatVec> coeffs;
  for (auto& v : nullspace(sys)) coeffs.emplace_back(v.begin(), v.begin() + k);
  // Powers are independent, so coefficient vectors are nonzero; canonicalize.
  Subspace cs(static_cast<size_t>(k), coeffs);
  std::vector<RatPoly> out;
  for (auto& b : cs.basis) out.emplace_back(RatPoly(b));
  return out;
}

RatPoly matrix_min_poly(const RatMatrix& a) {
  if (!a.square()) throw InvalidInput("matrix_min_poly needs a square matrix");
  if (a.rows == 0) return RatPoly::constant(Q(1));
  auto factors = factor_rational_poly(charpoly(a));
  auto annihilates = [&](const std::vector<std::pair<RatPoly, int>>& fs) {
    RatMatrix acc = RatMatrix::identity(a.rows);
    for (auto& [f, e] : fs) {
      RatMatrix fa = poly_eval(f, a);
      for (int i = 0; i < e; ++i) acc = acc * fa;
    }
    return acc.is_zero();
  };
  for (auto& fe : factors) {
    while (fe.second > 1) {
      --fe.second;
      if (!annihilates(factors)) {
        ++fe.second;
        break;
      }
    }
  }
  RatPoly m = RatPoly::constant(Q(1));
  for (auto& [f, e] : factors)
    for (int i = 0; i < e; ++i) m = m * f;
  return m;
}

std::vector<std::pair<AlgebraicNumber, int>> matrix_eigenvalues(const RatMatrix& a) {
  RatPoly mp = matrix_min_poly(a);
  auto factors = factor_rational_poly(mp);
  std::vector<std::pair<AlgebraicNumber, int>> out;
  for (auto& r : isolate_roots(mp)) {
    int mult = 0;
    for (auto& [f, e] : factors)
      if (f == r.min_poly()) mult = e;
    out.emplace_back(r, mult);
  }
  return out;
}

AlgMatrix AlgMatrix::from_rows(const std::vector<AlgVec>& rs) {
  if (rs.empty()) return AlgMatrix();
  AlgMatrix m(rs.size(), rs[0].size());
  for (size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].size() != m.cols) throw InvalidInput("ragged matrix rows");
    for (size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
  }
  return m;
}

std::vector<AlgVec> nullspace(const AlgMatrix& b) {
  AlgMatrix m = b;
  std::vector<size_t> piv;
  size_t r = 0;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    size_t p = r;
    while (p < m.rows && m(p, c).is_zero()) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    AlgebraicNumber inv = alg_inverse(m(r, c));
    for (size_t j = c; j < m.cols; ++j) m(r, j) = m(r, j) * inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      AlgebraicNumber f = m(i, c);
      for (size_t j = c; j < m.cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) = m(i, j) - f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(m.cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<AlgVec> out;
  for (size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    AlgVec v(m.cols, AlgebraicNumber(Q(0)));
    v[f] = AlgebraicNumber(Q(1));
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

AlgVec normal_vector(const std::vector<AlgVec>& vectors) {
  if (vectors.empty()) throw InvalidInput("normal_vector needs at least one vector");
  size_t n = vectors[0].size();
  if (n != vectors.size() + 1) throw InvalidInput("normal_vector needs k vectors of length k+1");
  auto ns = nullspace(AlgMatrix::from_rows(vectors));
  if (ns.size() != 1) throw InvalidInput("normal_vector input vectors are dependent");
  AlgVec v = ns[0];
  size_t lead = 0;
  while (v[lead].is_zero()) ++lead;
  AlgebraicNumber inv = alg_inverse(v[lead]);
  for (auto& e : v) e = e * inv;
  return v;
}

AlgebraicNumber dot(const AlgVec& x, const AlgVec& y) {
  if (x.size() != y.size()) throw InvalidInput("dot product length mismatch");
  AlgebraicNumber s(Q(0));
  for (size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero() && !y[i].is_zero()) s = s + x[i] * y[i];
  return s;
}

}  // namespace orbit
