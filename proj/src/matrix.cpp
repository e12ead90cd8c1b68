#include "orbit/matrix.hpp"

#include <algorithm>
#include <cstdint>

namespace orbit {

RatMatrix RatMatrix::identity(size_t n) {
  RatMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVec>& rs) {
  if (rs.empty()) return RatMatrix();
  RatMatrix m(rs.size(), rs[0].size());
  for (size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].size() != m.cols) throw InvalidInput("ragged matrix rows");
    for (size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
  }
  return m;
}

RatMatrix RatMatrix::from_cols(const std::vector<RatVec>& cs, size_t height) {
  RatMatrix m(height, cs.size());
  for (size_t j = 0; j < cs.size(); ++j) {
    if (cs[j].size() != height) throw InvalidInput("column length mismatch");
    for (size_t i = 0; i < height; ++i) m(i, j) = cs[j][i];
  }
  return m;
}

RatVec RatMatrix::col(size_t j) const {
  RatVec v(rows);
  for (size_t i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

RatVec RatMatrix::row(size_t i) const { return RatVec(a.begin() + i * cols, a.begin() + (i + 1) * cols); }

bool RatMatrix::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](const Q& q) { return q == 0; });
}

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols != y.rows) throw InvalidInput("matrix product dimension mismatch");
  RatMatrix r(x.rows, y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t k = 0; k < x.cols; ++k) {
      const Q& v = x(i, k);
      if (v == 0) continue;
      for (size_t j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw InvalidInput("matrix sum dimension mismatch");
  RatMatrix r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) { return x + Q(-1) * y; }

RatMatrix operator*(const Q& s, const RatMatrix& x) {
  RatMatrix r = x;
  for (auto& v : r.a) v *= s;
  return r;
}

RatVec operator*(const RatMatrix& x, const RatVec& v) {
  if (x.cols != v.size()) throw InvalidInput("matrix-vector dimension mismatch");
  RatVec r(x.rows, Q(0));
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j)
      if (v[j] != 0) r[i] += x(i, j) * v[j];
  return r;
}

RatMatrix transpose(const RatMatrix& x) {
  RatMatrix r(x.cols, x.rows);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

RatMatrix kronecker(const RatMatrix& x, const RatMatrix& y) {
  RatMatrix r(x.rows * y.rows, x.cols * y.cols);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = 0; j < x.cols; ++j) {
      if (x(i, j) == 0) continue;
      for (size_t k = 0; k < y.rows; ++k)
        for (size_t l = 0; l < y.cols; ++l) r(i * y.rows + k, j * y.cols + l) = x(i, j) * y(k, l);
    }
  return r;
}

RatMatrix mat_pow(const RatMatrix& x, unsigned long n) {
  RatMatrix result = RatMatrix::identity(x.rows), base = x;
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

RatMatrix poly_eval(const RatPoly& p, const RatMatrix& x) {
  RatMatrix acc(x.rows, x.cols);
  for (size_t i = p.c.size(); i-- > 0;) {
    acc = acc * x;
    for (size_t d = 0; d < x.rows; ++d) acc(d, d) += p.c[i];
  }
  return acc;
}

RatMatrix companion(const RatPoly& f) {
  int n = f.degree();
  if (n < 1) throw InvalidInput("companion of a constant");
  RatPoly m = monic(f);
  RatMatrix c(n, n);
  for (int i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) c(i, n - 1) = -m.c[i];
  return c;
}

std::vector<size_t> rref(RatMatrix& m) {
  std::vector<size_t> piv;
  size_t r = 0;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    size_t p = r;
    while (p < m.rows && m(p, c) == 0) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (size_t j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Q inv = 1 / m(r, c);
    for (size_t j = c; j < m.cols; ++j) m(r, j) *= inv;
    for (size_t i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      Q f = m(i, c);
      for (size_t j = c; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

size_t rank(RatMatrix m) { return rref(m).size(); }

std::vector<RatVec> nullspace(const RatMatrix& m0) {
  RatMatrix m = m0;
  auto piv = rref(m);
  std::vector<bool> is_piv(m.cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<RatVec> out;
  for (size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    RatVec v(m.cols, Q(0));
    v[f] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

bool solve(const RatMatrix& m, const RatVec& b, RatVec& y) {
  RatMatrix aug(m.rows, m.cols + 1);
  for (size_t i = 0; i < m.rows; ++i) {
    for (size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
    aug(i, m.cols) = b[i];
  }
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols) return false;
  y.assign(m.cols, Q(0));
  for (size_t i = 0; i < piv.size(); ++i) y[piv[i]] = aug(i, m.cols);
  return true;
}

RatMatrix inverse(const RatMatrix& m) {
  if (!m.square()) throw InvalidInput("inverse of non-square matrix");
  size_t n = m.rows;
  RatMatrix aug(n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw DomainError("singular matrix");
  RatMatrix r(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

Q determinant(const RatMatrix& m0) {
  if (!m0.square()) throw InvalidInput("determinant of non-square matrix");
  RatMatrix m = m0;
  size_t n = m.rows;
  Q det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Q f = m(i, c) / m(c, c);
      for (size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

// Characteristic polynomial over GF(p) via Hessenberg reduction.
std::vector<u64> charpoly_mod(std::vector<u64> h, size_t n, u64 p) {
  auto at = [&](size_t i, size_t j) -> u64& { return h[i * n + j]; };
  for (size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    size_t i = m;
    while (i < n && at(i, m - 1) == 0) ++i;
    if (i == n) continue;
    if (i != m) {
      for (size_t j = 0; j < n; ++j) std::swap(at(i, j), at(m, j));
      for (size_t j = 0; j < n; ++j) std::swap(at(j, i), at(j, m));
    }
    u64 t = invmod(at(m, m - 1), p);
    for (size_t r = m + 1; r < n; ++r) {
      u64 u = mulmod(at(r, m - 1), t, p);
      if (u == 0) continue;
      for (size_t j = 0; j < n; ++j) at(r, j) = (at(r, j) + p - mulmod(u, at(m, j), p)) % p;
      for (size_t j = 0; j < n; ++j) at(j, m) = (at(j, m) + mulmod(u, at(j, r), p)) % p;
    }
  }
  // Recurrence on leading principal submatrices.
  std::vector<std::vector<u64>> c(n + 1);
  c[0] = {1};
  for (size_t m = 1; m <= n; ++m) {
    std::vector<u64> next(m + 1, 0);
    // (x - h_{m-1,m-1}) c[m-1]
    for (size_t k = 0; k < c[m - 1].size(); ++k) {
      next[k + 1] = (next[k + 1] + c[m - 1][k]) % p;
      next[k] = (next[k] + p - mulmod(at(m - 1, m - 1), c[m - 1][k], p)) % p;
    }
    u64 t = 1;
    for (size_t i = 1; i < m; ++i) {
      t = mulmod(t, at(m - i, m - i - 1), p);
      if (t == 0) break;
      u64 coef = mulmod(t, at(m - i - 1, m - 1), p);
      const auto& cc = c[m - i - 1];
      for (size_t k = 0; k < cc.size(); ++k) next[k] = (next[k] + p - mulmod(coef, cc[k], p)) % p;
    }
    c[m] = std::move(next);
  }
  return c[n];
}

}  // namespace

RatPoly charpoly(const RatMatrix& m) {
  if (!m.square()) throw InvalidInput("charpoly of non-square matrix");
  size_t n = m.rows;
  if (n == 0) return RatPoly::constant(Q(1));
  Z den = 1;
  for (const auto& v : m.a) den = lcm(den, v.get_den());
  std::vector<Z> b(n * n);
  Z row_max = 0;
  for (size_t i = 0; i < n; ++i) {
    Z s = 0;
    for (size_t j = 0; j < n; ++j) {
      Q v = m(i, j) * den;
      b[i * n + j] = v.get_num();
      s += abs(b[i * n + j]);
    }
    row_max = std::max(row_max, s);
  }
  // Coefficients are bounded by (1 + row_max)^n in absolute value.
  Z bound;
  Z base = row_max + 1;
  mpz_pow_ui(bound.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(n));
  bound = 2 * bound + 1;
  std::vector<Z> coef(n + 1, Z(0));
  Z modulus = 1;
  Z pz = Z(1) << 61;
  while (modulus <= bound) {
    mpz_nextprime(pz.get_mpz_t(), pz.get_mpz_t());
    u64 p = pz.get_ui();
    std::vector<u64> h(n * n);
    for (size_t i = 0; i < n * n; ++i) {
      Z r;
      mpz_fdiv_r_ui(r.get_mpz_t(), b[i].get_mpz_t(), p);
      h[i] = r.get_ui();
    }
    auto cp = charpoly_mod(std::move(h), n, p);
    // Garner step: coef = coef + modulus * ((r - coef) / modulus mod p).
    Z modp_inv;
    Z pm(pz);
    mpz_invert(modp_inv.get_mpz_t(), modulus.get_mpz_t(), pm.get_mpz_t());
    for (size_t k = 0; k <= n; ++k) {
      Z cur;
      mpz_fdiv_r_ui(cur.get_mpz_t(), coef[k].get_mpz_t(), p);
      Z diff = Z(static_cast<unsigned long>(cp[k])) - cur;
      Z t = diff * modp_inv;
      mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), pm.get_mpz_t());
      coef[k] += modulus * t;
    }
    modulus *= pm;
  }
  Z half = modulus / 2;
  RatPoly out;
  out.c.resize(n + 1);
  // charpoly(A)(x) = den^{-n} charpoly(den A)(den x).
  Z dpow = 1;
  for (size_t k = 0; k <= n; ++k) {
    Z v = coef[k];
    if (v > half) v -= modulus;
    out.c[k] = Q(v) * Q(dpow);
    dpow *= den;
  }
  Z dn;
  mpz_pow_ui(dn.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
  for (auto& c : out.c) {
    c /= Q(dn);
    c.canonicalize();
  }
  out.trim();
  return out;
}

Q dot(const RatVec& x, const RatVec& y) {
  if (x.size() != y.size()) throw InvalidInput("dot product length mismatch");
  Q s = 0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

bool is_zero_vec(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Q& q) { return q == 0; });
}

}  // namespace orbit
