#pragma once

#include <complex>
#include <ostream>
#include <random>
#include <vector>

#include "orbit/solver.hpp"

namespace orbit {
inline void PrintTo(const RatPoly& p, std::ostream* os) { *os << to_string(p); }
inline void PrintTo(const Q& q, std::ostream* os) { *os << to_string(q); }
}  // namespace orbit

namespace orbit::test {

inline RatPoly P(std::initializer_list<long> cs) {
  std::vector<Q> v;
  for (long c : cs) v.push_back(Q(c));
  return RatPoly(v);
}

inline RatPoly QP(std::initializer_list<Q> cs) { return RatPoly(std::vector<Q>(cs)); }

inline Q qv(long p, long q = 1) { return make_q(Z(p), Z(q)); }

// Root of p closest to re + i im.
inline AlgebraicNumber root_near(const RatPoly& p, double re, double im = 0) {
  auto rs = isolate_roots(p);
  size_t best = 0;
  double bd = 1e300;
  for (size_t i = 0; i < rs.size(); ++i) {
    double dr = rs[i].box().center_re.get_d() - re, di = rs[i].box().center_im.get_d() - im;
    double d = dr * dr + di * di;
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return rs[best];
}

inline AlgebraicNumber sqrt_of(long k) { return root_near(P({-k, 0, 1}), std::sqrt(double(k))); }
inline AlgebraicNumber imag_unit() { return root_near(P({1, 0, 1}), 0, 1); }
// a + b i for integers a, b.
inline AlgebraicNumber gauss(long a, long b) {
  if (b == 0) return AlgebraicNumber(Q(a));
  return root_near(P({a * a + b * b, -2 * a, 1}), double(a), double(b));
}

// Durand-Kerner roots in long double: an oracle independent of the library.
inline std::vector<std::complex<long double>> numeric_roots(const RatPoly& p) {
  using C = std::complex<long double>;
  int n = p.degree();
  std::vector<C> a(n + 1);
  for (int i = 0; i <= n; ++i) a[i] = C(Q(p.c[i] / p.lc()).get_d());
  std::vector<C> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(C(0.4L, 0.9L), i);
  for (int it = 0; it < 2000; ++it) {
    for (int i = 0; i < n; ++i) {
      C num = 0;
      for (int k = n; k >= 0; --k) num = num * z[i] + a[k];
      C den = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      z[i] -= num / den;
    }
  }
  return z;
}

// Exact orbit walk: smallest n <= N with A^n x in V. Independent of the
// library's brute_force and of any reduction.
inline std::optional<unsigned long> walk_orbit(const OrbitInstance& inst, unsigned long N) {
  RatVec y = inst.x;
  for (unsigned long n = 0; n <= N; ++n) {
    RatMatrix m(inst.V.dim() + 1, inst.A.rows);
    for (size_t i = 0; i < inst.V.dim(); ++i)
      for (size_t j = 0; j < inst.A.rows; ++j) m(i, j) = inst.V.basis[i][j];
    for (size_t j = 0; j < inst.A.rows; ++j) m(inst.V.dim(), j) = y[j];
    if (rank(m) == inst.V.dim()) return n;
    y = inst.A * y;
  }
  return std::nullopt;
}

inline RatMatrix diag(std::initializer_list<long> ds) {
  RatMatrix m(ds.size(), ds.size());
  size_t i = 0;
  for (long d : ds) m(i, i) = d, ++i;
  return m;
}

inline RatVec vec(std::initializer_list<long> vs) {
  RatVec v;
  for (long x : vs) v.push_back(Q(x));
  return v;
}

inline RatMatrix rows(std::initializer_list<std::initializer_list<long>> rs) {
  std::vector<RatVec> v;
  for (auto& r : rs) v.push_back(vec(r));
  return RatMatrix::from_rows(v);
}

inline OrbitInstance instance(const RatMatrix& A, const RatVec& x, const std::vector<RatVec>& basis) {
  return OrbitInstance{A, x, Subspace(A.rows, basis)};
}

// Random instance drawn from the acceptance distribution: size 2..5,
// entries in [-3, 3], target dimension 1..3, a mix of sparse (often
// singular) and dense matrices, and sometimes a planted orbit point.
inline OrbitInstance random_instance(std::mt19937& g) {
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  for (;;) {
    int d = U(2, 5);
    RatMatrix A(d, d);
    int sparsity = U(0, 2);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) A(i, j) = U(0, 2) < sparsity ? 0 : U(-3, 3);
    RatVec x(d);
    bool nz = false;
    for (auto& q : x) {
      q = U(-3, 3);
      nz = nz || q != 0;
    }
    if (!nz) x[0] = 1;
    int k = U(1, std::min(3, d));
    std::vector<RatVec> b;
    for (int t = 0; t < k; ++t) {
      RatVec v(d);
      for (auto& q : v) q = U(0, 1) ? 0 : U(-3, 3);
      b.push_back(v);
    }
    if (U(0, 3) == 0) {
      RatVec y = x;
      for (int i = U(0, 8); i > 0; --i) y = A * y;
      b[0] = y;
    }
    Subspace V(d, b);
    if (V.dim() >= 1 && V.dim() <= 3) return OrbitInstance{A, x, V};
  }
}

// Polynomial-form instance on the companion matrix of charp.
inline MatrixPowerInstance power_instance(const RatPoly& charp, const std::vector<RatPoly>& polys) {
  MatrixPowerInstance mp;
  mp.M = companion(charp);
  mp.polys = polys;
  mp.eigen = matrix_eigenvalues(mp.M);
  return mp;
}

// Mn in span{p(M)}, by flattening and a rank test.
inline bool power_in_span(const RatMatrix& Mn, const std::vector<RatPoly>& polys, const RatMatrix& M) {
  if (polys.empty()) return false;
  std::vector<RatVec> b;
  for (auto& p : polys) b.push_back(poly_eval(p, M).a);
  return Subspace(Mn.a.size(), b).contains(Mn.a);
}

// Exponents n <= N with M^n in span{p(M)}.
inline std::vector<unsigned long> power_witnesses(const MatrixPowerInstance& mp, unsigned long N) {
  std::vector<unsigned long> out;
  RatMatrix Mn = RatMatrix::identity(mp.M.rows);
  for (unsigned long n = 0; n <= N; ++n, Mn = Mn * mp.M)
    if (power_in_span(Mn, mp.polys, mp.M)) out.push_back(n);
  return out;
}

// One-target instances with hand-derived answers. The case number says which
// structure the eigenvalues have: 1 no root-of-unity ratio, 2 all ratios
// roots of unity, 3 a repeated eigenvalue pinning n.
struct OneDimCase {
  std::string name;
  int structure;
  MatrixPowerInstance mp;
  Verdict::Result result;
  std::optional<unsigned long> witness;
  std::optional<std::pair<unsigned long, unsigned long>> congruence;
};

inline std::vector<OneDimCase> one_dim_suite() {
  using R = Verdict::Result;
  auto reduced = [](const RatPoly& c, unsigned long k) { return powmod_x(Z(k), c); };
  RatPoly d23 = P({-2, 1}) * P({-3, 1}), fib = P({-1, -1, 1}), d235 = d23 * P({-5, 1});
  RatPoly x4m16 = P({-16, 0, 0, 0, 1}), six = P({-4, 0, 1}) * P({4, 2, 1});
  RatPoly cubic = P({-1, -1, 0, 1}), one2 = P({1, -2, 1}), two2 = P({4, -4, 1});
  std::vector<OneDimCase> s = {
      {"quotient-unique", 1, power_instance(d23, {reduced(d23, 2)}), R::Yes, 2, {}},
      {"quotient-never", 1, power_instance(d23, {P({1, 1})}), R::No, {}, {}},
      {"golden-quotient", 1, power_instance(fib, {reduced(fib, 5)}), R::Yes, 5, {}},
      {"three-reals", 1, power_instance(d235, {reduced(d235, 4)}), R::Yes, 4, {}},
      {"cubic-field", 1, power_instance(cubic, {reduced(cubic, 7)}), R::Yes, 7, {}},
      {"fourth-roots-scalar", 2, power_instance(x4m16, {P({1})}), R::Yes, 0, std::make_pair(0UL, 4UL)},
      {"fourth-roots-linear", 2, power_instance(x4m16, {P({0, 1})}), R::Yes, 1, std::make_pair(1UL, 4UL)},
      // Takes 1, -1, 1, 1 at 2, -2, 2i, -2i: n odd from (2, -2) but n = 0 mod 4 from (2, 2i).
      {"crt-unsatisfiable", 2, power_instance(x4m16, {QP({qv(1, 2), qv(1, 4), qv(-1, 8), qv(1, 16)})}), R::No, {}, {}},
      // A value ratio that no power of its root-of-unity quotient reaches.
      {"pair-unsolvable", 2, power_instance(x4m16, {QP({qv(1, 2), qv(1, 4), qv(-1, 8), qv(1, 32)})}), R::No, {}, {}},
      {"rotation", 2, power_instance(P({1, 0, 1}), {P({0, 1})}), R::Yes, 1, std::make_pair(1UL, 2UL)},
      // Ratios of orders 2, 3 and 6 combine to n = 5 mod 6.
      {"crt-mod-six", 2, power_instance(six, {reduced(six, 5)}), R::Yes, 5, std::make_pair(5UL, 6UL)},
      {"pinned-at-one", 3, power_instance(one2, {P({-1, 2})}), R::Yes, 2, {}},
      {"pinned-inconsistent", 3, power_instance(one2 * P({-2, 1}), {P({1, -2, 2})}), R::No, {}, {}},
      {"pinned-not-integer", 3, power_instance(two2, {P({2, 1})}), R::No, {}, {}},
      {"pinned-at-two", 3, power_instance(two2, {P({-4, 3})}), R::Yes, 3, {}},
      {"pinned-consistent", 3, power_instance(one2 * P({1, 1}), {P({0, 0, 1})}), R::Yes, 2, {}},
  };
  return s;
}

// Exact rational disc arithmetic: a disc containing every z op w with z, w in
// the operand discs. Independent of the library's Ball code.
struct Disc {
  Q re, im, rad;
};
inline Q abs_hi(const Q& re, const Q& im) { return sqrt_upper(re * re + im * im); }
inline Disc combine(BinOp op, const Disc& a, const Disc& b) {
  switch (op) {
    case BinOp::Add: return {a.re + b.re, a.im + b.im, a.rad + b.rad};
    case BinOp::Sub: return {a.re - b.re, a.im - b.im, a.rad + b.rad};
    case BinOp::Mul: {
      Q re = a.re * b.re - a.im * b.im, im = a.re * b.im + a.im * b.re;
      return {re, im, abs_hi(a.re, a.im) * b.rad + abs_hi(b.re, b.im) * a.rad + a.rad * b.rad};
    }
    case BinOp::Div: {
      Q n2 = b.re * b.re + b.im * b.im;
      Q re = (a.re * b.re + a.im * b.im) / n2, im = (a.im * b.re - a.re * b.im) / n2;
      Q bl = sqrt_lower(n2) - b.rad;
      Q rad = (abs_hi(a.re, a.im) * b.rad / sqrt_lower(n2) + a.rad) / bl;
      return {re, im, rad};
    }
  }
  return {};
}

inline AlgebraicNumber random_alg(std::mt19937& g) {
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  for (;;) {
    int d = U(1, 3);
    std::vector<Q> c;
    for (int i = 0; i < d; ++i) c.push_back(Q(U(-5, 5)));
    c.push_back(Q(1));
    if (d == 1) c[0] = make_q(Z(U(-7, 7)), Z(U(1, 3)));
    RatPoly p(c);
    auto fs = factor_rational_poly(p);
    for (auto& [f, m] : fs)
      if (f.degree() == d) {
        auto rs = isolate_roots(f);
        return rs[U(0, static_cast<int>(rs.size()) - 1)];
      }
  }
}

}  // namespace orbit::test
