#pragma once

#include <random>
#include <string>
#include <vector>

#include "support.hpp"

namespace orbit::test {

// Exact Gaussian rationals: the brute-force oracle for exponential
// polynomials with roots in Z[i].
struct CQ {
  Q re = 0, im = 0;
  friend CQ operator+(const CQ& a, const CQ& b) { return {a.re + b.re, a.im + b.im}; }
  friend CQ operator*(const CQ& a, const CQ& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  CQ operator-() const { return {-re, -im}; }
  bool is_zero() const { return re == 0 && im == 0; }
  Q norm() const { return re * re + im * im; }
};
inline CQ inv(const CQ& a) {
  Q n = a.norm();
  return {a.re / n, -a.im / n};
}
inline CQ cpow(CQ a, unsigned long n) {
  CQ r{1, 0};
  for (; n; n >>= 1, a = a * a)
    if (n & 1) r = r * a;
  return r;
}
inline CQ cn(unsigned long n) { return {Q(long(n)), 0}; }

inline AlgebraicNumber alg_of(const CQ& z) {
  if (z.im == 0) return AlgebraicNumber(z.re);
  RatPoly p(std::vector<Q>{z.norm(), -2 * z.re, Q(1)});
  for (auto& r : isolate_roots(p))
    if ((z.im > 0) == (r.box().center_im > 0)) return r;
  throw std::logic_error("no root");
}

// Roots of unity in Q(i) are the fourth roots, so a ratio of Gaussian
// integers is one exactly when the moduli agree and the ratio is 1, -1, i, -i.
inline bool ratio_is_unit_root(const CQ& a, const CQ& b) {
  if (a.norm() != b.norm()) return false;
  CQ r = a * inv(b);
  return (r.re == 0 || r.im == 0) && r.norm() == 1;
}

struct Term {
  std::vector<CQ> poly;  // coefficient of n^0, n^1, ...
  CQ root;
};
inline CQ eval_terms(const std::vector<Term>& ts, unsigned long n) {
  CQ s;
  for (auto& t : ts) {
    CQ p, np{1, 0};
    for (auto& c : t.poly) {
      p = p + c * np;
      np = np * cn(n);
    }
    s = s + p * cpow(t.root, n);
  }
  return s;
}

struct Gen {
  std::mt19937 g;
  explicit Gen(unsigned s) : g(s) {}
  int U(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }
  CQ gint(int r, bool complex) {
    for (;;) {
      CQ z{Q(U(-r, r)), complex ? Q(U(-r, r)) : Q(0)};
      if (!z.is_zero()) return z;
    }
  }
};

// Exponents n <= N where the exponential polynomial vanishes, stepping the
// powers instead of recomputing them.
inline std::vector<unsigned long> zero_indices(const std::vector<Term>& ts, unsigned long N) {
  std::vector<CQ> pw(ts.size(), CQ{1, 0});
  std::vector<unsigned long> out;
  for (unsigned long n = 0; n <= N; ++n) {
    CQ s;
    for (size_t k = 0; k < ts.size(); ++k) {
      CQ p, np{1, 0};
      for (auto& c : ts[k].poly) {
        p = p + c * np;
        np = np * cn(n);
      }
      s = s + p * pw[k];
      pw[k] = pw[k] * ts[k].root;
    }
    if (s.is_zero()) out.push_back(n);
  }
  return out;
}

inline bool pairwise_ok(const std::vector<CQ>& roots) {
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = 0; j < i; ++j)
      if (ratio_is_unit_root(roots[i], roots[j])) return false;
  return true;
}


}  // namespace orbit::test
