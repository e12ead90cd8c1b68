#pragma once

#include <string>
#include <utility>
#include <vector>

#include "orbit/rational.hpp"

namespace orbit {

// Dense univariate polynomial, coefficients lowest degree first. The zero
// polynomial has an empty coefficient list.
template <class T>
struct Poly {
  std::vector<T> c;

  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<T> coeffs) : c(coeffs) { trim(); }

  static Poly constant(const T& v) { return Poly(std::vector<T>{v}); }
  static Poly monomial(const T& v, size_t k) {
    std::vector<T> cs(k + 1, T(0));
    cs[k] = v;
    return Poly(std::move(cs));
  }
  static Poly x() { return monomial(T(1), 1); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const T& lc() const { return c.back(); }
  T coeff(size_t i) const { return i < c.size() ? c[i] : T(0); }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
    for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return Poly(std::move(r));
  }
  friend Poly operator*(const T& s, const Poly& a) {
    if (s == 0) return Poly();
    Poly r = a;
    for (auto& v : r.c) v *= s;
    return r;
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly derivative() const {
    if (c.size() <= 1) return Poly();
    std::vector<T> r(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * T(static_cast<long>(i));
    return Poly(std::move(r));
  }

  template <class U>
  U eval(const U& x) const {
    U acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + U(c[i]);
    return acc;
  }
};

using RatPoly = Poly<Q>;
using ZPoly = Poly<Z>;

std::string to_string(const RatPoly& p, const std::string& var = "x");
std::string to_string(const ZPoly& p, const std::string& var = "x");

// Division with remainder over Q. Throws DomainError on zero divisor.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly operator%(const RatPoly& a, const RatPoly& b);
RatPoly operator/(const RatPoly& a, const RatPoly& b);

RatPoly monic(const RatPoly& p);
RatPoly gcd(const RatPoly& a, const RatPoly& b);  // monic, gcd(0,0)=0

// Composition p(q(x)).
RatPoly compose(const RatPoly& p, const RatPoly& q);

// p(x + s)
RatPoly shift(const RatPoly& p, const Q& s);

// x^n mod f.
RatPoly powmod_x(const Z& n, const RatPoly& f);
RatPoly powmod(const RatPoly& b, const Z& n, const RatPoly& f);

// Squarefree decomposition: p = c * prod f_i^i with f_i monic, squarefree,
// pairwise coprime. Returns pairs (f_i, i) with f_i nonconstant.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p);
RatPoly squarefree_part(const RatPoly& p);

// Primitive integer multiple with positive leading coefficient.
ZPoly primitive_integer(const RatPoly& p);
RatPoly to_rat(const ZPoly& p);

Z content(const ZPoly& p);
ZPoly primitive_part(const ZPoly& p);

// Max absolute coefficient of the primitive integer form.
Z height(const RatPoly& p);

// Exact division over Z; throws DomainError when b does not divide a.
ZPoly exact_div(const ZPoly& a, const ZPoly& b);
// True iff b divides a in Z[x]; on success stores quotient.
bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr);

// Euclidean norm squared.
Z norm2_sq(const ZPoly& p);

// Polynomials evaluated at a matrix argument are handled in linalg.

// Reverse coefficients: x^deg p(1/x).
RatPoly reverse(const RatPoly& p);

// p(s*x)
RatPoly scale_arg(const RatPoly& p, const Q& s);

}  // namespace orbit
