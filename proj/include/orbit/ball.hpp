#pragma once

#include <string>

#include "orbit/rational.hpp"

namespace orbit {

// Dyadic rational mant * 2^exp. Arithmetic is exact; rounding is explicit.
struct Dyadic {
  Z mant = 0;
  long exp = 0;

  Dyadic() = default;
  Dyadic(long v) : mant(v) {}
  Dyadic(const Z& m, long e = 0) : mant(m), exp(e) {}

  bool is_zero() const { return mant == 0; }
  int sign() const { return sgn(mant); }
  Q to_q() const;
  // Bit length of |mant| plus exp: |x| < 2^top().
  long top() const;

  static Dyadic from_q_floor(const Q& q, long prec);
  static Dyadic from_q_ceil(const Q& q, long prec);
  static Dyadic from_double(double d);
  double to_double() const;

  Dyadic operator-() const { return Dyadic(-mant, exp); }
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) { return Dyadic(a.mant * b.mant, a.exp + b.exp); }
  friend int cmp(const Dyadic& a, const Dyadic& b) { return (a - b).sign(); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return cmp(a, b) == 0; }

  Dyadic abs() const { return Dyadic(orbit_abs(mant), exp); }
  static Z orbit_abs(const Z& z) { return z < 0 ? Z(-z) : z; }

  // Drop mantissa bits beyond prec, rounding toward -inf / +inf; the
  // magnitude of the change is returned in err (upper bound) when requested.
  Dyadic round_floor(long prec) const;
  Dyadic round_ceil(long prec) const;
  Dyadic round_near(long prec, Dyadic* err) const;
  Dyadic mul_2exp(long k) const { return Dyadic(mant, exp + k); }
};

// Upper / lower bounds on sqrt(x), x >= 0, about prec bits.
Dyadic sqrt_up(const Dyadic& x, long prec = 64);
Dyadic sqrt_down(const Dyadic& x, long prec = 64);
// Quotient a/b rounded to about prec significant bits, with |error| <= err.
Dyadic div_near(const Dyadic& a, const Dyadic& b, long prec, Dyadic* err);

// Complex ball: all z with |z - (re + i im)| <= rad.
struct Ball {
  Dyadic re, im, rad;

  Ball() = default;
  Ball(const Dyadic& r, const Dyadic& i = Dyadic(), const Dyadic& radius = Dyadic())
      : re(r), im(i), rad(radius) {}
  static Ball from_q(const Q& re, const Q& im, const Q& rad, long prec);
  static Ball from_q(const Q& re, long prec) { return from_q(re, Q(0), Q(0), prec); }
  static Ball from_z(const Z& v) { return Ball(Dyadic(v)); }

  bool contains_zero() const;
  // Upper / lower bounds on |z| over the ball (lower clamped at 0).
  Dyadic abs_upper() const;
  Dyadic abs_lower() const;
  Dyadic center_abs_upper() const;
  Dyadic center_abs_lower() const;
  Q re_lower() const;
  Q re_upper() const;
  Q im_lower() const;
  Q im_upper() const;
  bool overlaps(const Ball& o) const;
  std::string str() const;
};

Ball add(const Ball& a, const Ball& b, long prec);
Ball sub(const Ball& a, const Ball& b, long prec);
Ball mul(const Ball& a, const Ball& b, long prec);
// Throws DomainError if b contains zero.
Ball div(const Ball& a, const Ball& b, long prec);
Ball neg(const Ball& a);
Ball conj(const Ball& a);
Ball pow(const Ball& a, const Z& n, long prec);
Ball scale(const Ball& a, const Q& s, long prec);
Ball add_error(const Ball& a, const Dyadic& e);
// Round the center to prec bits, folding the error into the radius.
Ball round(const Ball& a, long prec);

}  // namespace orbit
