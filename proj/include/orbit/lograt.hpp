#pragma once

#include <string>

#include "orbit/algebraic.hpp"
#include "orbit/rational.hpp"

namespace orbit {

// Closed rational bracket [lo, hi]. The ln_* constructors bracket natural
// logarithms; the same outward-rounded interval arithmetic carries the
// quantities derived from them.
struct LogRat {
  Q lo = 0, hi = 0;

  LogRat() = default;
  LogRat(const Q& v) : lo(v), hi(v) {}  // NOLINT(implicit)
  LogRat(const Q& l, const Q& h);

  Q width() const { return hi - lo; }
  bool contains(const Q& v) const { return lo <= v && v <= hi; }
  bool positive() const { return lo > 0; }
  bool negative() const { return hi < 0; }
  std::string str() const;
};

// Working precision, in significant bits, of outward rounding.
constexpr long kLogPrec = 128;

LogRat operator+(const LogRat& a, const LogRat& b);
LogRat operator-(const LogRat& a, const LogRat& b);
LogRat operator-(const LogRat& a);
LogRat operator*(const LogRat& a, const LogRat& b);
// Throws DomainError when b contains zero.
LogRat operator/(const LogRat& a, const LogRat& b);
LogRat lr_max(const LogRat& a, const LogRat& b);
LogRat lr_min(const LogRat& a, const LogRat& b);
LogRat lr_sqr(const LogRat& a);
// Bracket of sqrt, a >= 0.
LogRat lr_sqrt(const LogRat& a);
// Widen both ends to dyadics with about prec significant bits.
LogRat round_out(const LogRat& a, long prec = kLogPrec);

LogRat ln2_bracket(long prec = kLogPrec);
LogRat pi_bracket(long prec = kLogPrec);
// ln q, q > 0.
LogRat ln_bracket(const Q& q, long prec = kLogPrec);
// ln of every value in a > 0.
LogRat ln_bracket(const LogRat& a, long prec = kLogPrec);
// |a| and ln|a| for nonzero algebraic a. Exact for rationals.
LogRat abs_bracket(const AlgebraicNumber& a, long prec = kLogPrec);
LogRat ln_abs(const AlgebraicNumber& a, long prec = kLogPrec);
// ln of the Mahler measure and the absolute logarithmic (Weil) height.
LogRat ln_mahler(const AlgebraicNumber& a, long prec = kLogPrec);
LogRat weil_height(const AlgebraicNumber& a, long prec = kLogPrec);

// Rational upper bound on log2 m (0 for m <= 1), at most 62 whenever m <= 2^62.
Q log2_upper(const Z& m);

// Smallest N >= 1, up to the bisection, such that for every integer n >= N:
//   n * rho > k + c1 ln n + c2 (ln n)^2.
// rho > 0 and c1, c2 >= 0 are bracketed; the conservative ends are used.
Z exceed_threshold(const LogRat& rho, const LogRat& k, const LogRat& c1, const LogRat& c2 = LogRat(Q(0)));

}  // namespace orbit
