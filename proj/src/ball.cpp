#include "orbit/ball.hpp"

#include <climits>
#include <cmath>
#include <sstream>

namespace orbit {

namespace {

constexpr long kRadPrec = 32;

long bitlen(const Z& z) { return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

Dyadic rad_up(const Q& q) { return Dyadic::from_q_ceil(q, kRadPrec); }

}  // namespace

Q Dyadic::to_q() const {
  if (exp >= 0) return Q(mant << exp);
  Z den = Z(1) << (-exp);
  return make_q(mant, den);
}

long Dyadic::top() const { return mant == 0 ? LONG_MIN / 4 : bitlen(mant) + exp; }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.mant == 0) return b;
  if (b.mant == 0) return a;
  if (a.exp == b.exp) return Dyadic(a.mant + b.mant, a.exp);
  if (a.exp < b.exp) return Dyadic(a.mant + (b.mant << (b.exp - a.exp)), a.exp);
  return Dyadic((a.mant << (a.exp - b.exp)) + b.mant, b.exp);
}

Dyadic Dyadic::round_floor(long prec) const {
  long bl = bitlen(mant);
  if (bl <= prec) return *this;
  long s = bl - prec;
  Z m;
  mpz_fdiv_q_2exp(m.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  return Dyadic(m, exp + s);
}

Dyadic Dyadic::round_ceil(long prec) const {
  long bl = bitlen(mant);
  if (bl <= prec) return *this;
  long s = bl - prec;
  Z m;
  mpz_cdiv_q_2exp(m.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  return Dyadic(m, exp + s);
}

Dyadic Dyadic::round_near(long prec, Dyadic* err) const {
  long bl = bitlen(mant);
  if (bl <= prec) {
    if (err) *err = Dyadic();
    return *this;
  }
  long s = bl - prec;
  Z m;
  mpz_tdiv_q_2exp(m.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  if (err) *err = Dyadic(Z(1), exp + s);
  return Dyadic(m, exp + s);
}

Dyadic Dyadic::from_q_floor(const Q& q, long prec) {
  if (q == 0) return Dyadic();
  long k = prec - (bitlen(q.get_num()) - bitlen(q.get_den()));
  Z scaled;
  if (k >= 0) {
    Z n = q.get_num() << k;
    mpz_fdiv_q(scaled.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  } else {
    Z d = q.get_den() << (-k);
    mpz_fdiv_q(scaled.get_mpz_t(), q.get_num_mpz_t(), d.get_mpz_t());
  }
  return Dyadic(scaled, -k);
}

Dyadic Dyadic::from_q_ceil(const Q& q, long prec) {
  if (q == 0) return Dyadic();
  long k = prec - (bitlen(q.get_num()) - bitlen(q.get_den()));
  Z scaled;
  if (k >= 0) {
    Z n = q.get_num() << k;
    mpz_cdiv_q(scaled.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  } else {
    Z d = q.get_den() << (-k);
    mpz_cdiv_q(scaled.get_mpz_t(), q.get_num_mpz_t(), d.get_mpz_t());
  }
  return Dyadic(scaled, -k);
}

Dyadic Dyadic::from_double(double d) {
  if (d == 0) return Dyadic();
  int e;
  double f = std::frexp(d, &e);
  long m = static_cast<long>(std::ldexp(f, 53));
  return Dyadic(Z(m), e - 53);
}

double Dyadic::to_double() const {
  if (mant == 0) return 0.0;
  long bl = bitlen(mant);
  long s = bl > 60 ? bl - 60 : 0;
  Z m;
  mpz_tdiv_q_2exp(m.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  return std::ldexp(m.get_d(), static_cast<int>(std::max(-100000L, std::min(100000L, exp + s))));
}

Dyadic sqrt_up(const Dyadic& x, long prec) {
  if (x.sign() < 0) throw DomainError("sqrt_up of negative");
  if (x.is_zero()) return Dyadic();
  Z m = x.mant;
  long e = x.exp;
  long shift = 2 * prec - bitlen(m);
  if (shift < 0) shift = 0;
  if ((e - shift) % 2 != 0) ++shift;
  m <<= shift;
  e -= shift;
  Z r;
  mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
  if (r * r != m) r += 1;
  return Dyadic(r, e / 2);
}

Dyadic sqrt_down(const Dyadic& x, long prec) {
  if (x.sign() < 0) throw DomainError("sqrt_down of negative");
  if (x.is_zero()) return Dyadic();
  Z m = x.mant;
  long e = x.exp;
  long shift = 2 * prec - bitlen(m);
  if (shift < 0) shift = 0;
  if ((e - shift) % 2 != 0) ++shift;
  m <<= shift;
  e -= shift;
  Z r;
  mpz_sqrt(r.get_mpz_t(), m.get_mpz_t());
  return Dyadic(r, e / 2);
}

Dyadic div_near(const Dyadic& a, const Dyadic& b, long prec, Dyadic* err) {
  if (b.is_zero()) throw DomainError("dyadic division by zero");
  if (a.is_zero()) {
    if (err) *err = Dyadic();
    return Dyadic();
  }
  long k = prec + bitlen(b.mant) - bitlen(a.mant) + 1;
  if (k < 0) k = 0;
  Z n = a.mant << k;
  Z q;
  mpz_tdiv_q(q.get_mpz_t(), n.get_mpz_t(), b.mant.get_mpz_t());
  long e = a.exp - b.exp - k;
  if (err) *err = Dyadic(Z(1), e);
  return Dyadic(q, e);
}

Ball Ball::from_q(const Q& re, const Q& im, const Q& rad, long prec) {
  Ball b;
  Q err = 0;
  b.re = Dyadic::from_q_floor(re, prec);
  err += abs_q(re - b.re.to_q());
  b.im = Dyadic::from_q_floor(im, prec);
  err += abs_q(im - b.im.to_q());
  b.rad = rad_up(rad + err);
  return b;
}

bool Ball::contains_zero() const {
  Dyadic n2 = re * re + im * im;
  return n2 <= rad * rad;
}

Dyadic Ball::center_abs_upper() const { return sqrt_up(re * re + im * im); }
Dyadic Ball::center_abs_lower() const { return sqrt_down(re * re + im * im); }

Dyadic Ball::abs_upper() const { return (center_abs_upper() + rad).round_ceil(kRadPrec + 8); }

Dyadic Ball::abs_lower() const {
  Dyadic l = center_abs_lower() - rad;
  if (l.sign() <= 0) return Dyadic();
  return l.round_floor(kRadPrec + 8);
}

Q Ball::re_lower() const { return re.to_q() - rad.to_q(); }
Q Ball::re_upper() const { return re.to_q() + rad.to_q(); }
Q Ball::im_lower() const { return im.to_q() - rad.to_q(); }
Q Ball::im_upper() const { return im.to_q() + rad.to_q(); }

bool Ball::overlaps(const Ball& o) const {
  Dyadic dr = re - o.re, di = im - o.im;
  Dyadic s = rad + o.rad;
  return dr * dr + di * di <= s * s;
}

std::string Ball::str() const {
  std::ostringstream os;
  os.precision(17);
  os << "(" << re.to_double() << " + " << im.to_double() << "i +/- " << rad.to_double() << ")";
  return os.str();
}

Ball round(const Ball& a, long prec) {
  long t = std::max(a.re.top(), a.im.top());
  if (a.re.is_zero() && a.im.is_zero()) return a;
  long cut = t - prec;  // keep bits at positions >= cut
  auto trunc = [&](const Dyadic& d, Dyadic& err) {
    if (d.is_zero() || d.exp >= cut) {
      err = Dyadic();
      return d;
    }
    Z m;
    mpz_tdiv_q_2exp(m.get_mpz_t(), d.mant.get_mpz_t(), static_cast<mp_bitcnt_t>(cut - d.exp));
    err = Dyadic(Z(1), cut);
    return Dyadic(m, cut);
  };
  Ball r;
  Dyadic e1, e2;
  r.re = trunc(a.re, e1);
  r.im = trunc(a.im, e2);
  r.rad = (a.rad + e1 + e2).round_ceil(kRadPrec);
  return r;
}

Ball add_error(const Ball& a, const Dyadic& e) {
  Ball r = a;
  r.rad = (a.rad + e.abs()).round_ceil(kRadPrec);
  return r;
}

Ball add(const Ball& a, const Ball& b, long prec) {
  Ball r(a.re + b.re, a.im + b.im, (a.rad + b.rad).round_ceil(kRadPrec));
  return round(r, prec);
}

Ball sub(const Ball& a, const Ball& b, long prec) {
  Ball r(a.re - b.re, a.im - b.im, (a.rad + b.rad).round_ceil(kRadPrec));
  return round(r, prec);
}

Ball neg(const Ball& a) { return Ball(-a.re, -a.im, a.rad); }
Ball conj(const Ball& a) { return Ball(a.re, -a.im, a.rad); }

Ball mul(const Ball& a, const Ball& b, long prec) {
  Ball r;
  r.re = a.re * b.re - a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  Dyadic rad;
  if (!a.rad.is_zero() || !b.rad.is_zero()) {
    Dyadic ua = a.center_abs_upper(), ub = b.center_abs_upper();
    rad = ua * b.rad + ub * a.rad + a.rad * b.rad;
  }
  r.rad = rad.round_ceil(kRadPrec);
  return round(r, prec);
}

Ball div(const Ball& a, const Ball& b, long prec) {
  Dyadic lb = b.center_abs_lower();
  if (lb <= b.rad) throw DomainError("ball division by a ball containing zero");
  Dyadic n2 = b.re * b.re + b.im * b.im;
  Dyadic e1, e2;
  Ball inv;
  inv.re = div_near(b.re, n2, prec + 4, &e1);
  inv.im = div_near(-b.im, n2, prec + 4, &e2);
  // |1/(c+e) - 1/c| <= r / (|c| (|c| - r)).
  Q r = b.rad.to_q();
  Q l = lb.to_q();
  Q extra = r == 0 ? Q(0) : Q(r / (l * (l - r)));
  inv.rad = rad_up(extra + e1.to_q() + e2.to_q());
  return mul(a, inv, prec);
}

Ball pow(const Ball& a, const Z& n, long prec) {
  if (n < 0) return div(Ball(Dyadic(1)), pow(a, -n, prec), prec);
  Ball result(Dyadic(1));
  size_t bits = n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = mul(result, result, prec);
    if (mpz_tstbit(n.get_mpz_t(), i)) result = mul(result, a, prec);
  }
  return result;
}

Ball scale(const Ball& a, const Q& s, long prec) { return mul(a, Ball::from_q(s, prec), prec); }

}  // namespace orbit
