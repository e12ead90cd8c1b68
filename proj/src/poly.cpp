#include "orbit/poly.hpp"

#include <sstream>

namespace orbit {

template <class T>
static std::string poly_str(const Poly<T>& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = p.c.size(); i-- > 0;) {
    if (p.c[i] == 0) continue;
    T v = p.c[i];
    bool neg = v < 0;
    if (neg) v = -v;
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    bool unit = (v == 1);
    if (!unit || i == 0) os << to_string(v);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

std::string to_string(const RatPoly& p, const std::string& var) { return poly_str(p, var); }
std::string to_string(const ZPoly& p, const std::string& var) { return poly_str(p, var); }

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  if (a.degree() < b.degree()) return {RatPoly(), a};
  std::vector<Q> r = a.c;
  std::vector<Q> q(a.c.size() - b.c.size() + 1, Q(0));
  Q inv = 1 / b.lc();
  int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Q f = r[i] * inv;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c[j];
  }
  r.resize(db);
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

RatPoly operator%(const RatPoly& a, const RatPoly& b) { return divmod(a, b).second; }
RatPoly operator/(const RatPoly& a, const RatPoly& b) { return divmod(a, b).first; }

RatPoly monic(const RatPoly& p) {
  if (p.is_zero()) return p;
  return (1 / p.lc()) * p;
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  // Euclid over Q on primitive integer forms keeps coefficient growth modest.
  if (a.is_zero()) return monic(b);
  if (b.is_zero()) return monic(a);
  RatPoly x = to_rat(primitive_integer(a)), y = to_rat(primitive_integer(b));
  while (!y.is_zero()) {
    RatPoly r = x % y;
    x = std::move(y);
    y = r.is_zero() ? r : to_rat(primitive_integer(r));
  }
  return monic(x);
}

RatPoly compose(const RatPoly& p, const RatPoly& q) {
  RatPoly acc;
  for (size_t i = p.c.size(); i-- > 0;) acc = acc * q + RatPoly::constant(p.c[i]);
  return acc;
}

RatPoly shift(const RatPoly& p, const Q& s) { return compose(p, RatPoly({s, Q(1)})); }

RatPoly powmod(const RatPoly& b, const Z& n, const RatPoly& f) {
  if (n < 0) throw DomainError("negative exponent");
  RatPoly result = RatPoly::constant(1) % f;
  RatPoly base = b % f;
  size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = (result * result) % f;
    if (mpz_tstbit(n.get_mpz_t(), i)) result = (result * base) % f;
  }
  return result;
}

RatPoly powmod_x(const Z& n, const RatPoly& f) { return powmod(RatPoly::x(), n, f); }

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& p) {
  if (p.is_zero()) throw InvalidInput("squarefree decomposition of zero");
  std::vector<std::pair<RatPoly, int>> out;
  RatPoly f = monic(p);
  if (f.degree() == 0) return out;
  // Yun's algorithm.
  RatPoly fp = f.derivative();
  RatPoly a = gcd(f, fp);
  RatPoly b = f / a;
  RatPoly c = fp / a;
  RatPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    RatPoly g = gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g, i);
    b = b / g;
    c = d / g;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

RatPoly squarefree_part(const RatPoly& p) {
  RatPoly f = monic(p);
  if (f.degree() <= 0) return f;
  return monic(f / gcd(f, f.derivative()));
}

Z content(const ZPoly& p) {
  Z g = 0;
  for (const auto& v : p.c) g = gcd(g, v);
  return g;
}

ZPoly primitive_part(const ZPoly& p) {
  if (p.is_zero()) return p;
  Z g = content(p);
  if (p.lc() < 0) g = -g;
  ZPoly r = p;
  for (auto& v : r.c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return r;
}

ZPoly primitive_integer(const RatPoly& p) {
  if (p.is_zero()) return ZPoly();
  Z l = 1;
  for (const auto& v : p.c) l = lcm(l, v.get_den());
  std::vector<Z> z;
  z.reserve(p.c.size());
  for (const auto& v : p.c) z.push_back(v.get_num() * (l / v.get_den()));
  return primitive_part(ZPoly(std::move(z)));
}

RatPoly to_rat(const ZPoly& p) {
  std::vector<Q> q;
  q.reserve(p.c.size());
  for (const auto& v : p.c) q.emplace_back(v);
  return RatPoly(std::move(q));
}

Z height(const RatPoly& p) {
  ZPoly z = primitive_integer(p);
  Z h = 0;
  for (const auto& v : z.c) h = std::max(h, Z(abs(v)));
  return h;
}

bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  if (a.is_zero()) {
    if (quotient) *quotient = ZPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  std::vector<Z> r = a.c;
  std::vector<Z> q(a.c.size() - b.c.size() + 1, Z(0));
  int db = b.degree();
  const Z& lb = b.lc();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    if (!mpz_divisible_p(r[i].get_mpz_t(), lb.get_mpz_t())) return false;
    Z f = r[i] / lb;
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c[j];
  }
  for (int i = 0; i < db; ++i)
    if (r[i] != 0) return false;
  if (quotient) *quotient = ZPoly(std::move(q));
  return true;
}

ZPoly exact_div(const ZPoly& a, const ZPoly& b) {
  ZPoly q;
  if (!divides(b, a, &q)) throw DomainError("inexact polynomial division");
  return q;
}

Z norm2_sq(const ZPoly& p) {
  Z s = 0;
  for (const auto& v : p.c) s += v * v;
  return s;
}

RatPoly reverse(const RatPoly& p) {
  std::vector<Q> r(p.c.rbegin(), p.c.rend());
  return RatPoly(std::move(r));
}

RatPoly scale_arg(const RatPoly& p, const Q& s) {
  RatPoly r = p;
  Q pw = 1;
  for (auto& v : r.c) {
    v *= pw;
    pw *= s;
  }
  r.trim();
  return r;
}

}  // namespace orbit
