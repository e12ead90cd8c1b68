#include "orbit/rational.hpp"

#include <cctype>

namespace orbit {

std::string to_string(const Z& z) { return z.get_str(); }

std::string to_string(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

static bool valid_int_token(const std::string& s) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

Q parse_q(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto slash = s.find('/');
  std::string a = s.substr(0, slash);
  std::string b = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int_token(a) || !valid_int_token(b) || b[0] == '-' || b[0] == '+')
    throw InvalidInput("malformed rational: '" + raw + "'");
  if (a[0] == '+') a = a.substr(1);
  Z num(a), den(b);
  if (den == 0) throw InvalidInput("zero denominator: '" + raw + "'");
  return make_q(num, den);
}

Z gcd(const Z& a, const Z& b) {
  Z g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Z lcm(const Z& a, const Z& b) {
  Z l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

long floor_log2(const Z& z) {
  if (z == 0) throw DomainError("floor_log2 of zero");
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)) - 1;
}

long valuation(const Z& z, const Z& p) {
  if (z == 0) throw DomainError("valuation of zero");
  Z t = abs(z);
  long v = 0;
  while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

long valuation(const Q& q, const Z& p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

Z floor_q(const Q& q) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Z ceil_q(const Q& q) {
  Z r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Q abs_q(const Q& q) { return q < 0 ? Q(-q) : q; }

static void scaled_isqrt(const Q& q, long bits, Z& root, Z& den) {
  Z ab = q.get_num() * q.get_den();
  long len = static_cast<long>(mpz_sizeinbase(ab.get_mpz_t(), 2));
  long k = std::max(0L, bits - len / 2 + 1);
  Z n = ab << (2 * k);
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  den = q.get_den() << k;
}

Q sqrt_upper(const Q& q, long bits) {
  if (q < 0) throw DomainError("sqrt of negative");
  if (q == 0) return 0;
  Z r, d;
  scaled_isqrt(q, bits, r, d);
  Q out = make_q(r, d);
  if (out * out < q) out = make_q(r + 1, d);
  return out;
}

Q sqrt_lower(const Q& q, long bits) {
  if (q < 0) throw DomainError("sqrt of negative");
  if (q == 0) return 0;
  Z r, d;
  scaled_isqrt(q, bits, r, d);
  return make_q(r, d);
}

}  // namespace orbit
