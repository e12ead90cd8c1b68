#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace orbit {

using Z = mpz_class;
using Q = mpq_class;

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

inline Q make_q(const Z& num, const Z& den) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

// "p/q" with q omitted when 1.
std::string to_string(const Q& q);
std::string to_string(const Z& z);

// Accepts "p", "p/q", "-p/q"; throws InvalidInput otherwise.
Q parse_q(const std::string& s);

inline bool is_integer(const Q& q) { return q.get_den() == 1; }

Z lcm(const Z& a, const Z& b);
Z gcd(const Z& a, const Z& b);

// Floor of log2 of |z| (z != 0).
long floor_log2(const Z& z);

// Exponent of prime p in |z|, z != 0.
long valuation(const Z& z, const Z& p);

// v_p(num) - v_p(den).
long valuation(const Q& q, const Z& p);

Z floor_q(const Q& q);
Z ceil_q(const Q& q);

Q abs_q(const Q& q);

// Upper bound on sqrt(q) for q >= 0 with relative slack about 2^-bits.
Q sqrt_upper(const Q& q, long bits = 64);
Q sqrt_lower(const Q& q, long bits = 64);

}  // namespace orbit
