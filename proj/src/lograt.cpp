#include "orbit/lograt.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace orbit {

namespace {

Q round_down(const Q& q, long prec) { return Dyadic::from_q_floor(q, prec).to_q(); }
Q round_up(const Q& q, long prec) { return Dyadic::from_q_ceil(q, prec).to_q(); }

// atanh t for |t| <= 1/3 by its odd power series. Powers are carried as
// outward-rounded brackets so the rationals stay short; the tail is bounded
// geometrically.
LogRat atanh_series(const Q& t, long prec) {
  if (t == 0) return LogRat(Q(0));
  if (t < 0) return -atanh_series(-t, prec);
  long wp = prec + 24;
  Q t2lo = round_down(t * t, wp), t2hi = round_up(t * t, wp);
  Q plo = round_down(t, wp), phi = round_up(t, wp);
  Q slo = 0, shi = 0;
  Q eps = make_q(Z(1), Z(1) << (prec + 8));
  for (long j = 0;; ++j) {
    slo += round_down(plo / Q(2 * j + 1), wp);
    shi += round_up(phi / Q(2 * j + 1), wp);
    plo = round_down(plo * t2lo, wp);
    phi = round_up(phi * t2hi, wp);
    if (phi < eps) {
      Q tail = round_up(phi / (Q(2 * j + 3) * (Q(1) - t2hi)), wp);
      return round_out(LogRat(slo, shi + tail), prec + 4);
    }
  }
}

// atan t for 0 < t <= 1/5; the series alternates and decreases.
LogRat atan_series(const Q& t, long prec) {
  Q t2 = t * t;
  Q pw = t, sum = 0;
  Q eps = make_q(Z(1), Z(1) << (prec + 8));
  for (long j = 0;; ++j) {
    Q term = pw / Q(2 * j + 1);
    sum += (j % 2 ? -term : term);
    pw *= t2;
    Q next = pw / Q(2 * j + 3);
    if (next < eps) return round_out(LogRat(sum - next, sum + next), prec + 4);
  }
}

struct ConstCache {
  std::mutex m;
  std::map<long, LogRat> ln2, pi;
};

ConstCache& const_cache() {
  static ConstCache c;
  return c;
}

long bits(const Z& z) { return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

// ln q for q > 0 with q exactly dyadic-sized (numerator and denominator short).
LogRat ln_exact(const Q& q, long prec) {
  if (q == 1) return LogRat(Q(0));
  long k = bits(q.get_num()) - bits(q.get_den());
  Q m = q;
  if (k > 0) m /= Q(Z(1) << k);
  if (k < 0) m *= Q(Z(1) << (-k));
  // m in [1/2, 2); move it into [2/3, 4/3].
  if (m > Q(4, 3)) {
    m /= 2;
    ++k;
  } else if (m < Q(2, 3)) {
    m *= 2;
    --k;
  }
  Q t = (m - 1) / (m + 1);
  LogRat r = LogRat(Q(2)) * atanh_series(t, prec + 8);
  if (k != 0) r = r + LogRat(Q(k)) * ln2_bracket(prec + 8 + bits(Z(k < 0 ? -k : k)));
  return round_out(r, prec);
}

}  // namespace

LogRat::LogRat(const Q& l, const Q& h) : lo(l), hi(h) {
  if (lo > hi) throw std::logic_error("LogRat with lo > hi");
}

std::string LogRat::str() const {
  std::ostringstream os;
  os << "[" << lo.get_d() << ", " << hi.get_d() << "]";
  return os.str();
}

LogRat round_out(const LogRat& a, long prec) { return LogRat(round_down(a.lo, prec), round_up(a.hi, prec)); }

LogRat operator+(const LogRat& a, const LogRat& b) { return round_out(LogRat(a.lo + b.lo, a.hi + b.hi)); }
LogRat operator-(const LogRat& a, const LogRat& b) { return round_out(LogRat(a.lo - b.hi, a.hi - b.lo)); }
LogRat operator-(const LogRat& a) { return LogRat(-a.hi, -a.lo); }

LogRat operator*(const LogRat& a, const LogRat& b) {
  Q p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Q lo = p[0], hi = p[0];
  for (auto& v : p) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return round_out(LogRat(lo, hi));
}

LogRat operator/(const LogRat& a, const LogRat& b) {
  if (b.lo <= 0 && b.hi >= 0) throw DomainError("LogRat division by a bracket containing zero");
  return a * round_out(LogRat(Q(1) / b.hi, Q(1) / b.lo));
}

LogRat lr_max(const LogRat& a, const LogRat& b) { return LogRat(std::max(a.lo, b.lo), std::max(a.hi, b.hi)); }
LogRat lr_min(const LogRat& a, const LogRat& b) { return LogRat(std::min(a.lo, b.lo), std::min(a.hi, b.hi)); }

LogRat lr_sqr(const LogRat& a) {
  if (a.lo >= 0) return round_out(LogRat(a.lo * a.lo, a.hi * a.hi));
  if (a.hi <= 0) return round_out(LogRat(a.hi * a.hi, a.lo * a.lo));
  return round_out(LogRat(Q(0), std::max(a.lo * a.lo, a.hi * a.hi)));
}

LogRat lr_sqrt(const LogRat& a) {
  if (a.lo < 0) throw DomainError("lr_sqrt of a negative bracket");
  return LogRat(sqrt_lower(a.lo, kLogPrec), sqrt_upper(a.hi, kLogPrec));
}

LogRat ln2_bracket(long prec) {
  auto& c = const_cache();
  {
    std::lock_guard<std::mutex> g(c.m);
    auto it = c.ln2.lower_bound(prec);
    if (it != c.ln2.end()) return it->second;
  }
  LogRat r = LogRat(Q(2)) * atanh_series(Q(1, 3), prec + 8);
  r = round_out(r, prec);
  std::lock_guard<std::mutex> g(c.m);
  c.ln2[prec] = r;
  return r;
}

LogRat pi_bracket(long prec) {
  auto& c = const_cache();
  {
    std::lock_guard<std::mutex> g(c.m);
    auto it = c.pi.lower_bound(prec);
    if (it != c.pi.end()) return it->second;
  }
  // Machin: pi = 16 atan(1/5) - 4 atan(1/239).
  LogRat r = LogRat(Q(16)) * atan_series(Q(1, 5), prec + 8) - LogRat(Q(4)) * atan_series(Q(1, 239), prec + 8);
  r = round_out(r, prec);
  std::lock_guard<std::mutex> g(c.m);
  c.pi[prec] = r;
  return r;
}

LogRat ln_bracket(const Q& q, long prec) {
  if (q <= 0) throw DomainError("logarithm of a nonpositive number");
  if (bits(q.get_num()) + bits(q.get_den()) <= prec + 16) return ln_exact(q, prec);
  Q lo = round_down(q, prec + 16), hi = round_up(q, prec + 16);
  return round_out(LogRat(ln_exact(lo, prec + 8).lo, ln_exact(hi, prec + 8).hi), prec);
}

LogRat ln_bracket(const LogRat& a, long prec) {
  if (a.lo <= 0) throw DomainError("logarithm of a bracket reaching zero");
  return LogRat(ln_bracket(a.lo, prec).lo, ln_bracket(a.hi, prec).hi);
}

LogRat abs_bracket(const AlgebraicNumber& a, long prec) {
  if (a.is_zero()) throw DomainError("modulus bracket of zero");
  if (a.is_rational()) return LogRat(abs_q(a.rational_value()));
  for (long p = prec + 8;; p *= 2) {
    Ball b = a.ball(p);
    Q lo = b.abs_lower().to_q(), hi = b.abs_upper().to_q();
    if (lo > 0 && (hi - lo) * Q(Z(1) << prec) <= lo) return LogRat(lo, hi);
    if (p > 64 * prec) {
      if (lo > 0) return LogRat(lo, hi);
    }
  }
}

LogRat ln_abs(const AlgebraicNumber& a, long prec) { return ln_bracket(abs_bracket(a, prec), prec); }

LogRat ln_mahler(const AlgebraicNumber& a, long prec) {
  if (a.is_zero()) throw DomainError("Mahler measure of zero");
  const ZPoly& f = a.integer_poly();
  Z lead = f.c.back();
  if (lead < 0) lead = -lead;
  LogRat sum = ln_bracket(Q(lead), prec);
  for (auto& c : conjugates(a)) {
    LogRat l = ln_abs(c, prec);
    sum = sum + lr_max(l, LogRat(Q(0)));
  }
  return sum;
}

LogRat weil_height(const AlgebraicNumber& a, long prec) {
  return ln_mahler(a, prec) / LogRat(Q(a.degree()));
}

Q log2_upper(const Z& m) {
  if (m <= 1) return 0;
  LogRat l = ln_bracket(Q(m)) / ln2_bracket();
  Z den = Z(1) << 20;
  Q up = make_q(ceil_q(l.hi * Q(den)), den);
  if (m <= (Z(1) << 62) && up > 62) up = 62;
  return up;
}

Z exceed_threshold(const LogRat& rho, const LogRat& k, const LogRat& c1, const LogRat& c2) {
  if (rho.lo <= 0) throw DomainError("exceed_threshold needs a positive rate");
  if (c1.lo < 0 || c2.lo < 0) throw DomainError("exceed_threshold needs nonnegative log coefficients");
  // Beyond 64 bits a coarser logarithm keeps each probe cheap.
  auto ln_hi = [](const Z& n) {
    if (n <= 1) return Q(0);
    return ln_bracket(Q(n), mpz_sizeinbase(n.get_mpz_t(), 2) > 64 ? 64 : kLogPrec).hi;
  };
  // Past n0 the true left side minus the logarithmic terms is increasing.
  auto increasing_from = [&](const Z& n) { return rho.lo * Q(n) >= c1.hi + Q(2) * c2.hi * ln_hi(n); };
  auto holds = [&](const Z& n) {
    Q l = ln_hi(n);
    return rho.lo * Q(n) > k.hi + c1.hi * l + c2.hi * l * l;
  };
  auto first_true = [](const Z& start, const std::function<bool(const Z&)>& pred) {
    if (pred(start)) return start;
    Z lo = start, step = 1;
    Z hi = start + step;
    while (!pred(hi)) {
      lo = hi;
      step *= 2;
      hi = start + step;
    }
    // pred(lo) false, pred(hi) true.
    // Exact bisection for modest thresholds, relative 2^-24 beyond.
    while (hi - lo > 1 && (bits(hi) <= 64 || (hi - lo) > (hi >> 24))) {
      Z mid = (lo + hi) / 2;
      if (pred(mid))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };
  Z n0 = 1;
  if (c1.hi > 0 || c2.hi > 0) n0 = first_true(Z(3), increasing_from);
  return first_true(n0, holds);
}

}  // namespace orbit
