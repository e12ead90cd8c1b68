#include "orbit/bounds.hpp"

#include <algorithm>
#include <numeric>

namespace orbit {

namespace {

bool is_unit_root(const AlgebraicNumber& a) { return !a.is_zero() && root_of_unity_check(a).has_value(); }

Z floor_plus_one(const Q& x) {
  Z m = floor_q(x) + 1;
  return m < 0 ? Z(0) : m;
}

LogRat absb(const AlgebraicNumber& a) { return a.is_zero() ? LogRat(Q(0)) : abs_bracket(a); }

// Rational chi with |r| <= chi < 1, given |r| < 1.
Q modulus_below_one(const AlgebraicNumber& r) {
  if (r.is_zero()) return Q(1, 2);
  for (long prec = 64; prec <= (1L << 14); prec *= 2) {
    Q hi = abs_bracket(r, prec).hi;
    if (hi < 1) return hi;
  }
  throw DomainError("modulus too close to 1 to separate");
}

// ln|a| - ln|b|, certified nonzero when the moduli differ.
LogRat ln_abs_ratio(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  LogRat d = ln_abs(a) - ln_abs(b);
  if (d.lo <= 0 && d.hi >= 0) throw DomainError("moduli too close to separate at working precision");
  return d;
}

AlgebraicNumber imag_unit() {
  for (auto& r : isolate_roots(RatPoly(std::vector<Q>{Q(1), Q(0), Q(1)})))
    if (r.box().center_im > 0) return r;
  throw std::logic_error("no root of x^2+1 in the upper half plane");
}

bool powers_match(const AlgebraicNumber& alpha, const Z& n, const AlgebraicNumber& beta) {
  if (n < 0) return false;
  if (n == 0) return alg_equals(beta, AlgebraicNumber(Q(1)));
  if (alpha.is_rational()) {
    if (!beta.is_rational()) return false;
    Q a = alpha.rational_value();
    if (!n.fits_ulong_p()) return false;
    Z num, den;
    mpz_pow_ui(num.get_mpz_t(), a.get_num_mpz_t(), n.get_ui());
    mpz_pow_ui(den.get_mpz_t(), a.get_den_mpz_t(), n.get_ui());
    return make_q(num, den) == beta.rational_value();
  }
  return alg_equals(alg_eval_poly(powmod_x(n, alpha.min_poly()), alpha), beta);
}

// A prime factor of |z| > 1 found by trial division or because the cofactor
// is a probable prime.
std::vector<Z> some_prime_factors(Z z) {
  std::vector<Z> out;
  if (z < 0) z = -z;
  for (unsigned long p = 2; p < 100000 && z > 1; ++p) {
    if (mpz_divisible_ui_p(z.get_mpz_t(), p)) {
      out.emplace_back(static_cast<long>(p));
      while (mpz_divisible_ui_p(z.get_mpz_t(), p)) mpz_divexact_ui(z.get_mpz_t(), z.get_mpz_t(), p);
    }
  }
  if (z > 1 && mpz_probab_prime_p(z.get_mpz_t(), 40)) out.push_back(z);
  return out;
}

long mod_inverse(long a, long m) {
  long g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    long q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw std::logic_error("no modular inverse");
  return ((x % m) + m) % m;
}

AlgebraicNumber alg_sum(const std::vector<AlgebraicNumber>& xs) {
  AlgebraicNumber s(Q(0));
  for (auto& x : xs)
    if (!x.is_zero()) s = s + x;
  return s;
}

// Exact sum_k P_k(n) root_k^n with P_k given by coefficient lists.
bool exact_zero(const std::vector<std::vector<AlgebraicNumber>>& polys, const std::vector<AlgebraicNumber>& roots,
                const Z& n) {
  std::vector<AlgebraicNumber> terms;
  for (size_t k = 0; k < roots.size(); ++k) {
    AlgebraicNumber p(Q(0)), npow(Q(1));
    for (auto& c : polys[k]) {
      if (!c.is_zero()) p = p + c * npow;
      npow = npow * AlgebraicNumber(Q(n));
    }
    if (p.is_zero()) continue;
    terms.push_back(p * alg_pow(roots[k], n.get_ui()));
  }
  return alg_sum(terms).is_zero();
}

void require_nonzero(const std::vector<const AlgebraicNumber*>& xs, const char* what) {
  for (auto* x : xs)
    if (x->is_zero()) throw DomainError(std::string(what) + ": zero coefficient or root");
}

void require_nonsingular(const std::vector<AlgebraicNumber>& roots) {
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j)
      if (is_unit_root(roots[i] / roots[j])) throw DomainError("root ratio is a root of unity");
}

// Bracket of sup_{t >= 0} (t + 1) q^t for 0 < q < 1.
Q linear_decay_sup(const Q& q) {
  LogRat l = -ln_bracket(q);  // -ln q > 0
  // Maximum is e^-1 / (q (-ln q)) when that exceeds 1.
  Q inv_e_upper(36788, 100000);
  Q v = inv_e_upper / (q * l.lo);
  return std::max(Q(1), v);
}

LogRat factorial_falling(long n, long k) {
  Z r = 1;
  for (long i = 0; i < k; ++i) r *= (n - i);
  return LogRat(Q(r));
}

}  // namespace

BoundResult BoundResult::no_solution() {
  BoundResult b;
  b.kind = Kind::NoSolution;
  return b;
}

BoundResult BoundResult::of_candidates(std::vector<Z> ns) {
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  ns.erase(std::remove_if(ns.begin(), ns.end(), [](const Z& z) { return z < 0; }), ns.end());
  if (ns.empty()) return no_solution();
  BoundResult b;
  b.kind = Kind::Candidates;
  b.candidates = std::move(ns);
  return b;
}

BoundResult BoundResult::of_congruences(std::vector<std::pair<long, long>> cs) {
  if (cs.empty()) return no_solution();
  for (auto& [t, m] : cs)
    if (m < 1) throw InvalidInput("congruence modulus must be positive");
  BoundResult b;
  b.kind = Kind::Congruences;
  b.congruences = std::move(cs);
  return b;
}

BoundResult BoundResult::search_bound(const Z& m) {
  BoundResult b;
  b.kind = Kind::SearchBound;
  Z mm = m < 0 ? Z(0) : m;
  b.log2_bound = log2_upper(mm);
  if (b.log2_bound <= 62) b.exact = mm;
  return b;
}

BoundResult BoundResult::unknown(std::string why) {
  BoundResult b;
  b.kind = Kind::Unknown;
  b.reason = std::move(why);
  return b;
}

bool BoundResult::permits(const Z& n) const {
  switch (kind) {
    case Kind::NoSolution: return false;
    case Kind::Candidates: return std::find(candidates.begin(), candidates.end(), n) != candidates.end();
    case Kind::Congruences:
      for (auto& [t, m] : congruences) {
        Z r = n % m;
        if (r < 0) r += m;
        if (r == t % m) return true;
      }
      return false;
    case Kind::SearchBound:
      if (exact) return n < *exact;
      // n < 2^log2_bound is implied by bitlength(n) <= floor(log2_bound).
      return n <= 0 || static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) <= floor_q(log2_bound).get_si() + 1;
    case Kind::Unknown: return true;
  }
  return true;
}

std::optional<Z> BoundResult::limit() const {
  switch (kind) {
    case Kind::NoSolution: return Z(0);
    case Kind::Candidates: return candidates.back() + 1;
    case Kind::SearchBound: return exact;
    default: return std::nullopt;
  }
}

std::string kind_name(BoundResult::Kind k) {
  switch (k) {
    case BoundResult::Kind::NoSolution: return "NoSolution";
    case BoundResult::Kind::Candidates: return "Candidates";
    case BoundResult::Kind::Congruences: return "Congruences";
    case BoundResult::Kind::SearchBound: return "SearchBound";
    case BoundResult::Kind::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {
nlohmann::json z_json(const Z& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}
}  // namespace

nlohmann::json to_json(const BoundResult& b) {
  nlohmann::json j;
  j["kind"] = kind_name(b.kind);
  j["candidates"] = nlohmann::json::array();
  for (auto& c : b.candidates) j["candidates"].push_back(z_json(c));
  j["congruences"] = nlohmann::json::array();
  for (auto& [t, m] : b.congruences) j["congruences"].push_back({t, m});
  j["log2_bound"] = to_string(b.log2_bound);
  j["exact"] = b.exact ? z_json(*b.exact) : nlohmann::json(nullptr);
  j["reason"] = b.reason;
  return j;
}

BoundResult fold_candidates(const Z& m, const std::vector<Z>& extra) {
  Z top = m;
  for (auto& e : extra)
    if (e + 1 > top) top = e + 1;
  return BoundResult::search_bound(top);
}

BoundResult power_solve(const AlgebraicNumber& alpha, const AlgebraicNumber& beta) {
  if (alpha.is_zero() || beta.is_zero()) throw DomainError("power_solve needs nonzero inputs");
  if (auto ra = root_of_unity_check(alpha)) {
    auto rb = root_of_unity_check(beta);
    if (!rb) return BoundResult::no_solution();
    auto [k, a] = *ra;
    auto [kb, b] = *rb;
    if (k % kb) return BoundResult::no_solution();
    // alpha^t = exp(2 pi i a t / k) equals exp(2 pi i b (k/kb) / k).
    long t = k == 1 ? 0 : static_cast<long>((static_cast<__int128>(b * (k / kb) % k) * mod_inverse(a, k)) % k);
    if (!powers_match(alpha, Z(t), beta)) throw std::logic_error("power_solve: root of unity phase mismatch");
    return BoundResult::of_congruences({{t, k}});
  }
  if (alg_equals(beta, AlgebraicNumber(Q(1)))) return BoundResult::of_candidates({Z(0)});
  // A positive power of a non-root of unity is never a root of unity.
  if (is_unit_root(beta)) return BoundResult::no_solution();
  if (alpha.degree() % beta.degree()) return BoundResult::no_solution();
  long r = alpha.degree() / beta.degree();

  auto verdict = [&](const Z& n) {
    return powers_match(alpha, n, beta) ? BoundResult::of_candidates({n}) : BoundResult::no_solution();
  };

  // Valuation route: n v_p(N alpha) = (deg alpha / deg beta) v_p(N beta).
  Q na = abs_norm(alpha), nb = abs_norm(beta);
  if (abs_q(na) != 1) {
    std::vector<Z> primes = some_prime_factors(na.get_num());
    for (auto& p : some_prime_factors(na.get_den())) primes.push_back(p);
    for (auto& p : primes) {
      long va = valuation(na, p);
      if (va == 0) continue;
      long vb = valuation(nb, p) * r;
      if (vb % va != 0 || vb / va < 0) return BoundResult::no_solution();
      return verdict(Z(vb / va));
    }
  }

  // Height route: h(alpha^n) = n h(alpha), and h(alpha) > 0 off the roots of unity.
  for (long prec = 64; prec <= 4096; prec *= 2) {
    LogRat ha = weil_height(alpha, prec);
    if (ha.lo <= 0) continue;
    LogRat q = weil_height(beta, prec) / ha;
    Z lo = ceil_q(q.lo), hi = floor_q(q.hi);
    if (lo < 0) lo = 0;
    if (hi - lo > 2) continue;
    for (Z n = lo; n <= hi; ++n)
      if (powers_match(alpha, n, beta)) return BoundResult::of_candidates({n});
    return BoundResult::no_solution();
  }
  return BoundResult::unknown("no valuation or expanding conjugate");
}

BlanksbyResult blanksby_conjugate(const AlgebraicNumber& alpha) {
  if (alpha.is_zero()) throw DomainError("blanksby_conjugate of zero");
  if (!alpha.is_algebraic_integer()) throw DomainError("blanksby_conjugate needs an algebraic integer");
  if (is_unit_root(alpha)) throw DomainError("blanksby_conjugate of a root of unity");
  long n = alpha.degree();
  Q lnup = ln_bracket(Q(6 * n)).hi;
  Q bound = Q(1) + Q(1) / (Q(30 * n * n) * lnup);
  auto cs = conjugates(alpha);
  const AlgebraicNumber* best = &cs[0];
  for (auto& c : cs)
    if (abs_compare(c, *best) > 0) best = &c;
  if (abs_compare(*best, AlgebraicNumber(bound)) <= 0)
    throw std::logic_error("no conjugate beyond the expansion bound");
  return BlanksbyResult{*best, bound};
}

LogRat baker_constant(unsigned long n, unsigned long d) {
  if (n == 0 || d == 0) throw InvalidInput("baker_constant needs n, d >= 1");
  return LogRat(Q(200 * static_cast<long>(n))) * ln_bracket(Q(16 * static_cast<long>(n * d)));
}

BoundResult baker_circle_bound(const AlgebraicNumber& lambda, const AlgebraicNumber& b, const Q& a, const Q& chi) {
  if (!(chi > 0 && chi < 1)) throw DomainError("baker_circle_bound needs 0 < chi < 1");
  if (a <= 0) throw DomainError("baker_circle_bound needs a > 0");
  if (lambda.is_zero() || abs_compare(lambda, AlgebraicNumber(Q(1))) != 0)
    throw DomainError("baker_circle_bound needs |lambda| = 1");
  if (is_unit_root(lambda)) throw DomainError("baker_circle_bound: lambda is a root of unity");
  LogRat lnchi = ln_bracket(chi);
  int cb = b.is_zero() ? -1 : abs_compare(b, AlgebraicNumber(Q(1)));
  if (cb != 0) {
    // Off the circle: |lambda^n - b| >= ||b| - 1| > a chi^n for large n.
    LogRat gap;
    for (long prec = kLogPrec;; prec *= 2) {
      LogRat mb = b.is_zero() ? LogRat(Q(0)) : abs_bracket(b, prec);
      gap = cb > 0 ? mb - LogRat(Q(1)) : LogRat(Q(1)) - mb;
      if (gap.lo > 0) break;
      if (prec > (1L << 14)) throw DomainError("|b| too close to 1");
    }
    LogRat x = ln_bracket(gap / LogRat(a)) / lnchi;
    return BoundResult::search_bound(floor_plus_one(x.hi));
  }
  // On the circle: the angle between lambda^n and b is bounded below by
  // linear forms in logarithms unless it is exactly zero.
  long d = std::max(lambda.degree(), b.degree());
  Z H = std::max({lambda.height(), b.height(), Z(4)});
  LogRat lnH = ln_bracket(Q(H));
  Z c48 = 1;
  for (int i = 0; i < 600; ++i) c48 *= 48 * d;
  LogRat p1 = LogRat(Q(c48)) * lr_sqr(lnH);
  LogRat p2 = LogRat(Q(2)) * lr_sqr(lnH);
  LogRat p3 = ln2_bracket() + ln_bracket(a) + p1 * ln_bracket(p2);
  LogRat p4 = lr_max(p3, p1);
  LogRat x = p4 / (-lnchi);
  // sqrt(n) >= x suffices once 1 + ln n <= sqrt(n), i.e. n >= 13.
  Z m = std::max(ceil_q(lr_sqr(x).hi), Z(16));
  std::vector<Z> extra;
  BoundResult zero_angle = power_solve(lambda, b);
  for (auto& n : zero_angle.candidates) extra.push_back(n);
  return fold_candidates(m, extra);
}

BoundResult two_circles_bound(const AlgebraicNumber& l1, const AlgebraicNumber& l2, const AlgebraicNumber& a,
                              const AlgebraicNumber& b, const AlgebraicNumber& c, const Q& w, const Q& chi) {
  AlgebraicNumber one(Q(1));
  if (!(chi > 0 && chi < 1)) throw DomainError("two_circles_bound needs 0 < chi < 1");
  if (w <= 0) throw DomainError("two_circles_bound needs w > 0");
  require_nonzero({&l1, &l2, &a, &b, &c}, "two_circles_bound");
  if (abs_compare(l1, one) != 0 || abs_compare(l2, one) != 0) throw DomainError("two_circles_bound needs unimodular rotations");
  if (is_unit_root(l1) || is_unit_root(l2)) throw DomainError("two_circles_bound: rotation is a root of unity");

  // Normalize by conj(c)/(|c||a|): unit circle against the circle of radius
  // R = |b|/|a| centred at C = |c|/|a| > 0.
  AlgebraicNumber a2 = abs_squared(a);
  AlgebraicNumber C2 = abs_squared(c) / a2, R2 = abs_squared(b) / a2;
  AlgebraicNumber T = C2 + one - R2;
  int disc = real_compare(T * T - AlgebraicNumber(Q(4)) * C2, AlgebraicNumber(Q(0)));
  LogRat lnchi = ln_bracket(chi);
  LogRat lnw = ln_bracket(w) - ln_abs(a);  // ln of the normalized w

  if (disc > 0) {
    // Disjoint circles: the gap between them is a positive constant.
    LogRat gap;
    for (long prec = kLogPrec;; prec *= 2) {
      LogRat C = abs_bracket(c, prec) / abs_bracket(a, prec);
      LogRat R = abs_bracket(b, prec) / abs_bracket(a, prec);
      LogRat one_r(Q(1));
      gap = lr_max(lr_max(C - R - one_r, R - C - one_r), one_r - C - R);
      if (gap.lo > 0) break;
      if (prec > (1L << 14)) throw DomainError("circle gap too small to certify");
    }
    // |phi(n)| <= w chi^n < gap once n exceeds ln(gap/w)/ln chi. The magnitude
    // of that ratio is used: equal to it when it is positive, and still a valid
    // (looser) limit when the inequality already holds from n = 0.
    LogRat x = (ln_bracket(gap) - lnw) / lnchi;
    Q mag = std::max(abs_q(x.lo), abs_q(x.hi));
    return BoundResult::search_bound(floor_plus_one(mag));
  }

  // Intersecting or tangent circles. With f = a' l1^n = e^{i theta_n} and
  // x* = (1 + C^2 - R^2)/(2C) = cos theta*, the distance from f to the second
  // circle is at least 2C|cos theta* - cos theta_n|/(1 + C + R), and each sine
  // factor of that difference is bounded below by a linear form in the logs of
  // z* = e^{i theta*}, a', l1 and -1.
  AlgebraicNumber C = alg_positive_sqrt(C2);
  AlgebraicNumber xs = T / (AlgebraicNumber(Q(2)) * C);
  AlgebraicNumber s2 = one - xs * xs;
  AlgebraicNumber ys = real_compare(s2, AlgebraicNumber(Q(0))) > 0 ? alg_positive_sqrt(s2) : AlgebraicNumber(Q(0));
  AlgebraicNumber zs = ys.is_zero() ? xs : xs + imag_unit() * ys;
  AlgebraicNumber an = a * complex_conjugate(c) / alg_positive_sqrt(a2 * abs_squared(c));

  std::vector<Z> extra;
  for (auto& target : std::vector<AlgebraicNumber>{zs / an, complex_conjugate(zs) / an}) {
    BoundResult r = power_solve(l1, target);
    for (auto& n : r.candidates) extra.push_back(n);
  }

  long d = std::max({zs.degree(), an.degree(), l1.degree()});
  LogRat omega = LogRat(Q(1));
  for (const AlgebraicNumber* v : std::vector<const AlgebraicNumber*>{&zs, &an, &l1}) omega = omega * ln_bracket(Q(std::max(v->height(), Z(4))));
  omega = omega * ln_bracket(Q(4));  // the log of -1, height clamped to 4
  Z c64 = 1;
  for (int i = 0; i < 800; ++i) c64 *= 64 * d;
  // Coefficients are bounded by n + 3 <= 4n, so ln|Lambda| > -c Omega (ln 4 + ln Omega + ln n).
  LogRat cO = LogRat(Q(c64)) * omega;
  LogRat per_form = cO * (ln_bracket(Q(4)) + ln_bracket(omega));
  LogRat C_b = abs_bracket(c) / abs_bracket(a);
  LogRat R_b = abs_bracket(b) / abs_bracket(a);
  LogRat k0 = ln_bracket(LogRat(Q(4)) * C_b / (LogRat(Q(1)) + C_b + R_b));
  LogRat lnpi = ln_bracket(pi_bracket());
  // Contradiction once n(-ln chi) > ln w' - ln k0 + 2 ln pi + 2 per_form + 2 cO ln n.
  LogRat k = lnw - k0 + LogRat(Q(2)) * lnpi + LogRat(Q(2)) * per_form;
  Z N = exceed_threshold(-lnchi, k, LogRat(Q(2)) * cO);
  return fold_candidates(N, extra);
}

LogRat vdp_bound(unsigned long n_terms, unsigned long d, const Z& p, const std::vector<Q>& heights, const Q& B) {
  if (n_terms == 0 || d == 0) throw InvalidInput("vdp_bound needs n, d >= 1");
  if (heights.size() != n_terms) throw InvalidInput("vdp_bound needs one height per term");
  if (p < 2 || !mpz_probab_prime_p(p.get_mpz_t(), 40)) throw InvalidInput("vdp_bound needs a prime");
  LogRat lnB = ln_bracket(B);
  if (lnB.lo < 2) throw DomainError("vdp_bound needs B >= e^2");
  long k = static_cast<long>(n_terms) + 1;
  LogRat v = LogRat(Q(12 * k)) * ln_bracket(Q(16 * k * static_cast<long>(d)));
  LogRat lnp = ln_bracket(Q(p));
  v = v + LogRat(Q(static_cast<long>(d))) * lnp - ln_bracket(lnp);
  for (auto& h : heights) v = v + ln_bracket(ln_bracket(std::max(h, Q(4))));
  v = v + LogRat(Q(2)) * ln_bracket(lnB);
  return v;
}

BoundResult skolem3(const AlgebraicNumber& A, const AlgebraicNumber& B, const AlgebraicNumber& C,
                    const AlgebraicNumber& alpha, const AlgebraicNumber& beta, const AlgebraicNumber& gamma) {
  require_nonzero({&A, &B, &C, &alpha, &beta, &gamma}, "skolem3");
  require_nonsingular({alpha, beta, gamma});
  std::vector<std::pair<AlgebraicNumber, AlgebraicNumber>> t{{A, alpha}, {B, beta}, {C, gamma}};
  std::stable_sort(t.begin(), t.end(), [](auto& x, auto& y) { return abs_compare(x.second, y.second) > 0; });
  const auto& [a, ra] = t[0];
  const auto& [b, rb] = t[1];
  const auto& [c, rc] = t[2];

  if (abs_compare(ra, rb) > 0) {
    // One dominant root.
    LogRat x1 = (ln_abs(a) - ln_bracket(Q(2)) - ln_abs(b)) / ln_abs_ratio(rb, ra);
    LogRat x2 = (ln_abs(a) - ln_bracket(Q(2)) - ln_abs(c)) / ln_abs_ratio(rc, ra);
    return BoundResult::search_bound(floor_plus_one(lr_max(x1, x2).hi));
  }
  if (abs_compare(rb, rc) > 0) {
    // (rb/ra)^n = -(c/b)(rc/ra)^n - a/b.
    Q chi = modulus_below_one(rc / ra);
    Q amp = abs_bracket(c / b).hi;
    return baker_circle_bound(rb / ra, -(a / b), amp, chi);
  }
  // Three equal moduli: (rb/ra)^n lies on the unit circle and on the circle
  // about -a/b of radius |c/b|, so it is one of their intersection points.
  AlgebraicNumber u = rb / ra, c0 = -(a / b);
  AlgebraicNumber c0sq = abs_squared(c0);
  AlgebraicNumber tt = (AlgebraicNumber(Q(1)) + c0sq - abs_squared(c / b)) / AlgebraicNumber(Q(2));
  AlgebraicNumber s2 = c0sq - tt * tt;
  int sg = real_compare(s2, AlgebraicNumber(Q(0)));
  if (sg < 0) return BoundResult::no_solution();
  std::vector<AlgebraicNumber> ws;
  if (sg == 0) {
    ws.push_back(tt);
  } else {
    AlgebraicNumber sq = imag_unit() * alg_positive_sqrt(s2);
    ws.push_back(tt + sq);
    ws.push_back(tt - sq);
  }
  std::vector<Z> found;
  for (auto& w : ws) {
    AlgebraicNumber z = w / complex_conjugate(c0);
    BoundResult r = power_solve(u, z);
    for (auto& n : r.candidates)
      if (exact_zero({{A}, {B}, {C}}, {alpha, beta, gamma}, n)) found.push_back(n);
  }
  return BoundResult::of_candidates(found);
}

BoundResult skolem3_repeated(const AlgebraicNumber& A, const AlgebraicNumber& B, const AlgebraicNumber& C,
                             const AlgebraicNumber& alpha, const AlgebraicNumber& beta) {
  require_nonzero({&A, &B, &C, &alpha, &beta}, "skolem3_repeated");
  require_nonsingular({alpha, beta});
  if (abs_compare(alpha, beta) >= 0) {
    // |A + B n| > |C| once n > (|A| + |C|)/|B|.
    LogRat x = (absb(A) + absb(C)) / absb(B);
    return BoundResult::search_bound(floor_plus_one(x.hi));
  }
  // |A/C| + |B/C| n <= d (n + 1) < |beta/alpha|^n once n > 4 f^2 / ln^2|beta/alpha|.
  LogRat dd = lr_max(absb(A) / absb(C), absb(B) / absb(C));
  LogRat f = lr_max(ln_bracket(dd), LogRat(Q(1)));
  LogRat x = LogRat(Q(4)) * lr_sqr(f) / lr_sqr(ln_abs_ratio(beta, alpha));
  return BoundResult::search_bound(floor_plus_one(x.hi));
}

std::vector<std::pair<Q, int>> root_valuations(const RatPoly& f, const Z& p) {
  int d = f.degree();
  if (d < 1) return {};
  if (f.c[0] == 0) throw DomainError("root_valuations needs a nonzero constant term");
  std::vector<std::pair<int, long>> pts;
  for (int i = 0; i <= d; ++i)
    if (f.c[i] != 0) pts.emplace_back(i, valuation(f.c[i], p));
  // Lower convex hull from the constant term to the leading term.
  std::vector<std::pair<Q, int>> out;
  size_t cur = 0;
  while (pts[cur].first != d) {
    size_t best = cur + 1;
    Q best_slope = make_q(Z(pts[best].second - pts[cur].second), Z(pts[best].first - pts[cur].first));
    for (size_t j = cur + 2; j < pts.size(); ++j) {
      Q s = make_q(Z(pts[j].second - pts[cur].second), Z(pts[j].first - pts[cur].first));
      if (s <= best_slope) {
        best_slope = s;
        best = j;
      }
    }
    out.emplace_back(-best_slope, pts[best].first - pts[cur].first);
    cur = best;
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// All four moduli equal, roots in two complex-conjugate pairs, rational
// coefficients: p-adic valuations of the roots under one prime above p.
BoundResult same_magnitude_1111(const std::vector<AlgebraicNumber>& co, const std::vector<AlgebraicNumber>& ro) {
  for (auto& r : ro)
    if (!r.is_algebraic_integer()) throw DomainError("same-magnitude depth-4 case needs algebraic integer roots");
  // Pair every root with its complex conjugate.
  std::vector<int> partner(4, -1);
  for (int i = 0; i < 4; ++i) {
    if (ro[i].is_real()) throw DomainError("same-magnitude depth-4 case needs two conjugate pairs");
    AlgebraicNumber cj = complex_conjugate(ro[i]);
    for (int j = 0; j < 4; ++j)
      if (j != i && alg_equals(ro[j], cj)) partner[i] = j;
    if (partner[i] < 0) throw DomainError("same-magnitude depth-4 case needs two conjugate pairs");
  }
  for (auto& c : co)
    if (!c.is_rational()) return BoundResult::unknown("same-magnitude depth-4 case with irrational coefficients");
  int i0 = 0, j0 = partner[0];
  int i1 = -1;
  for (int k = 0; k < 4; ++k)
    if (k != i0 && k != j0) {
      i1 = k;
      break;
    }
  int j1 = partner[i1];
  if (alg_equals(ro[i0], ro[i1])) throw DomainError("repeated root");

  AlgebraicNumber ratio = ro[i0] / ro[j0];
  if (ratio.is_algebraic_integer())
    return BoundResult::unknown("conjugate ratio is an algebraic integer; the expanding embedding needs a common number field");

  AlgebraicNumber msq = ro[i0] * ro[j0];  // |root|^2
  // Degree of a field holding all four roots: product of falling factorials
  // of the degrees of the distinct minimal polynomials.
  long dfield = 1;
  {
    std::vector<std::pair<RatPoly, int>> seen;
    for (auto& r : ro) {
      bool hit = false;
      for (auto& [f, cnt] : seen)
        if (f == r.min_poly()) {
          ++cnt;
          hit = true;
        }
      if (!hit) seen.emplace_back(r.min_poly(), 1);
    }
    for (auto& [f, cnt] : seen) dfield *= factorial_falling(f.degree(), cnt).hi.get_num().get_si();
  }

  std::vector<Q> cq;
  for (auto& c : co) cq.push_back(c.rational_value());
  Q nm = abs_norm(msq);
  for (auto& p : some_prime_factors(nm.get_num() * nm.get_den())) {
    auto va = root_valuations(ro[i0].min_poly(), p);
    auto vm = root_valuations(msq.min_poly(), p);
    if (vm.size() != 1) continue;
    Q vmq = vm[0].first;
    Q s = va.back().first;  // a prime above p realizing the largest slope
    if (s == vmq - s) continue;
    auto vg = root_valuations(ro[i1].min_poly(), p);
    Z worst = 0;
    std::vector<Z> extra;
    bool ok = true;
    for (auto& [t, mult] : vg) {
      Q val[4];
      val[i0] = s;
      val[j0] = vmq - s;
      val[i1] = t;
      val[j1] = vmq - t;
      Q vmin = std::min({val[0], val[1], val[2], val[3]});
      std::vector<int> low, high;
      for (int k = 0; k < 4; ++k) (val[k] == vmin ? low : high).push_back(k);
      if (low.size() == 1) {
        // The unique smallest term cannot be cancelled once n exceeds
        // (v(X1) - v(Y)) / (v(y) - v(x1)) for every other term.
        int x1 = low[0];
        Q top = 0;
        for (int y : high) {
          if (cq[y] == 0) continue;
          Q r = Q(valuation(cq[x1], p) - valuation(cq[y], p)) / (val[y] - val[x1]);
          top = std::max(top, r);
        }
        worst = std::max(worst, floor_plus_one(top));
      } else if (low.size() == 2) {
        int x1 = low[0], x2 = low[1];
        Q g = std::min(val[high[0]], val[high[1]]) - vmin;
        Q K = 0;
        for (int y : high) K = std::max(K, Q(valuation(cq[x1], p) - valuation(cq[y], p)));
        AlgebraicNumber rr = ro[x2] / ro[x1];
        Q coef = -cq[x2] / cq[x1];
        Q h1 = std::max(abs_q(Q(coef.get_num())), Q(coef.get_den()));
        Q h2 = Q(rr.height());
        // E1 = (48 d)^36 (p^d / ln p) ln H1 ln H2, the bound without (ln n)^2.
        Z c48 = 1;
        for (int i = 0; i < 36; ++i) c48 *= 48 * dfield;
        Z pd = 1;
        for (long i = 0; i < dfield; ++i) pd *= p;
        LogRat E1 = LogRat(Q(c48 * pd)) / ln_bracket(Q(p)) * ln_bracket(std::max(h1, Q(4))) *
                    ln_bracket(std::max(h2, Q(4)));
        Z N = exceed_threshold(LogRat(g), LogRat(K), LogRat(Q(0)), E1);
        worst = std::max({worst, N, Z(8)});
        BoundResult one = power_solve(rr, AlgebraicNumber(-cq[x1] / cq[x2]));
        for (auto& n : one.candidates) extra.push_back(n);
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    return fold_candidates(worst, extra);
  }
  return BoundResult::unknown("no rational prime separates the valuations of the conjugate pair");
}

BoundResult depth4_1111(const std::vector<AlgebraicNumber>& coeffs, const std::vector<AlgebraicNumber>& roots) {
  for (auto& c : coeffs)
    if (c.is_zero()) throw DomainError("skolem4 (1,1,1,1) needs nonzero coefficients");
  std::vector<size_t> ord{0, 1, 2, 3};
  std::stable_sort(ord.begin(), ord.end(), [&](size_t x, size_t y) { return abs_compare(roots[x], roots[y]) > 0; });
  std::vector<AlgebraicNumber> co, ro;
  for (auto i : ord) {
    co.push_back(coeffs[i]);
    ro.push_back(roots[i]);
  }
  if (abs_compare(ro[0], ro[1]) > 0) {
    LogRat x = LogRat(Q(-1000000));
    for (int k = 1; k < 4; ++k) {
      LogRat xk = (ln_bracket(Q(3)) + ln_abs(co[k]) - ln_abs(co[0])) / ln_abs_ratio(ro[0], ro[k]);
      x = lr_max(x, xk);
    }
    return BoundResult::search_bound(floor_plus_one(x.hi));
  }
  if (abs_compare(ro[1], ro[2]) > 0) {
    Q chi = modulus_below_one(ro[2] / ro[0]);
    Q amp = (abs_bracket(co[2] / co[1]) + abs_bracket(co[3] / co[1])).hi;
    return baker_circle_bound(ro[1] / ro[0], -(co[0] / co[1]), amp, chi);
  }
  if (abs_compare(ro[2], ro[3]) > 0) {
    // B l1^n = -C l2^n - A - D mu^n.
    Q chi = modulus_below_one(ro[3] / ro[0]);
    return two_circles_bound(ro[1] / ro[0], ro[2] / ro[0], co[1], -co[2], -co[0], abs_bracket(co[3]).hi, chi);
  }
  return same_magnitude_1111(co, ro);
}

BoundResult depth4_211(const std::vector<AlgebraicNumber>& cf, const std::vector<AlgebraicNumber>& roots) {
  const AlgebraicNumber &A = cf[0], &B = cf[1];
  AlgebraicNumber C = cf[2], D = cf[3];
  AlgebraicNumber alpha = roots[0], beta = roots[1], gamma = roots[2];
  require_nonzero({&B, &C, &D}, "skolem4 (2,1,1)");
  if (abs_compare(beta, gamma) < 0) {
    std::swap(beta, gamma);
    std::swap(C, D);
  }
  if (abs_compare(alpha, beta) >= 0) {
    LogRat x = (absb(A) + absb(C) + absb(D)) / absb(B);
    return BoundResult::search_bound(floor_plus_one(x.hi));
  }
  LogRat M = lr_max(absb(A), absb(B));
  if (abs_compare(beta, gamma) > 0) {
    // C beta^n dominates: both other terms drop below |C|/2.
    LogRat x1 = (ln_abs(C) - ln_bracket(Q(2)) - ln_abs(D)) / ln_abs_ratio(gamma, beta);
    LogRat k = ln_bracket(LogRat(Q(4)) * M / absb(C));
    Z N2 = exceed_threshold(-ln_abs_ratio(alpha, beta), k, LogRat(Q(1)));
    return BoundResult::search_bound(std::max({floor_plus_one(x1.hi), N2, Z(1)}));
  }
  // |beta| = |gamma| > |alpha|: (beta/gamma)^n = -D/C - ((A + B n)/C)(alpha/gamma)^n.
  Q r = modulus_below_one(alpha / gamma);
  Q chi = (r + 1) / 2;
  Q a = (M / absb(C)).hi * linear_decay_sup(r / chi);
  return baker_circle_bound(beta / gamma, -(D / C), a, chi);
}

BoundResult depth4_22(const std::vector<AlgebraicNumber>& cf, const std::vector<AlgebraicNumber>& roots) {
  const AlgebraicNumber &A = cf[0], &B = cf[1], &C = cf[2], &D = cf[3];
  if ((A.is_zero() && B.is_zero()) || (C.is_zero() && D.is_zero()))
    throw DomainError("skolem4 (2,2) needs both polynomial coefficients nonzero");
  // A + B n = 0 forces C + D n = 0; that single n is an exceptional candidate.
  std::vector<Z> extra;
  if (!B.is_zero()) {
    AlgebraicNumber n0 = -(A / B);
    if (n0.is_rational() && is_integer(n0.rational_value()) && n0.rational_value() >= 0)
      extra.push_back(n0.rational_value().get_num());
  }
  // Otherwise lambda^n = -(C + D n)/(A + B n), and heights give
  // n h(lambda) <= h(A) + h(B) + h(C) + h(D) + 2 ln 2 + 2 ln n.
  AlgebraicNumber lambda = roots[0] / roots[1];
  LogRat hl;
  for (long prec = kLogPrec;; prec *= 2) {
    hl = weil_height(lambda, prec);
    if (hl.lo > 0) break;
    if (prec > (1L << 13)) throw DomainError("height of the root ratio not separated from zero");
  }
  LogRat k = LogRat(Q(2)) * ln2_bracket();
  for (auto* x : std::vector<const AlgebraicNumber*>{&A, &B, &C, &D})
    if (!x->is_zero()) k = k + weil_height(*x);
  Z N = exceed_threshold(hl, k, LogRat(Q(2)));
  return fold_candidates(N, extra);
}

BoundResult depth4_31(const std::vector<AlgebraicNumber>& cf, const std::vector<AlgebraicNumber>& roots) {
  const AlgebraicNumber& D = cf[3];
  require_nonzero({&D}, "skolem4 (3,1)");
  int e = -1;
  for (int k = 0; k < 3; ++k)
    if (!cf[k].is_zero()) e = k;
  if (e < 0) throw DomainError("skolem4 (3,1) needs a nonzero polynomial part");
  AlgebraicNumber lambda = roots[0] / roots[1];
  if (e == 0) return power_solve(lambda, -(D / cf[0]));
  if (abs_compare(roots[0], roots[1]) >= 0) {
    // |P(n)| >= n^(e-1)(|c_e| n - S) > |D| once n > (S + |D|)/|c_e|.
    LogRat S(Q(0));
    for (int k = 0; k < e; ++k) S = S + absb(cf[k]);
    LogRat x = (S + absb(D)) / absb(cf[e]);
    return BoundResult::search_bound(std::max(floor_plus_one(x.hi), Z(1)));
  }
  // |P(n) lambda^n| <= T n^e |lambda|^n < |D| for n past the threshold.
  LogRat T(Q(0));
  for (int k = 0; k <= e; ++k) T = T + absb(cf[k]);
  Z N = exceed_threshold(-ln_abs_ratio(roots[0], roots[1]), ln_bracket(T / absb(D)), LogRat(Q(e)));
  return BoundResult::search_bound(N);
}

BoundResult depth4_4(const std::vector<AlgebraicNumber>& cf) {
  int e = -1;
  for (int k = 0; k < 4; ++k)
    if (!cf[k].is_zero()) e = k;
  if (e < 0) return BoundResult::of_congruences({{0, 1}});
  if (e == 0) return BoundResult::no_solution();
  bool rational = std::all_of(cf.begin(), cf.end(), [](auto& c) { return c.is_rational(); });
  std::vector<Z> found;
  if (rational) {
    std::vector<Q> qs;
    for (int k = 0; k <= e; ++k) qs.push_back(cf[k].rational_value());
    RatPoly P(qs);
    for (auto& r : isolate_roots(P))
      if (r.is_rational() && is_integer(r.rational_value()) && r.rational_value() >= 0)
        found.push_back(r.rational_value().get_num());
    return BoundResult::of_candidates(found);
  }
  // Integer roots lie below the Cauchy bound 1 + max |c_k / c_e|.
  LogRat mx(Q(0));
  for (int k = 0; k < e; ++k) mx = lr_max(mx, absb(cf[k]) / absb(cf[e]));
  Z U = floor_q(mx.hi) + 1;
  if (U > 1000000) return BoundResult::search_bound(U + 1);
  for (Z n = 0; n <= U; ++n) {
    std::vector<AlgebraicNumber> terms;
    AlgebraicNumber np(Q(1));
    for (int k = 0; k <= e; ++k) {
      if (!cf[k].is_zero()) terms.push_back(cf[k] * np);
      np = np * AlgebraicNumber(Q(n));
    }
    if (alg_sum(terms).is_zero()) found.push_back(n);
  }
  return BoundResult::of_candidates(found);
}

}  // namespace

BoundResult skolem4(const std::vector<int>& pattern, const std::vector<AlgebraicNumber>& coeffs,
                    const std::vector<AlgebraicNumber>& roots) {
  if (coeffs.size() != 4) throw InvalidInput("skolem4 needs four coefficients");
  if (pattern.size() != roots.size()) throw InvalidInput("skolem4 pattern and root count differ");
  if (std::accumulate(pattern.begin(), pattern.end(), 0) != 4) throw InvalidInput("skolem4 pattern must sum to 4");
  for (auto& r : roots)
    if (r.is_zero()) throw DomainError("skolem4 roots must be nonzero");
  require_nonsingular(roots);
  if (pattern == std::vector<int>{1, 1, 1, 1}) return depth4_1111(coeffs, roots);
  if (pattern == std::vector<int>{2, 1, 1}) return depth4_211(coeffs, roots);
  if (pattern == std::vector<int>{2, 2}) return depth4_22(coeffs, roots);
  if (pattern == std::vector<int>{3, 1}) return depth4_31(coeffs, roots);
  if (pattern == std::vector<int>{4}) return depth4_4(coeffs);
  throw InvalidInput("unsupported skolem4 pattern");
}

}  // namespace orbit
