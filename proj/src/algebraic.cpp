#include "orbit/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "orbit/matrix.hpp"

namespace orbit {

namespace {

constexpr long kMaxPrec = 1L << 17;

Q pow2(long k) {
  if (k >= 0) return Q(Z(1) << k);
  return make_q(Z(1), Z(1) << (-k));
}

long mag_bits(const Q& q) {
  if (q == 0) return 0;
  long b = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2)) + 1;
  return std::max(b, 0L);
}

}  // namespace

AlgebraicNumber::AlgebraicNumber(const Q& q) {
  min_poly_ = RatPoly({Q(-q), Q(1)});
  box_ = ComplexBox{q, 0, 0};
  zpoly_ = ZPoly({Z(-q.get_num()), Z(q.get_den())});
  height_ = std::max(Z(abs(q.get_num())), Z(q.get_den()));
  sep_ = 1;
  cache_ = std::make_shared<Cache>();
  cache_->best = box_;
}

AlgebraicNumber AlgebraicNumber::from_isolated(const RatPoly& min_poly, const ComplexBox& box) {
  if (min_poly.degree() < 1) throw InvalidInput("minimal polynomial must be nonconstant");
  RatPoly m = monic(min_poly);
  if (m.degree() == 1) return AlgebraicNumber(Q(-m.c[0]));
  AlgebraicNumber a;
  a.min_poly_ = m;
  a.box_ = box;
  a.zpoly_ = primitive_integer(m);
  a.height_ = orbit::height(m);
  a.sep_ = separation_lower_bound(m);
  a.cache_ = std::make_shared<Cache>();
  a.cache_->best = box;
  return a;
}

Q AlgebraicNumber::rational_value() const {
  if (!is_rational()) throw DomainError("not a rational number");
  return -min_poly_.c[0];
}

bool AlgebraicNumber::is_algebraic_integer() const {
  return std::all_of(min_poly_.c.begin(), min_poly_.c.end(), [](const Q& q) { return is_integer(q); });
}

ComplexBox AlgebraicNumber::refined(const Q& eps) const {
  if (is_rational()) return box_;
  std::lock_guard<std::mutex> lock(cache_->m);
  if (cache_->best.radius > eps) cache_->best = refine_root(zpoly_, cache_->best, eps, sep_);
  return cache_->best;
}

Ball AlgebraicNumber::ball(long prec) const {
  if (is_rational()) {
    Q q = rational_value();
    return Ball::from_q(q, Q(0), Q(0), prec + mag_bits(q) + 2);
  }
  ComplexBox b = refined(pow2(-prec - 1));
  long extra = std::max(mag_bits(b.center_re), mag_bits(b.center_im));
  return Ball::from_q(b.center_re, b.center_im, b.radius, prec + extra + 2);
}

std::string AlgebraicNumber::str() const {
  if (is_rational()) return to_string(rational_value());
  std::ostringstream os;
  os.precision(12);
  ComplexBox b = refined(pow2(-40));
  os << "root of " << to_string(min_poly_) << " near " << b.center_re.get_d();
  if (b.center_im != 0) os << (b.center_im > 0 ? " + " : " - ") << std::fabs(b.center_im.get_d()) << "i";
  return os.str();
}

Ball ball_eval(const RatPoly& p, const Ball& x, long prec) {
  Ball acc;
  for (size_t i = p.c.size(); i-- > 0;) {
    acc = mul(acc, x, prec);
    acc = add(acc, Ball::from_q(p.c[i], Q(0), Q(0), prec + mag_bits(p.c[i]) + 2), prec);
  }
  return acc;
}

namespace {

// Canonical boxes are those produced by isolation; they are cached per
// polynomial, so repeated identification is cheap.
AlgebraicNumber identify_irreducible(const RatPoly& g, const std::function<Ball(long)>& approx) {
  if (g.degree() == 1) return AlgebraicNumber(Q(-monic(g).c[0]));
  auto boxes = isolate_squarefree(primitive_integer(g), Q(1));
  for (long prec = 64; prec <= kMaxPrec; prec *= 2) {
    Ball b = approx(prec);
    Q bre = b.re.to_q(), bim = b.im.to_q(), brad = b.rad.to_q();
    ComplexBox bb{bre, bim, brad};
    int hits = 0, which = -1;
    for (size_t i = 0; i < boxes.size(); ++i)
      if (boxes[i].overlaps(bb)) {
        ++hits;
        which = static_cast<int>(i);
      }
    if (hits == 1) return AlgebraicNumber::from_isolated(g, boxes[which]);
    if (hits == 0) throw std::logic_error("identify: enclosure misses every root");
  }
  throw DomainError("identify: precision limit reached");
}

std::vector<RatPoly> distinct_factors(const RatPoly& f) {
  std::vector<RatPoly> out;
  for (auto& [g, m] : factor_rational_poly(f)) out.push_back(g);
  return out;
}

}  // namespace

AlgebraicNumber identify_root(const RatPoly& f, const std::function<Ball(long)>& approx) {
  if (f.is_zero()) throw InvalidInput("identify_root on the zero polynomial");
  std::vector<RatPoly> cands = distinct_factors(f);
  for (long prec = 64; cands.size() > 1 && prec <= kMaxPrec; prec *= 2) {
    Ball b = approx(prec);
    std::vector<RatPoly> keep;
    for (auto& g : cands)
      if (ball_eval(g, b, prec).contains_zero()) keep.push_back(g);
    if (keep.empty()) throw std::logic_error("identify: no factor vanishes on the enclosure");
    cands = std::move(keep);
  }
  if (cands.size() != 1) throw DomainError("identify: precision limit reached");
  return identify_irreducible(cands[0], approx);
}

std::vector<AlgebraicNumber> isolate_roots(const RatPoly& p) {
  if (p.is_zero()) throw InvalidInput("isolate_roots of the zero polynomial");
  std::vector<AlgebraicNumber> out;
  for (auto& [g, m] : factor_rational_poly(p)) {
    if (g.degree() == 1) {
      out.emplace_back(Q(-g.c[0]));
      continue;
    }
    for (auto& b : isolate_squarefree(primitive_integer(g), Q(1))) out.push_back(AlgebraicNumber::from_isolated(g, b));
  }
  // Make discs pairwise disjoint across different factors.
  std::vector<ComplexBox> boxes;
  for (auto& a : out) boxes.push_back(a.box());
  for (int round = 0; round < 200; ++round) {
    bool clash = false;
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = i + 1; j < out.size(); ++j) {
        if (!boxes[i].overlaps(boxes[j])) continue;
        clash = true;
        for (size_t k : {i, j})
          if (boxes[k].radius > 0) boxes[k] = out[k].refined(boxes[k].radius / 4);
      }
    if (!clash) break;
  }
  std::vector<AlgebraicNumber> res;
  for (size_t i = 0; i < out.size(); ++i)
    res.push_back(out[i].is_rational() ? out[i] : AlgebraicNumber::from_isolated(out[i].min_poly(), boxes[i]));
  return res;
}

AlgebraicNumber operator-(const AlgebraicNumber& a) {
  if (a.is_rational()) return AlgebraicNumber(Q(-a.rational_value()));
  RatPoly f = scale_arg(a.min_poly(), Q(-1));
  const ComplexBox& b = a.box();
  // Negation preserves heights and root distances.
  return AlgebraicNumber::from_isolated(f, ComplexBox{-b.center_re, -b.center_im, b.radius});
}

AlgebraicNumber alg_inverse(const AlgebraicNumber& a) {
  if (a.is_zero()) throw DomainError("division by zero");
  if (a.is_rational()) return AlgebraicNumber(Q(1 / a.rational_value()));
  RatPoly f = monic(reverse(a.min_poly()));
  return identify_irreducible(f, [&](long prec) {
    Ball b = a.ball(prec + 8);
    return div(Ball(Dyadic(1)), b, prec + 8);
  });
}

namespace {

AlgebraicNumber add_or_mul(bool is_add, const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational())
    return AlgebraicNumber(is_add ? Q(a.rational_value() + b.rational_value())
                                  : Q(a.rational_value() * b.rational_value()));
  const AlgebraicNumber& x = a.is_rational() ? b : a;
  const AlgebraicNumber& y = a.is_rational() ? a : b;
  auto approx = [&](long prec) {
    Ball bx = x.ball(prec + 8), by = y.ball(prec + 8);
    return is_add ? add(bx, by, prec + 8) : mul(bx, by, prec + 8);
  };
  if (y.is_rational()) {
    Q r = y.rational_value();
    if (is_add) {
      if (r == 0) return x;
      return identify_irreducible(shift(x.min_poly(), -r), approx);
    }
    if (r == 0) return AlgebraicNumber(Q(0));
    if (r == 1) return x;
    return identify_irreducible(monic(scale_arg(x.min_poly(), Q(1 / r))), approx);
  }
  RatMatrix cx = companion(x.min_poly()), cy = companion(y.min_poly());
  RatMatrix k = is_add ? kronecker(cx, RatMatrix::identity(cy.rows)) + kronecker(RatMatrix::identity(cx.rows), cy)
                       : kronecker(cx, cy);
  return identify_root(charpoly(k), approx);
}

}  // namespace

AlgebraicNumber alg_binop(BinOp kind, const AlgebraicNumber& a, const AlgebraicNumber& b) {
  switch (kind) {
    case BinOp::Add:
      return add_or_mul(true, a, b);
    case BinOp::Sub:
      return add_or_mul(true, a, -b);
    case BinOp::Mul:
      return add_or_mul(false, a, b);
    case BinOp::Div:
      if (b.is_zero()) throw DomainError("division by zero");
      return add_or_mul(false, a, alg_inverse(b));
  }
  throw InvalidInput("unknown operation");
}

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_binop(BinOp::Add, a, b); }
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_binop(BinOp::Sub, a, b); }
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_binop(BinOp::Mul, a, b); }
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) { return alg_binop(BinOp::Div, a, b); }

AlgebraicNumber alg_pow(const AlgebraicNumber& a, unsigned long n) {
  RatPoly xn = RatPoly::monomial(Q(1), n);
  return alg_eval_poly(xn, a);
}

AlgebraicNumber alg_eval_poly(const RatPoly& p, const AlgebraicNumber& a) {
  if (a.is_rational()) return AlgebraicNumber(p.eval(a.rational_value()));
  RatPoly r = p.degree() >= a.degree() ? p % a.min_poly() : p;
  if (r.degree() <= 0) return AlgebraicNumber(r.is_zero() ? Q(0) : r.c[0]);
  int n = a.degree();
  // Multiplication by r on Q[x]/(f).
  RatMatrix m(n, n);
  RatPoly col = r;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = col.coeff(i);
    col = (RatPoly::x() * col) % a.min_poly();
  }
  return identify_root(charpoly(m), [&](long prec) {
    long extra = 8 + static_cast<long>(r.c.size()) * 2;
    return ball_eval(r, a.ball(prec + extra), prec + extra);
  });
}

bool alg_equals(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.min_poly() != b.min_poly()) return false;
  if (a.is_rational()) return true;
  // Both discs isolate roots of the same polynomial with radius < sep/4.
  return a.box().overlaps(b.box());
}

long euler_phi(long k) {
  long r = k;
  for (long p = 2; p * p <= k; ++p)
    if (k % p == 0) {
      while (k % p == 0) k /= p;
      r -= r / p;
    }
  if (k > 1) r -= r / k;
  return r;
}

RatPoly cyclotomic(long k) {
  if (k < 1) throw InvalidInput("cyclotomic index must be positive");
  static std::mutex mu;
  static std::map<long, ZPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return to_rat(it->second);
  }
  ZPoly num = ZPoly::monomial(Z(1), static_cast<size_t>(k)) - ZPoly::constant(Z(1));
  for (long d = 1; d < k; ++d)
    if (k % d == 0) num = exact_div(num, primitive_integer(cyclotomic(d)));
  std::lock_guard<std::mutex> lock(mu);
  cache[k] = num;
  return to_rat(num);
}

std::optional<std::pair<long, long>> root_of_unity_check(const AlgebraicNumber& a) {
  if (a.is_zero()) throw DomainError("root_of_unity_check of zero");
  if (!a.is_algebraic_integer()) return std::nullopt;
  long n = a.degree();
  if (n == 1) {
    Q q = a.rational_value();
    if (q == 1) return std::make_pair(1L, 0L);
    if (q == -1) return std::make_pair(2L, 1L);
    return std::nullopt;
  }
  if (abs_norm(a) != 1 && abs_norm(a) != -1) return std::nullopt;
  for (long k = 3; k <= 2 * n * n + 1; ++k) {
    if (euler_phi(k) != n) continue;
    if (cyclotomic(k) != a.min_poly()) continue;
    ComplexBox b = a.refined(Q(1, Z(1) << 60));
    double t = std::atan2(b.center_im.get_d(), b.center_re.get_d()) / (2 * M_PI);
    if (t < 0) t += 1;
    long j = std::lround(t * static_cast<double>(k)) % k;
    if (std::gcd(j, k) != 1) throw std::logic_error("root of unity phase is not primitive");
    return std::make_pair(k, j);
  }
  return std::nullopt;
}

std::vector<AlgebraicNumber> conjugates(const AlgebraicNumber& a) {
  if (a.is_rational()) return {a};
  std::vector<AlgebraicNumber> out;
  for (auto& b : isolate_squarefree(a.integer_poly(), Q(1))) out.push_back(AlgebraicNumber::from_isolated(a.min_poly(), b));
  return out;
}

AlgebraicNumber complex_conjugate(const AlgebraicNumber& a) {
  if (a.is_real()) return a;
  const ComplexBox& b = a.box();
  return AlgebraicNumber::from_isolated(a.min_poly(), ComplexBox{b.center_re, -b.center_im, b.radius});
}

AlgebraicNumber real_part(const AlgebraicNumber& a) {
  if (a.is_real()) return a;
  return (a + complex_conjugate(a)) * AlgebraicNumber(Q(1, 2));
}

AlgebraicNumber abs_squared(const AlgebraicNumber& a) {
  if (a.is_rational()) return AlgebraicNumber(Q(a.rational_value() * a.rational_value()));
  return a * complex_conjugate(a);
}

int real_compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (!a.is_real() || !b.is_real()) throw InvalidInput("real_compare needs real numbers");
  if (a.is_rational() && b.is_rational()) return cmp(a.rational_value(), b.rational_value());
  if (alg_equals(a, b)) return 0;
  for (long prec = 32; prec <= kMaxPrec; prec *= 2) {
    Ball x = a.ball(prec), y = b.ball(prec);
    if (x.re_upper() < y.re_lower()) return -1;
    if (y.re_upper() < x.re_lower()) return 1;
  }
  throw DomainError("real_compare: precision limit reached");
}

int abs_compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return cmp(abs_q(a.rational_value()), abs_q(b.rational_value()));
  return real_compare(abs_squared(a), abs_squared(b));
}

Q abs_norm(const AlgebraicNumber& a) {
  const RatPoly& f = a.min_poly();
  return f.degree() % 2 == 0 ? f.c[0] : Q(-f.c[0]);
}

long norm_valuation(const AlgebraicNumber& a, const Z& p) {
  if (a.is_zero()) return kInfiniteValuation;
  return valuation(abs_norm(a), p);
}

ComplexBox refine(const AlgebraicNumber& a, const Q& eps) {
  if (eps <= 0) throw InvalidInput("refine needs eps > 0");
  return a.refined(eps);
}

nlohmann::json to_json(const AlgebraicNumber& a) {
  nlohmann::json j;
  j["min_poly"] = nlohmann::json::array();
  for (const auto& c : a.min_poly().c) j["min_poly"].push_back(to_string(c));
  j["re"] = to_string(a.box().center_re);
  j["im"] = to_string(a.box().center_im);
  j["radius"] = to_string(a.box().radius);
  return j;
}

AlgebraicNumber algebraic_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("min_poly") || !j["min_poly"].is_array())
    throw InvalidInput("algebraic number JSON needs a min_poly array");
  std::vector<Q> cs;
  for (const auto& c : j["min_poly"]) {
    if (!c.is_string()) throw InvalidInput("min_poly coefficients must be \"p/q\" strings");
    cs.push_back(parse_q(c.get<std::string>()));
  }
  RatPoly f(cs);
  if (f.degree() < 1) throw InvalidInput("min_poly must be nonconstant");
  f = monic(f);
  if (!is_irreducible(f)) throw InvalidInput("min_poly is not irreducible");
  auto get = [&](const char* k) {
    if (!j.contains(k) || !j[k].is_string()) throw InvalidInput(std::string("missing field ") + k);
    return parse_q(j[k].get<std::string>());
  };
  ComplexBox given{get("re"), get("im"), get("radius")};
  if (given.radius < 0) throw InvalidInput("negative radius");
  if (f.degree() == 1) {
    Q r = -f.c[0];
    if (!given.contains(r, Q(0))) throw InvalidInput("box does not contain the root");
    return AlgebraicNumber(r);
  }
  std::vector<AlgebraicNumber> roots;
  for (auto& b : isolate_squarefree(primitive_integer(f), Q(1))) roots.push_back(AlgebraicNumber::from_isolated(f, b));
  for (int round = 0; round < 60; ++round) {
    int hits = 0, which = -1;
    for (size_t i = 0; i < roots.size(); ++i) {
      ComplexBox b = roots[i].refined(given.radius > 0 ? Q(given.radius / Q(Z(1) << round)) : pow2(-8 * (round + 1)));
      if (b.overlaps(given)) {
        ++hits;
        which = static_cast<int>(i);
      }
    }
    if (hits == 1) return roots[which];
    if (hits == 0) throw InvalidInput("box contains no root of min_poly");
  }
  throw InvalidInput("box does not isolate a single root");
}

AlgebraicNumber alg_positive_sqrt(const AlgebraicNumber& r) {
  if (r.is_rational()) {
    Q q = r.rational_value();
    Z num, den;
    if (mpz_perfect_square_p(q.get_num().get_mpz_t()) && mpz_perfect_square_p(q.get_den().get_mpz_t())) {
      mpz_sqrt(num.get_mpz_t(), q.get_num().get_mpz_t());
      mpz_sqrt(den.get_mpz_t(), q.get_den().get_mpz_t());
      return AlgebraicNumber(make_q(num, den));
    }
  }
  RatPoly f = compose(r.min_poly(), RatPoly({Q(0), Q(0), Q(1)}));
  return identify_root(f, [&](long prec) {
    Ball b = r.ball(prec + 4);
    Dyadic lo = b.re - b.rad, hi = b.re + b.rad;
    if (lo.sign() < 0) lo = Dyadic(0);
    Dyadic slo = sqrt_down(lo, prec + 4), shi = sqrt_up(hi, prec + 4);
    Ball out;
    out.re = (slo + shi).mul_2exp(-1);
    out.rad = (shi - slo).mul_2exp(-1);
    return out;
  });
}

}  // namespace orbit
