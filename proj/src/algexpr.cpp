#include "orbit/algexpr.hpp"

#include <map>
#include <unordered_map>
#include <numeric>
#include <functional>

namespace orbit {

namespace {

using NodeP = std::shared_ptr<const AlgExpr::Node>;

long bits_of(const Z& z) { return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

// log2 upper bound of a positive rational.
long log2_ceil(const Q& q) { return bits_of(q.get_num()) - bits_of(q.get_den()) + 1; }

Z falling(long n, long k) {
  Z r = 1;
  for (long i = 0; i < k; ++i) r *= (n - i);
  return r;
}

struct Walk {
  const RootTable& t;
  std::unordered_map<const AlgExpr::Node*, Q> bound, den;
  std::unordered_map<const AlgExpr::Node*, Ball> val;
  long prec = 0;
  const std::vector<size_t>* remap = nullptr;  // evaluate at permuted roots

  // Upper bound on |sigma(e)| over all conjugations.
  const Q& conj_bound(const AlgExpr::Node* n) {
    auto it = bound.find(n);
    if (it != bound.end()) return it->second;
    Q r;
    switch (n->op) {
      case AlgExpr::Op::Const: r = abs_q(n->value); break;
      case AlgExpr::Op::Root: r = t.conj_modulus(n->index); break;
      case AlgExpr::Op::Add:
      case AlgExpr::Op::Sub: r = conj_bound(n->a.get()) + conj_bound(n->b.get()); break;
      case AlgExpr::Op::Mul: r = conj_bound(n->a.get()) * conj_bound(n->b.get()); break;
      case AlgExpr::Op::Neg: r = conj_bound(n->a.get()); break;
      case AlgExpr::Op::Pow: {
        Q b = conj_bound(n->a.get());
        r = 1;
        for (unsigned long i = 0; i < n->exp; ++i) r *= b;
        break;
      }
    }
    return bound[n] = r;
  }

  // d with d * e an algebraic integer.
  const Q& denominator(const AlgExpr::Node* n) {
    auto it = den.find(n);
    if (it != den.end()) return it->second;
    Z r;
    switch (n->op) {
      case AlgExpr::Op::Const: r = n->value.get_den(); break;
      case AlgExpr::Op::Root: r = 1; break;
      case AlgExpr::Op::Add:
      case AlgExpr::Op::Sub:
        r = lcm(denominator(n->a.get()).get_num(), denominator(n->b.get()).get_num());
        break;
      case AlgExpr::Op::Mul: r = denominator(n->a.get()).get_num() * denominator(n->b.get()).get_num(); break;
      case AlgExpr::Op::Neg: r = denominator(n->a.get()).get_num(); break;
      case AlgExpr::Op::Pow: {
        Z b = denominator(n->a.get()).get_num();
        r = 1;
        for (unsigned long i = 0; i < n->exp; ++i) r *= b;
        break;
      }
    }
    return den[n] = Q(r);
  }

  const Ball& value(const AlgExpr::Node* n) {
    auto it = val.find(n);
    if (it != val.end()) return it->second;
    Ball r;
    switch (n->op) {
      case AlgExpr::Op::Const: r = Ball::from_q(n->value, prec + log2_ceil(abs_q(n->value) + 1) + 4); break;
      case AlgExpr::Op::Root: r = t.ball(remap ? (*remap)[n->index] : n->index, prec); break;
      case AlgExpr::Op::Add: r = add(value(n->a.get()), value(n->b.get()), prec); break;
      case AlgExpr::Op::Sub: r = sub(value(n->a.get()), value(n->b.get()), prec); break;
      case AlgExpr::Op::Mul: r = mul(value(n->a.get()), value(n->b.get()), prec); break;
      case AlgExpr::Op::Neg: r = neg(value(n->a.get())); break;
      case AlgExpr::Op::Pow: r = pow(value(n->a.get()), Z(n->exp), prec); break;
    }
    return val[n] = r;
  }
};

void collect_roots(const AlgExpr::Node* n, std::set<size_t>& out, std::set<const AlgExpr::Node*>& seen) {
  if (!seen.insert(n).second) return;
  if (n->op == AlgExpr::Op::Root) out.insert(n->index);
  if (n->a) collect_roots(n->a.get(), out, seen);
  if (n->b) collect_roots(n->b.get(), out, seen);
}

NodeP make_const(const Q& v) {
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Const;
  n->value = v;
  return n;
}

}  // namespace

RootTable::RootTable(std::vector<AlgebraicNumber> roots) : roots_(std::move(roots)) {
  std::vector<RatPoly> polys;
  for (auto& r : roots_) {
    if (!r.is_algebraic_integer()) throw InvalidInput("root table entries must be algebraic integers");
    size_t f = 0;
    while (f < polys.size() && polys[f] != r.min_poly()) ++f;
    if (f == polys.size()) {
      polys.push_back(r.min_poly());
      factor_degree_.push_back(r.degree());
      // Modulus bound over all roots of the factor: 1 + max |c_i| (monic).
      Q m = 0;
      for (auto& c : r.min_poly().c) m = std::max(m, abs_q(c));
      Q tight = 1;
      for (auto& c : conjugates(r)) tight = std::max(tight, c.ball(32).abs_upper().to_q());
      conj_mod_.push_back(std::min(Q(Q(1) + m), tight));
    }
    factor_.push_back(f);
  }
}

Ball RootTable::ball(size_t i, long prec) const { return roots_[i].ball(prec); }

AlgExpr::AlgExpr(const Q& v) : node_(make_const(v)) {}

AlgExpr AlgExpr::root(size_t i) {
  auto n = std::make_shared<Node>();
  n->op = Op::Root;
  n->index = i;
  return AlgExpr(NodeP(n));
}

AlgExpr operator+(const AlgExpr& x, const AlgExpr& y) {
  if (x.is_const() && y.is_const()) return AlgExpr(x.const_value() + y.const_value());
  if (x.is_const() && x.const_value() == 0) return y;
  if (y.is_const() && y.const_value() == 0) return x;
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Add;
  n->a = x.node_;
  n->b = y.node_;
  return AlgExpr(NodeP(n));
}

AlgExpr operator-(const AlgExpr& x, const AlgExpr& y) {
  if (x.is_const() && y.is_const()) return AlgExpr(x.const_value() - y.const_value());
  if (y.is_const() && y.const_value() == 0) return x;
  if (x.is_const() && x.const_value() == 0) return -y;
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Sub;
  n->a = x.node_;
  n->b = y.node_;
  return AlgExpr(NodeP(n));
}

AlgExpr operator*(const AlgExpr& x, const AlgExpr& y) {
  if (x.is_const() && y.is_const()) return AlgExpr(x.const_value() * y.const_value());
  if ((x.is_const() && x.const_value() == 0) || (y.is_const() && y.const_value() == 0)) return AlgExpr(Q(0));
  if (x.is_const() && x.const_value() == 1) return y;
  if (y.is_const() && y.const_value() == 1) return x;
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Mul;
  n->a = x.node_;
  n->b = y.node_;
  return AlgExpr(NodeP(n));
}

AlgExpr operator-(const AlgExpr& x) {
  if (x.is_const()) return AlgExpr(-x.const_value());
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Neg;
  n->a = x.node_;
  return AlgExpr(NodeP(n));
}

AlgExpr pow(const AlgExpr& x, unsigned long e) {
  if (e == 0) return AlgExpr(Q(1));
  if (e == 1) return x;
  if (x.is_const()) {
    Q r = 1;
    for (unsigned long i = 0; i < e; ++i) r *= x.const_value();
    return AlgExpr(r);
  }
  auto n = std::make_shared<AlgExpr::Node>();
  n->op = AlgExpr::Op::Pow;
  n->a = x.node_;
  n->exp = e;
  return AlgExpr(NodeP(n));
}

AlgExpr eval_at_root(const RatPoly& p, size_t i) {
  AlgExpr x = AlgExpr::root(i), acc(Q(0));
  for (size_t k = p.c.size(); k-- > 0;) acc = acc * x + AlgExpr(p.c[k]);
  return acc;
}

Ball eval(const AlgExpr& e, const RootTable& t, long prec) {
  Walk w{t, {}, {}, {}, prec};
  return w.value(e.node());
}

std::set<size_t> roots_used(const AlgExpr& e) {
  std::set<size_t> out;
  std::set<const AlgExpr::Node*> seen;
  collect_roots(e.node(), out, seen);
  return out;
}

Q abs_upper(const AlgExpr& e, const RootTable& t) {
  if (e.is_const()) return abs_q(e.const_value());
  return eval(e, t, 64).abs_upper().to_q();
}

bool is_zero(const AlgExpr& e, const RootTable& t) {
  if (e.is_const()) return e.const_value() == 0;
  // If d e != 0 it is a nonzero algebraic integer with at most `deg`
  // conjugates, all of modulus <= d B, so |d e| >= (d B)^-(deg - 1).
  Walk w{t, {}, {}, {}, 0};
  Q d = w.denominator(e.node());
  Q dB = std::max(Q(1), Q(d * w.conj_bound(e.node())));
  std::map<size_t, long> per_factor;
  for (size_t i : roots_used(e)) ++per_factor[t.factor_of(i)];
  Z deg = 1;
  for (auto& [f, k] : per_factor) deg *= falling(t.factor_degree(f), k);
  Z gap_bits = (deg - 1) * Z(log2_ceil(dB)) + 2 + log2_ceil(d);  // |e| < 2^-gap_bits forces e == 0
  if (!gap_bits.fits_slong_p()) throw DomainError("zero test precision out of range");
  long gap = gap_bits.get_si();
  long top = log2_ceil(w.conj_bound(e.node()) + 1);
  for (long prec = 64;; prec *= 2) {
    Walk v{t, {}, {}, {}, prec + top + 16};
    Ball b = v.value(e.node());
    if (!b.contains_zero()) return false;
    // |e| <= |center| + rad; zero when that is below 2^-gap.
    if (b.abs_upper().top() < -gap) return true;
    if (prec > 8 * (gap + top) + 4096) throw DomainError("zero test failed to converge");
  }
}

LogRat abs_bracket(const AlgExpr& e, const RootTable& t) {
  if (e.is_const()) {
    if (e.const_value() == 0) throw DomainError("modulus bracket of zero");
    return LogRat(abs_q(e.const_value()));
  }
  if (is_zero(e, t)) throw DomainError("modulus bracket of zero");
  long top = log2_ceil(Walk{t, {}, {}, {}, 0}.conj_bound(e.node()) + 1);
  for (long prec = kLogPrec + 16;; prec *= 2) {
    Ball b = eval(e, t, prec + top);
    // Full-precision modulus; the Ball accessors round to a few dozen bits.
    Dyadic n2 = b.re * b.re + b.im * b.im;
    Q lo = (sqrt_down(n2, kLogPrec + 32) - b.rad).to_q(), hi = (sqrt_up(n2, kLogPrec + 32) + b.rad).to_q();
    if (lo > 0 && (hi - lo) * Q(Z(1) << kLogPrec) <= lo) return round_out(LogRat(lo, hi));
  }
}

namespace {

// Characteristic polynomial of e over all injective reassignments of its
// roots within their factors. That set is stable under every Galois
// automorphism, so the product has rational coefficients; d e being an
// algebraic integer makes the scaled product monic integral, which
// certified numerics recover exactly.
std::optional<RatPoly> conjugate_charpoly(const AlgExpr& e, const RootTable& t, int max_count) {
  std::set<size_t> used_set = roots_used(e);
  std::vector<size_t> used(used_set.begin(), used_set.end());
  std::map<size_t, std::vector<size_t>> members;
  for (size_t i = 0; i < t.size(); ++i) members[t.factor_of(i)].push_back(i);
  Z count = 1;
  std::map<size_t, long> per;
  for (size_t i : used) ++per[t.factor_of(i)];
  for (auto& [f, k] : per) {
    if (static_cast<long>(members[f].size()) != t.factor_degree(f)) return std::nullopt;
    count *= falling(t.factor_degree(f), k);
  }
  if (count > max_count) return std::nullopt;
  long D = count.get_si();

  // Enumerate assignments: used[k] -> distinct member of its factor.
  std::vector<std::vector<size_t>> maps;
  std::vector<size_t> cur(t.size());
  std::iota(cur.begin(), cur.end(), 0);
  std::vector<char> taken(t.size(), 0);
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == used.size()) {
      maps.push_back(cur);
      return;
    }
    for (size_t m : members[t.factor_of(used[k])]) {
      if (taken[m]) continue;
      taken[m] = 1;
      cur[used[k]] = m;
      rec(k + 1);
      taken[m] = 0;
    }
  };
  rec(0);

  Walk w{t, {}, {}, {}, 0};
  Q d = w.denominator(e.node());
  Q dB = std::max(Q(1), Q(d * w.conj_bound(e.node())));
  long mag = D * (log2_ceil(dB) + 1) + 8;
  for (long prec = mag + 64; prec <= 64 * (mag + 64); prec *= 2) {
    std::vector<Ball> c{Ball::from_q(Q(1), 8)};
    for (auto& m : maps) {
      Walk v{t, {}, {}, {}, prec + 16, &m};
      Ball x = mul(v.value(e.node()), Ball::from_q(d, prec + log2_ceil(d) + 4), prec);
      std::vector<Ball> n(c.size() + 1);
      for (size_t i = 0; i < c.size(); ++i) {
        n[i + 1] = add(n[i + 1], c[i], prec);
        n[i] = sub(n[i], mul(x, c[i], prec), prec);
      }
      c = std::move(n);
    }
    RatPoly f;
    bool ok = true;
    Z dk = 1;  // d^(D - i) scaling back to e
    std::vector<Z> ints;
    for (auto& b : c) {
      if (!(b.rad.to_q() < Q(1, 4)) || abs_q(b.im.to_q()) > b.rad.to_q()) {
        ok = false;
        break;
      }
      Q re = b.re.to_q();
      Z z = floor_q(re + Q(1, 2));
      if (abs_q(re - Q(z)) + b.rad.to_q() >= Q(1, 2)) {
        ok = false;
        break;
      }
      ints.push_back(z);
    }
    if (!ok) continue;
    f.c.resize(ints.size());
    for (long i = D; i >= 0; --i) {
      f.c[i] = Q(ints[i]) / Q(dk);
      dk *= d.get_num();
    }
    f.trim();
    return f;
  }
  return std::nullopt;
}

}  // namespace

std::optional<AlgebraicNumber> materialize(const AlgExpr& e, const RootTable& t, int max_degree) {
  if (e.is_const()) return AlgebraicNumber(e.const_value());
  if (auto f = conjugate_charpoly(e, t, max_degree))
    return identify_root(*f, [&](long prec) { return eval(e, t, prec + 8); });
  std::unordered_map<const AlgExpr::Node*, AlgebraicNumber> memo;
  std::function<std::optional<AlgebraicNumber>(const AlgExpr::Node*)> go =
      [&](const AlgExpr::Node* n) -> std::optional<AlgebraicNumber> {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::optional<AlgebraicNumber> a, b, r;
    if (n->a && !(a = go(n->a.get()))) return std::nullopt;
    if (n->b && !(b = go(n->b.get()))) return std::nullopt;
    if (a && b && a->degree() * b->degree() > max_degree) return std::nullopt;
    switch (n->op) {
      case AlgExpr::Op::Const: r = AlgebraicNumber(n->value); break;
      case AlgExpr::Op::Root: r = t.root(n->index); break;
      case AlgExpr::Op::Add: r = *a + *b; break;
      case AlgExpr::Op::Sub: r = *a - *b; break;
      case AlgExpr::Op::Mul: r = *a * *b; break;
      case AlgExpr::Op::Neg: r = -*a; break;
      case AlgExpr::Op::Pow: r = alg_pow(*a, n->exp); break;
    }
    if (r->degree() > max_degree) return std::nullopt;
    memo.emplace(n, *r);
    return r;
  };
  return go(e.node());
}

}  // namespace orbit
