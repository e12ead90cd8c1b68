#include "orbit/factor.hpp"

#include <algorithm>
#include <random>

namespace orbit {

namespace modp {

void trim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

static uint64_t mulm(uint64_t a, uint64_t b, uint64_t p) { return (a * b) % p; }

uint64_t inv(uint64_t a, uint64_t p) {
  int64_t t = 0, nt = 1;
  int64_t r = static_cast<int64_t>(p), nr = static_cast<int64_t>(a % p);
  while (nr != 0) {
    int64_t q = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - q * nt);
    std::tie(r, nr) = std::make_pair(nr, r - q * nr);
  }
  if (r != 1) throw DomainError("non-invertible residue");
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

Vec from_z(const ZPoly& f, uint64_t p) {
  Vec r(f.c.size());
  Z pz(static_cast<unsigned long>(p));
  for (size_t i = 0; i < f.c.size(); ++i) {
    Z m;
    mpz_fdiv_r(m.get_mpz_t(), f.c[i].get_mpz_t(), pz.get_mpz_t());
    r[i] = m.get_ui();
  }
  trim(r);
  return r;
}

Vec mul(const Vec& a, const Vec& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulm(a[i], b[j], p)) % p;
  }
  trim(r);
  return r;
}

Vec sub(const Vec& a, const Vec& b, uint64_t p) {
  Vec r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
  trim(r);
  return r;
}

static void divmod(const Vec& a, const Vec& b, uint64_t p, Vec* q, Vec* r) {
  if (b.empty()) throw DomainError("division by zero polynomial mod p");
  Vec rr = a;
  trim(rr);
  size_t db = b.size() - 1;
  if (rr.size() < b.size()) {
    if (q) q->clear();
    if (r) *r = rr;
    return;
  }
  Vec qq(rr.size() - db, 0);
  uint64_t il = inv(b.back(), p);
  for (size_t i = rr.size(); i-- > db;) {
    if (rr[i] == 0) continue;
    uint64_t f = mulm(rr[i], il, p);
    qq[i - db] = f;
    for (size_t j = 0; j <= db; ++j) rr[i - db + j] = (rr[i - db + j] + p - mulm(f, b[j], p)) % p;
  }
  rr.resize(db);
  trim(rr);
  trim(qq);
  if (q) *q = std::move(qq);
  if (r) *r = std::move(rr);
}

Vec rem(const Vec& a, const Vec& b, uint64_t p) {
  Vec r;
  divmod(a, b, p, nullptr, &r);
  return r;
}

Vec quo(const Vec& a, const Vec& b, uint64_t p) {
  Vec q;
  divmod(a, b, p, &q, nullptr);
  return q;
}

Vec make_monic(const Vec& a, uint64_t p) {
  if (a.empty()) return a;
  uint64_t il = inv(a.back(), p);
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mulm(a[i], il, p);
  return r;
}

Vec gcd(Vec a, Vec b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Vec r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

static Vec derivative(const Vec& a, uint64_t p) {
  if (a.size() <= 1) return {};
  Vec r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = mulm(a[i], i % p, p);
  trim(r);
  return r;
}

static Vec powmod(const Vec& base, const Z& e, const Vec& f, uint64_t p) {
  Vec result{1};
  result = rem(result, f, p);
  Vec b = rem(base, f, p);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (size_t i = bits; i-- > 0;) {
    result = rem(mul(result, result, p), f, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, p), f, p);
  }
  return result;
}

// Distinct-degree factorization of a monic squarefree f.
static std::vector<std::pair<Vec, int>> ddf(Vec f, uint64_t p) {
  std::vector<std::pair<Vec, int>> out;
  Vec x{0, 1};
  Vec h = rem(x, f, p);
  Z pz(static_cast<unsigned long>(p));
  int d = 0;
  while (static_cast<int>(f.size()) - 1 >= 2 * (d + 1)) {
    ++d;
    h = powmod(h, pz, f, p);
    Vec g = gcd(sub(h, x, p), f, p);
    if (g.size() > 1) {
      out.emplace_back(g, d);
      f = quo(f, g, p);
      h = rem(h, f, p);
    }
  }
  if (f.size() > 1) out.emplace_back(f, static_cast<int>(f.size()) - 1);
  return out;
}

static void edf(const Vec& g, int d, uint64_t p, std::mt19937_64& rng, std::vector<Vec>& out) {
  int n = static_cast<int>(g.size()) - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  Z pd;
  mpz_ui_pow_ui(pd.get_mpz_t(), p, static_cast<unsigned long>(d));
  Z e = (pd - 1) / 2;
  while (true) {
    Vec a(n);
    for (auto& v : a) v = rng() % p;
    trim(a);
    if (a.size() <= 1) continue;
    Vec b;
    if (p == 2) {
      // Trace map for characteristic 2.
      Vec t = a, acc = a;
      for (int i = 1; i < d; ++i) {
        t = rem(mul(t, t, p), g, p);
        Vec sum(std::max(acc.size(), t.size()), 0);
        for (size_t k = 0; k < acc.size(); ++k) sum[k] ^= acc[k];
        for (size_t k = 0; k < t.size(); ++k) sum[k] ^= t[k];
        trim(sum);
        acc = sum;
      }
      b = acc;
    } else {
      b = sub(powmod(a, e, g, p), Vec{1}, p);
    }
    Vec h = gcd(b, g, p);
    int dh = static_cast<int>(h.size()) - 1;
    if (dh > 0 && dh < n) {
      edf(h, d, p, rng, out);
      edf(quo(g, h, p), d, p, rng, out);
      return;
    }
  }
}

std::vector<Vec> factor_squarefree(const Vec& f0, uint64_t p, uint64_t seed) {
  Vec f = make_monic(f0, p);
  std::vector<Vec> out;
  if (f.size() <= 1) return out;
  std::mt19937_64 rng(seed);
  for (auto& [g, d] : ddf(f, p)) edf(g, d, p, rng, out);
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<int> factor_degrees(const Vec& f0, uint64_t p) {
  std::vector<int> degs;
  for (auto& [g, d] : ddf(make_monic(f0, p), p)) {
    int cnt = (static_cast<int>(g.size()) - 1) / d;
    for (int i = 0; i < cnt; ++i) degs.push_back(d);
  }
  return degs;
}

bool squarefree(const Vec& f, uint64_t p) {
  Vec g = gcd(f, derivative(f, p), p);
  return g.size() <= 1;
}

}  // namespace modp

namespace {

using modp::Vec;

ZPoly reduce_mod(const ZPoly& f, const Z& m) {
  std::vector<Z> r(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) mpz_fdiv_r(r[i].get_mpz_t(), f.c[i].get_mpz_t(), m.get_mpz_t());
  return ZPoly(std::move(r));
}

ZPoly symmetric_mod(const ZPoly& f, const Z& m) {
  ZPoly r = reduce_mod(f, m);
  Z half = m / 2;
  for (auto& v : r.c)
    if (v > half) v -= m;
  r.trim();
  return r;
}

ZPoly lift_vec(const Vec& v) {
  std::vector<Z> r;
  r.reserve(v.size());
  for (auto x : v) r.emplace_back(static_cast<unsigned long>(x));
  return ZPoly(std::move(r));
}

// Extended Euclid mod p: s*a + t*b = 1.
void ext_gcd(const Vec& a, const Vec& b, uint64_t p, Vec& s, Vec& t) {
  Vec r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    Vec q, r;
    q = modp::quo(r0, r1, p);
    r = modp::sub(r0, modp::mul(q, r1, p), p);
    Vec ns = modp::sub(s0, modp::mul(q, s1, p), p);
    Vec nt = modp::sub(t0, modp::mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(ns);
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  if (r0.size() != 1) throw DomainError("factors not coprime mod p");
  uint64_t il = modp::inv(r0[0], p);
  s = modp::mul(s0, Vec{il}, p);
  t = modp::mul(t0, Vec{il}, p);
}

// Given monic F (mod m = p^k) and monic g, h mod p with F = g h mod p, lift to
// monic G, H mod m.
void hensel_two(const ZPoly& F, const Vec& g, const Vec& h, uint64_t p, const Z& m, ZPoly& G, ZPoly& H) {
  Vec s, t;
  ext_gcd(g, h, p, s, t);
  G = lift_vec(g);
  H = lift_vec(h);
  Z pz(static_cast<unsigned long>(p));
  Z pk = pz;
  while (pk < m) {
    ZPoly diff = F - G * H;
    std::vector<Z> ec(diff.c.size());
    for (size_t i = 0; i < diff.c.size(); ++i) {
      Z q;
      mpz_divexact(q.get_mpz_t(), diff.c[i].get_mpz_t(), pk.get_mpz_t());
      ec[i] = q;
    }
    Vec e = modp::from_z(ZPoly(std::move(ec)), p);
    Vec dg = modp::rem(modp::mul(e, t, p), g, p);
    Vec dh = modp::quo(modp::sub(e, modp::mul(h, dg, p), p), g, p);
    G = G + pk * lift_vec(dg);
    H = H + pk * lift_vec(dh);
    pk *= pz;
  }
  G = reduce_mod(G, m);
  H = reduce_mod(H, m);
}

ZPoly product_mod_p(const std::vector<Vec>& fs, size_t lo, size_t hi, uint64_t p, Vec* out) {
  Vec acc{1};
  for (size_t i = lo; i < hi; ++i) acc = modp::mul(acc, fs[i], p);
  *out = acc;
  return lift_vec(acc);
}

void hensel_tree(const ZPoly& F, const std::vector<Vec>& fs, size_t lo, size_t hi, uint64_t p, const Z& m,
                 std::vector<ZPoly>& out) {
  if (hi - lo == 1) {
    out.push_back(F);
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  Vec g, h;
  product_mod_p(fs, lo, mid, p, &g);
  product_mod_p(fs, mid, hi, p, &h);
  ZPoly G, H;
  hensel_two(F, g, h, p, m, G, H);
  hensel_tree(G, fs, lo, mid, p, m, out);
  hensel_tree(H, fs, mid, hi, p, m, out);
}

const uint64_t kPrimes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                            79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163,
                            167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
                            257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313, 317, 331, 337, 347, 349,
                            353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421, 431, 433, 439, 443,
                            449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541};

bool next_subset(std::vector<size_t>& idx, size_t n) {
  size_t k = idx.size();
  for (size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<ZPoly> zassenhaus(const ZPoly& f) {
  int n = f.degree();
  // Prime selection: fewest modular factors among several admissible primes.
  uint64_t best_p = 0;
  size_t best_count = SIZE_MAX;
  int tried = 0;
  for (uint64_t p : kPrimes) {
    Z pz(static_cast<unsigned long>(p));
    if (mpz_divisible_p(f.lc().get_mpz_t(), pz.get_mpz_t())) continue;
    Vec fp = modp::from_z(f, p);
    if (!modp::squarefree(fp, p)) continue;
    size_t cnt = modp::factor_degrees(fp, p).size();
    if (cnt < best_count) {
      best_count = cnt;
      best_p = p;
    }
    if (cnt == 1) break;
    if (++tried >= 6) break;
  }
  if (best_p == 0) throw DomainError("no admissible prime for factorization");
  if (best_count == 1) return {f};
  uint64_t p = best_p;
  std::vector<Vec> mf = modp::factor_squarefree(modp::from_z(f, p), p);

  // Factor coefficient bound: lc * 2^n * ||f||_2.
  Z norm = 0;
  mpz_sqrt(norm.get_mpz_t(), norm2_sq(f).get_mpz_t());
  norm += 1;
  Z bound = 2 * abs(f.lc()) * (Z(1) << n) * norm + 1;
  Z pz(static_cast<unsigned long>(p));
  Z m = pz;
  while (m <= bound) m *= pz;

  Z lc = f.lc();
  Z linv;
  mpz_invert(linv.get_mpz_t(), lc.get_mpz_t(), m.get_mpz_t());
  ZPoly F = reduce_mod(linv * f, m);
  std::vector<ZPoly> lifted;
  hensel_tree(F, mf, 0, mf.size(), p, m, lifted);

  std::vector<ZPoly> result;
  ZPoly cur = f;
  std::vector<ZPoly> pool = lifted;
  size_t s = 1;
  while (2 * s <= pool.size()) {
    bool found = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    do {
      Z l = cur.lc();
      // Constant-term screen.
      if (cur.c[0] != 0) {
        Z c0 = l;
        for (size_t i : idx) c0 = (c0 * pool[i].c[0]) % m;
        if (c0 < 0) c0 += m;
        if (c0 > m / 2) c0 -= m;
        if (c0 == 0 || !mpz_divisible_p(Z(l * cur.c[0]).get_mpz_t(), c0.get_mpz_t())) continue;
      }
      ZPoly cand = ZPoly::constant(l);
      for (size_t i : idx) cand = reduce_mod(cand * pool[i], m);
      cand = primitive_part(symmetric_mod(cand, m));
      ZPoly q;
      if (cand.degree() > 0 && divides(cand, cur, &q)) {
        result.push_back(cand);
        cur = primitive_part(q);
        std::vector<ZPoly> rest;
        for (size_t i = 0, j = 0; i < pool.size(); ++i) {
          if (j < idx.size() && idx[j] == i) {
            ++j;
            continue;
          }
          rest.push_back(pool[i]);
        }
        pool = std::move(rest);
        found = true;
        break;
      }
    } while (next_subset(idx, pool.size()));
    if (!found) ++s;
  }
  if (cur.degree() > 0) result.push_back(primitive_part(cur));
  return result;
}

}  // namespace

std::vector<ZPoly> factor_squarefree_integer(const ZPoly& f0) {
  ZPoly f = primitive_part(f0);
  if (f.degree() <= 0) return {};
  std::vector<ZPoly> out;
  if (f.c[0] == 0) {
    // x divides f; strip it (f squarefree so exactly once).
    out.push_back(ZPoly({Z(0), Z(1)}));
    f = primitive_part(ZPoly(std::vector<Z>(f.c.begin() + 1, f.c.end())));
  }
  if (f.degree() == 1) {
    out.push_back(f);
  } else if (f.degree() > 1) {
    for (auto& g : zassenhaus(f)) out.push_back(g);
  }
  return out;
}

std::vector<std::pair<RatPoly, int>> factor_rational_poly(const RatPoly& p) {
  if (p.is_zero()) throw InvalidInput("factorization of the zero polynomial");
  std::vector<std::pair<RatPoly, int>> out;
  for (auto& [sf, mult] : squarefree_decomposition(p)) {
    for (auto& g : factor_squarefree_integer(primitive_integer(sf))) out.emplace_back(monic(to_rat(g)), mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    if (a.first.c != b.first.c) return a.first.c < b.first.c;
    return a.second < b.second;
  });
  return out;
}

bool is_irreducible(const RatPoly& p) {
  if (p.degree() < 1) return false;
  auto fs = factor_rational_poly(p);
  return fs.size() == 1 && fs[0].second == 1;
}

}  // namespace orbit
