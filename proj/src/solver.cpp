#include "orbit/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "orbit/algexpr.hpp"
#include "orbit/circuit.hpp"
#include "orbit/json_io.hpp"

namespace orbit {

namespace {

using u64 = uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }
u64 to_mod(const Z& z, u64 p) { return mpz_fdiv_ui(z.get_mpz_t(), p); }

std::vector<Z> integral(const RatVec& v) {
  Z d = 1;
  for (auto& q : v) d = lcm(d, q.get_den());
  std::vector<Z> out;
  for (auto& q : v) out.push_back(Q(q * Q(d)).get_num());
  return out;
}

// x^n mod m against W = span{p_i}, in coefficient coordinates.
struct PowerSpace {
  size_t K = 0;
  RatPoly m;
  std::vector<Z> mz;
  Subspace W;
  std::vector<std::vector<Z>> ann;  // integral functionals cutting out W

  explicit PowerSpace(const MatrixPowerInstance& mp) {
    K = mp.M.rows;
    m = charpoly(mp.M);
    for (auto& c : m.c) {
      if (!is_integer(c)) throw std::logic_error("reduced matrix is not integral");
      mz.push_back(c.get_num());
    }
    std::vector<RatVec> vs;
    for (auto& p : mp.polys) vs.push_back(coeffs(p % m));
    W = Subspace(K, vs);
    if (!vs.empty()) {
      RatMatrix P(vs.size(), K);
      for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = 0; j < K; ++j) P(i, j) = vs[i][j];
      for (auto& v : nullspace(P)) ann.push_back(integral(v));
    } else {
      for (size_t j = 0; j < K; ++j) {
        std::vector<Z> e(K, Z(0));
        e[j] = 1;
        ann.push_back(e);
      }
    }
  }

  RatVec coeffs(const RatPoly& r) const {
    RatVec v(K, Q(0));
    for (size_t i = 0; i < r.c.size() && i < K; ++i) v[i] = r.c[i];
    return v;
  }
  bool annihilated(const RatPoly& r) const {
    for (auto& l : ann) {
      Q acc = 0;
      for (size_t i = 0; i < r.c.size() && i < K; ++i) acc += Q(l[i]) * r.c[i];
      if (acc != 0) return false;
    }
    return true;
  }
  bool member_at(const Z& n) const { return annihilated(powmod_x(n, m)); }
};

// x^n mod (m, p) stepped one exponent at a time.
struct ModStepper {
  u64 p = 0;
  std::vector<u64> mc, s;
  std::vector<std::vector<u64>> ann;

  ModStepper(const PowerSpace& ps, u64 prime) : p(prime) {
    for (size_t i = 0; i < ps.K; ++i) mc.push_back(to_mod(ps.mz[i], p));
    for (auto& l : ps.ann) {
      std::vector<u64> v;
      for (auto& z : l) v.push_back(to_mod(z, p));
      ann.push_back(v);
    }
    s.assign(ps.K, 0);
    if (ps.K) s[0] = 1 % p;
  }
  void step() {
    size_t K = s.size();
    u64 top = s[K - 1];
    for (size_t i = K - 1; i > 0; --i) s[i] = (s[i - 1] + p - mulmod(top, mc[i], p)) % p;
    s[0] = (p - mulmod(top, mc[0], p)) % p;
  }
  bool zero() const {
    for (auto& l : ann) {
      u64 acc = 0;
      for (size_t i = 0; i < s.size(); ++i) acc = (acc + mulmod(l[i], s[i], p)) % p;
      if (acc) return false;
    }
    return true;
  }
};

// Every solution n >= pre satisfies n mod P in allowed.
struct Sieve {
  unsigned long P = 1;
  unsigned long pre = 0;
  std::vector<char> allowed{1};
  bool empty() const { return std::find(allowed.begin(), allowed.end(), 1) == allowed.end(); }
  bool permits(unsigned long n) const { return n < pre || allowed[n % P]; }
};

Sieve modular_sieve(const PowerSpace& ps, std::vector<std::string>& trace) {
  const unsigned long kPeriodCap = 100000, kModCap = 200000;
  static const u64 primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  Sieve sv;
  int used = 0;
  for (u64 p : primes) {
    ModStepper st(ps, p);
    std::unordered_map<std::string, unsigned long> seen;
    std::vector<char> zeros;
    unsigned long rho = 0, period = 0;
    bool found = false;
    for (unsigned long n = 0; n <= kPeriodCap; ++n) {
      std::string key(reinterpret_cast<const char*>(st.s.data()), st.s.size() * sizeof(u64));
      auto [it, fresh] = seen.emplace(std::move(key), n);
      if (!fresh) {
        rho = it->second;
        period = n - rho;
        found = true;
        break;
      }
      zeros.push_back(st.zero());
      st.step();
    }
    if (!found) continue;
    unsigned long P2 = std::lcm(sv.P, period);
    if (P2 > kModCap) continue;
    std::vector<char> next(P2, 0);
    for (unsigned long a = 0; a < P2; ++a) {
      if (!sv.allowed[a % sv.P]) continue;
      // The state sequence is periodic from rho on; n = a mod P2 with n >= rho.
      unsigned long off = (a + period * ((rho / period) + 1) - rho) % period;
      if (zeros[rho + off]) next[a] = 1;
    }
    sv.P = P2;
    sv.allowed = std::move(next);
    sv.pre = std::max(sv.pre, rho);
    ++used;
    if (sv.empty()) break;
  }
  std::ostringstream os;
  os << "sieve:primes=" << used << ",P=" << sv.P << ",pre=" << sv.pre << (sv.empty() ? ",empty" : "");
  trace.push_back(os.str());
  return sv;
}

// Candidate check: one-sided modular circuit screening when enabled, exact
// confirmation always.
bool check_candidate(const MatrixPowerInstance& mp, const PowerSpace& ps, const Z& n, const SolverConfig& cfg) {
  if (n < 0) return false;
  if (cfg.use_prob_membership && n >= 64 && n.fits_ulong_p() && ps.K <= 12) {
    std::vector<RatVec> basis;
    for (auto& v : ps.W.basis) basis.push_back(v);
    RatVec e0(ps.K, Q(0));
    e0[0] = 1;
    SLP slp = power_membership_slp(mp.M, e0, basis, n.get_ui());
    if (!prob_zero_test(slp, cfg.error_budget, cfg.seed).all_zero) return false;
  }
  return ps.member_at(n);
}

Verdict yes_witness(unsigned long n) {
  Verdict v;
  v.result = Verdict::Result::Yes;
  v.witness = n;
  return v;
}

Verdict no_verdict(std::string why) {
  Verdict v;
  v.result = Verdict::Result::No;
  v.reason = std::move(why);
  return v;
}

// ---------------------------------------------------------------------------
// Residue and tuple engine for two and three target polynomials.

struct ResidueInfo {
  bool full = false;
  std::optional<Z> limit;              // sporadic solutions lie below
  std::optional<std::set<Z>> only;     // and among these
  std::optional<Q> log2;               // looser bound when limit is absent
};

AlgExpr det(const std::vector<std::vector<AlgExpr>>& a) {
  size_t n = a.size();
  if (n == 0) return AlgExpr(Q(1));
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  AlgExpr acc(Q(0));
  for (size_t j = 0; j < n; ++j) {
    std::vector<std::vector<AlgExpr>> sub;
    for (size_t i = 1; i < n; ++i) {
      std::vector<AlgExpr> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      sub.push_back(row);
    }
    AlgExpr t = a[0][j] * det(sub);
    acc = j % 2 ? acc - t : acc + t;
  }
  return acc;
}

void subsets(size_t n, size_t k, size_t start, std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out,
             size_t cap) {
  if (out.size() >= cap) return;
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out, cap);
    cur.pop_back();
  }
}

// Coefficients of F_j(r + L k) as a polynomial in k.
std::vector<Z> falling_in_k(long r, long L, int j) {
  std::vector<Z> p{Z(1)};
  for (int i = 0; i < j; ++i) {
    std::vector<Z> q(p.size() + 1, Z(0));
    for (size_t d = 0; d < p.size(); ++d) {
      q[d] += p[d] * Z(r - i);
      q[d + 1] += p[d] * Z(L);
    }
    p = q;
  }
  return p;
}

struct Engine {
  const MatrixPowerInstance& mp;
  const SolverConfig& cfg;
  std::string tag;
  PowerSpace ps;
  size_t s;
  Verdict out;

  RootTable table;
  std::vector<int> mult;
  std::vector<size_t> cls;
  std::vector<AlgebraicNumber> rep;  // one member per class
  std::vector<int> rank;             // 0 = largest modulus
  std::vector<LogRat> lnmod;
  long L = 1;
  long c0 = 1;

  struct Row {
    size_t root;
    int j;
  };
  std::vector<Row> rows;
  std::vector<std::vector<AlgExpr>> rhs;

  struct Tuple {
    std::vector<size_t> rows;
    std::vector<AlgExpr> c;
  };
  std::vector<Tuple> tuples;
  bool tuples_built = false;

  Engine(const MatrixPowerInstance& m, const SolverConfig& c, std::string t)
      : mp(m), cfg(c), tag(std::move(t)), ps(m), s(m.polys.size()) {}

  void trace(const std::string& s) { out.case_trace.push_back(tag + "." + s); }

  void setup_spectrum() {
    std::vector<AlgebraicNumber> roots;
    for (auto& [a, mu] : mp.eigen) {
      roots.push_back(a);
      mult.push_back(mu);
      c0 = std::max<long>(c0, mu);
    }
    table = RootTable(roots);
    ClassDecomposition cd = class_decomposition(mp.eigen);
    L = cd.L;
    cls.assign(roots.size(), 0);
    for (size_t i = 0; i < roots.size(); ++i) {
      bool hit = false;
      for (size_t k = 0; k < cd.classes.size() && !hit; ++k)
        for (auto& [mem, mu] : cd.classes[k].members)
          if (alg_equals(mem, roots[i])) {
            cls[i] = k;
            hit = true;
            break;
          }
      if (!hit) throw std::logic_error("eigenvalue missing from its class decomposition");
    }
    for (auto& c : cd.classes) rep.push_back(c.members[0].first);
    std::vector<size_t> order(rep.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return abs_compare(rep[a], rep[b]) > 0; });
    rank.assign(rep.size(), 0);
    for (size_t i = 1; i < order.size(); ++i)
      rank[order[i]] = rank[order[i - 1]] + (abs_compare(rep[order[i]], rep[order[i - 1]]) != 0 ? 1 : 0);
    for (auto& a : rep) lnmod.push_back(ln_abs(a));
    std::ostringstream os;
    os << "classes=" << rep.size() << ",L=" << L;
    trace(os.str());
  }

  void build_tuples() {
    tuples_built = true;
    for (size_t i = 0; i < table.size(); ++i) {
      std::vector<RatPoly> ders = mp.polys;
      for (int j = 0; j < mult[i]; ++j) {
        rows.push_back({i, j});
        std::vector<AlgExpr> r;
        for (auto& p : ders) r.push_back(eval_at_root(p, i));
        rhs.push_back(r);
        for (auto& p : ders) p = p.derivative();
      }
    }
    std::vector<std::vector<size_t>> subs;
    std::vector<size_t> cur;
    subsets(rows.size(), s + 1, 0, cur, subs, 400);
    for (auto& S : subs) {
      Tuple t;
      t.rows = S;
      bool any = false;
      for (size_t e = 0; e < S.size(); ++e) {
        std::vector<std::vector<AlgExpr>> minor;
        for (size_t f = 0; f < S.size(); ++f)
          if (f != e) minor.push_back(rhs[S[f]]);
        AlgExpr d = det(minor);
        if (e % 2) d = -d;
        if (is_zero(d, table)) d = AlgExpr(Q(0));
        else any = true;
        t.c.push_back(d);
      }
      if (any) tuples.push_back(std::move(t));
    }
  }

  bool residue_full(long r) {
    RatPoly X = powmod_x(Z(L), ps.m);
    RatPoly st = powmod_x(Z(r), ps.m);
    for (size_t k = 0; k < ps.K; ++k) {
      if (!ps.annihilated(st)) return false;
      st = (st * X) % ps.m;
    }
    return true;
  }

  // Per class polynomial in k: coefficient expressions, lowest degree first.
  std::map<size_t, std::vector<AlgExpr>> class_polys(const Tuple& t, long r) {
    std::map<size_t, std::vector<AlgExpr>> q;
    for (size_t e = 0; e < t.rows.size(); ++e) {
      if (t.c[e].is_const() && t.c[e].const_value() == 0) continue;
      const Row& row = rows[t.rows[e]];
      AlgExpr base = t.c[e] * pow(AlgExpr::root(row.root), static_cast<unsigned long>(r - row.j));
      auto f = falling_in_k(r, L, row.j);
      auto& v = q[cls[row.root]];
      if (v.size() < f.size()) v.resize(f.size(), AlgExpr(Q(0)));
      for (size_t d = 0; d < f.size(); ++d) v[d] = v[d] + base * AlgExpr(Q(f[d]));
    }
    return q;
  }

  struct Shape {
    size_t klass;
    int degree;  // of the nonzero class polynomial
    std::vector<AlgExpr> coeffs;
  };

  std::vector<Shape> shapes(const std::map<size_t, std::vector<AlgExpr>>& q) {
    std::vector<Shape> out;
    for (auto& [k, v] : q) {
      int deg = -1;
      std::vector<AlgExpr> cs = v;
      for (size_t d = 0; d < v.size(); ++d) {
        if (is_zero(v[d], table)) cs[d] = AlgExpr(Q(0));
        else deg = static_cast<int>(d);
      }
      if (deg < 0) continue;
      cs.resize(deg + 1);
      out.push_back({k, deg, cs});
    }
    return out;
  }

  LogRat log_gap(size_t top, size_t other) {
    LogRat g = LogRat(Q(L)) * (lnmod[top] - lnmod[other]);
    if (g.positive()) return g;
    g = LogRat(Q(L)) * (ln_abs(rep[top], 1024) - ln_abs(rep[other], 1024));
    if (!g.positive()) throw DomainError("moduli too close to separate");
    return g;
  }

  // Every zero k of the tuple sum lies below the returned value.
  std::optional<Z> dominance(const std::vector<Shape>& sh) {
    int best = INT32_MAX;
    for (auto& x : sh) best = std::min(best, rank[x.klass]);
    const Shape* top = nullptr;
    for (auto& x : sh)
      if (rank[x.klass] == best) {
        if (top) return std::nullopt;
        top = &x;
      }
    LogRat q1 = abs_bracket(top->coeffs[top->degree], table);
    Q T1 = 0;
    for (int d = 0; d < top->degree; ++d) T1 += abs_upper(top->coeffs[d], table);
    Z k1 = ceil_q(Q(2) * T1 / q1.lo);
    Q H = 0;
    int dmax = 0;
    std::optional<LogRat> rho;
    for (auto& x : sh) {
      if (&x == top) continue;
      for (auto& c : x.coeffs) H += abs_upper(c, table);
      dmax = std::max(dmax, x.degree);
      LogRat g = log_gap(top->klass, x.klass);
      rho = rho ? lr_min(*rho, g) : g;
    }
    Z K0 = 1;
    if (rho && H > 0) {
      LogRat k = ln_bracket(Q(2) * H) - ln_bracket(q1.lo);
      LogRat c1(Q(std::max(0, dmax - top->degree)));
      K0 = exceed_threshold(*rho, k, c1);
    }
    return std::max({K0, k1, Z(1)});
  }

  // Depth-two to depth-four lemmas on exact values, when degrees stay small.
  BoundResult lemma(const std::vector<Shape>& sh, long r) {
    const int kMaxDeg = 12;
    std::vector<AlgebraicNumber> beta;
    std::vector<std::vector<AlgebraicNumber>> co;
    int depth = 0;
    for (auto& x : sh) {
      depth += x.degree + 1;
      if (depth > 4) return BoundResult::unknown("depth above four");
    }
    for (auto& x : sh) {
      beta.push_back(alg_pow(rep[x.klass], static_cast<unsigned long>(L)));
      std::vector<AlgebraicNumber> cs;
      for (auto& c : x.coeffs) {
        auto v = materialize(c, table, kMaxDeg);
        if (!v) return BoundResult::unknown("coefficient degree too large");
        cs.push_back(*v);
      }
      co.push_back(cs);
    }
    (void)r;
    try {
      if (sh.size() == 2 && depth == 2) {
        trace("power");
        return power_solve(beta[0] / beta[1], -co[1][0] / co[0][0]);
      }
      if (sh.size() == 3 && depth == 3) {
        trace("skolem3");
        return skolem3(co[0][0], co[1][0], co[2][0], beta[0], beta[1], beta[2]);
      }
      if (sh.size() == 2 && depth == 3) {
        size_t a = sh[0].degree == 1 ? 0 : 1, b = 1 - a;
        trace("skolem3-repeated");
        return skolem3_repeated(co[a][0], co[a][1], co[b][0], beta[a], beta[b]);
      }
      if (depth == 4) {
        std::vector<size_t> order(sh.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) { return sh[x].degree > sh[y].degree; });
        std::vector<int> pattern;
        std::vector<AlgebraicNumber> cs, rs;
        for (size_t i : order) {
          pattern.push_back(sh[i].degree + 1);
          for (auto& c : co[i]) cs.push_back(c);
          rs.push_back(beta[i]);
        }
        trace("skolem4");
        return skolem4(pattern, cs, rs);
      }
    } catch (const DomainError& e) {
      return BoundResult::unknown(e.what());
    }
    return BoundResult::unknown("no lemma for this shape");
  }

  static void apply(ResidueInfo& info, const BoundResult& b, long r, long L) {
    switch (b.kind) {
      case BoundResult::Kind::NoSolution:
        info.limit = Z(r);
        info.only = std::set<Z>{};
        break;
      case BoundResult::Kind::Candidates: {
        std::set<Z> ns;
        for (auto& k : b.candidates) ns.insert(Z(r) + Z(L) * k);
        if (info.only) {
          std::set<Z> keep;
          for (auto& n : ns)
            if (info.only->count(n)) keep.insert(n);
          ns = keep;
        }
        info.only = ns;
        Z lim = ns.empty() ? Z(r) : *ns.rbegin() + 1;
        if (!info.limit || lim < *info.limit) info.limit = lim;
        break;
      }
      case BoundResult::Kind::SearchBound:
        if (b.exact) {
          Z lim = Z(r) + Z(L) * *b.exact;
          if (!info.limit || lim < *info.limit) info.limit = lim;
        } else {
          Q l2 = b.log2_bound + log2_upper(Z(L)) + 1;
          if (!info.log2 || l2 < *info.log2) info.log2 = l2;
        }
        break;
      default:
        break;
    }
  }

  Verdict run() {
    std::ostringstream head;
    head << "K=" << ps.K << ",s=" << s;
    out.case_trace.push_back(tag + "." + head.str());
    Sieve sv = modular_sieve(ps, out.case_trace);
    if (sv.empty()) trace("modular.sieve-empty");

    bool analysed = false;
    std::vector<ResidueInfo> res;
    bool resolved = true;
    if (!sv.empty()) {
      setup_spectrum();
      if (static_cast<unsigned long>(L) <= cfg.residue_work_cap) {
        analysed = true;
        res.resize(L);
        unsigned long work = 0;
        unsigned long g = std::gcd(static_cast<unsigned long>(L), sv.P);
        std::vector<char> seen_mod_g(g, 0);
        for (unsigned long a = 0; a < sv.P; ++a)
          if (sv.allowed[a]) seen_mod_g[a % g] = 1;
        long full = 0, sieved = 0, dom = 0, lem = 0, open = 0;
        for (long i = 0; i < L; ++i) {
          long r = c0 + i;
          ResidueInfo& info = res[i];
          if (residue_full(r)) {
            info.full = true;
            ++full;
            continue;
          }
          if (!seen_mod_g[r % g]) {
            info.limit = std::max<Z>(Z(r), Z(sv.pre));
            ++sieved;
            continue;
          }
          if (!tuples_built) build_tuples();
          std::vector<std::vector<Shape>> pending;
          for (auto& t : tuples) {
            if (++work > cfg.residue_work_cap) break;
            auto sh = shapes(class_polys(t, r));
            if (sh.empty()) continue;
            try {
              if (auto kb = dominance(sh)) {
                Z lim = Z(r) + Z(L) * *kb;
                out.bounds.push_back({tag + ".r=" + std::to_string(r) + ".dominant",
                                      BoundResult::search_bound(lim)});
                if (!info.limit || lim < *info.limit) info.limit = lim;
                if (lim <= Z(cfg.search_cap)) break;
                continue;
              }
            } catch (const DomainError&) {
            }
            pending.push_back(sh);
          }
          if (info.limit) {
            ++dom;
            continue;
          }
          for (auto& sh : pending) {
            BoundResult b = lemma(sh, r);
            out.bounds.push_back({tag + ".r=" + std::to_string(r) + ".lemma", b});
            apply(info, b, r, L);
            if (info.limit) break;
          }
          if (info.limit) ++lem;
          else {
            ++open;
            resolved = false;
          }
        }
        std::ostringstream os;
        os << "residues:full=" << full << ",sieved=" << sieved << ",dominant=" << dom << ",lemma=" << lem
           << ",open=" << open;
        trace(os.str());
      } else {
        trace("residue-cap");
      }
    }
    if (!sv.empty() && !analysed) resolved = false;

    // Search range that settles every resolved case.
    Z need = Z(c0) + Z(L) + 1;
    need = std::max(need, Z(Z(sv.pre) + 1));
    bool any_full = false;
    for (auto& info : res) {
      if (info.full) any_full = true;
      if (info.limit) need = std::max(need, *info.limit);
    }
    bool complete = resolved && need <= Z(cfg.search_cap);
    unsigned long S = complete ? need.get_ui() : cfg.search_cap;

    auto residue_of = [&](unsigned long n) -> const ResidueInfo* {
      if (!analysed || n < static_cast<unsigned long>(c0)) return nullptr;
      return &res[(n - c0) % L];
    };
    std::mt19937_64 rng(cfg.seed);
    ModStepper a(ps, random_word_prime(rng)), b(ps, random_word_prime(rng));
    std::vector<unsigned long> sols;
    bool scan_all = complete && any_full;
    unsigned long n = 0;
    for (; n < S; ++n) {
      const ResidueInfo* info = residue_of(n);
      bool sol = false;
      if (info && info->full) {
        sol = true;
      } else {
        bool admissible = sv.permits(n);
        if (admissible && info) {
          if (info->limit && Z(n) >= *info->limit) admissible = false;
          if (info->only && !info->only->count(Z(n))) admissible = false;
        }
        if (admissible && ((a.zero() && b.zero()) || n < 64)) sol = ps.member_at(Z(n));
      }
      if (sol) {
        sols.push_back(n);
        if (!scan_all) {
          ++n;
          break;
        }
      }
      a.step();
      b.step();
    }
    out.searched_to = n;

    if (!sols.empty()) {
      out.result = Verdict::Result::Yes;
      out.witness = sols.front();
      if (scan_all && n == S) {
        if (auto c = progression(sols, res, S)) {
          out.congruence = c;
          trace("congruence");
        }
      }
      return out;
    }
    if (sv.empty() || complete) {
      out.result = Verdict::Result::No;
      out.reason = sv.empty() ? "modular obstruction" : "every residue bounded and searched";
      return out;
    }
    out.result = Verdict::Result::Unknown;
    out.reason = analysed ? "a residue class has no usable bound" : "residue enumeration over the work cap";
    if (analysed) {
      std::optional<Q> worst = Q(0);
      for (auto& info : res) {
        if (info.full) continue;
        if (info.limit) worst = std::max(*worst, log2_upper(*info.limit));
        else if (info.log2) worst = std::max(*worst, *info.log2);
        else {
          worst.reset();
          break;
        }
      }
      out.log2_bound = worst;
    }
    return out;
  }

  // Complete solution set as one progression, when it is one. The scan
  // covered [0, S) and every sporadic solution lies below S.
  std::optional<std::pair<unsigned long, unsigned long>> progression(const std::vector<unsigned long>& sols,
                                                                    const std::vector<ResidueInfo>& res,
                                                                    unsigned long S) {
    unsigned long t = sols.front();
    unsigned long step = 0;
    for (long i = 0; i < L; ++i)
      if (res[i].full) step = std::gcd(step, static_cast<unsigned long>(c0 + i) + L - (t % L));
    step = std::gcd(step, static_cast<unsigned long>(L));
    if (step == 0) return std::nullopt;
    for (long i = 0; i < L; ++i) {
      bool in = (static_cast<unsigned long>(c0 + i) + L - t % step) % step == 0;
      if (in != res[i].full) return std::nullopt;
    }
    std::vector<unsigned long> expect;
    for (unsigned long m = t; m < S; m += step) expect.push_back(m);
    if (expect != sols) return std::nullopt;
    return std::make_pair(t, step);
  }
};

// Integral, invertible and companion shaped (M e_i = e_{i+1}): what the
// polynomial-form engine assumes.
bool power_form_ready(const MatrixPowerInstance& mp) {
  const RatMatrix& M = mp.M;
  if (!M.square() || M.rows == 0) return false;
  for (auto& q : M.a)
    if (!is_integer(q)) return false;
  for (size_t j = 0; j + 1 < M.cols; ++j)
    for (size_t i = 0; i < M.rows; ++i)
      if (M(i, j) != (i == j + 1 ? 1 : 0)) return false;
  return M(0, M.cols - 1) != 0;
}

}  // namespace

std::string result_name(Verdict::Result r) {
  switch (r) {
    case Verdict::Result::Yes: return "yes";
    case Verdict::Result::No: return "no";
    case Verdict::Result::Unknown: return "unknown";
  }
  return "unknown";
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["result"] = result_name(v.result);
  j["witness"] = v.witness ? nlohmann::json(*v.witness) : nlohmann::json(nullptr);
  j["congruence"] = v.congruence ? nlohmann::json{v.congruence->first, v.congruence->second} : nlohmann::json(nullptr);
  j["log2_bound"] = v.log2_bound ? nlohmann::json(to_string(*v.log2_bound)) : nlohmann::json(nullptr);
  j["searched_to"] = v.searched_to;
  j["case_trace"] = v.case_trace;
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

std::optional<std::pair<Z, Z>> crt_merge(const std::vector<std::pair<Z, Z>>& congruences) {
  Z t = 0, m = 1;
  for (auto [a, n] : congruences) {
    if (n <= 0) throw InvalidInput("congruence modulus must be positive");
    a = ((a % n) + n) % n;
    Z g = gcd(m, n);
    Z diff = a - t;
    if (diff % g != 0) return std::nullopt;
    // t + m u = a mod n, u = (diff / g) * inv(m / g) mod (n / g).
    Z ng = n / g, mg = m / g, inv;
    mpz_invert(inv.get_mpz_t(), Z(((mg % ng) + ng) % ng).get_mpz_t(), ng.get_mpz_t());
    if (ng == 1) inv = 0;
    Z u = ((diff / g) % ng * inv) % ng;
    if (u < 0) u += ng;
    t = t + m * u;
    m = m * ng;
    t = ((t % m) + m) % m;
  }
  return std::make_pair(t, m);
}

bool power_member(const MatrixPowerInstance& mp, unsigned long n) { return PowerSpace(mp).member_at(Z(n)); }

Verdict solve_1d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg) {
  if (mp.polys.size() != 1) throw InvalidInput("solve_1d needs exactly one target polynomial");
  PowerSpace ps(mp);
  std::vector<std::string> trace;
  auto finish = [&](Verdict v) {
    v.case_trace.insert(v.case_trace.begin(), trace.begin(), trace.end());
    return v;
  };
  int c = 1;
  for (auto& [a, mu] : mp.eigen) c = std::max(c, mu);
  trace.push_back("one-target.c=" + std::to_string(c));

  // Equations per root: index into sys.equations for deriv 0 and 1.
  struct RootEqs {
    const Equation* e0 = nullptr;
    const Equation* e1 = nullptr;
    int mul = 0;
  };
  std::vector<RootEqs> roots;
  for (auto& [a, mu] : mp.eigen) {
    RootEqs r;
    r.mul = mu;
    for (auto& e : sys.equations)
      if (alg_equals(e.root, a)) {
        if (e.deriv == 0) r.e0 = &e;
        if (e.deriv == 1) r.e1 = &e;
      }
    if (!r.e0) throw InvalidInput("system lacks an equation for an eigenvalue");
    roots.push_back(r);
  }

  std::optional<unsigned long> small;
  if (c > 1) {
    for (int n = 0; n < c && !small; ++n)
      if (ps.member_at(Z(n))) small = n;
    trace.push_back("one-target.direct");
  }

  // A vanishing right-hand side leaves only n below the derivative order.
  for (auto& e : sys.equations)
    if (e.rhs_coeffs[0].is_zero()) {
      trace.push_back("one-target.zero-rhs");
      for (int n = 0; n <= e.deriv && !small; ++n)
        if (ps.member_at(Z(n))) small = n;
      if (small) return finish(yes_witness(*small));
      Verdict v = no_verdict("an equation has a zero right-hand side");
      v.searched_to = e.deriv + 1;
      return finish(v);
    }

  if (c > 1) {
    // Repeated root: dividing its first two equations pins n.
    for (auto& r : roots) {
      if (r.mul < 2) continue;
      trace.push_back("one-target.pinned");
      AlgebraicNumber val = r.e0->root * r.e1->rhs_coeffs[0] / r.e0->rhs_coeffs[0];
      std::optional<unsigned long> cand;
      if (val.is_rational() && is_integer(val.rational_value()) && val.rational_value() >= c) {
        Z n = val.rational_value().get_num();
        if (n.fits_ulong_p() && check_candidate(mp, ps, n, cfg)) cand = n.get_ui();
      }
      Verdict v;
      if (small) v = yes_witness(*small);
      else if (cand) v = yes_witness(*cand);
      else v = no_verdict("pinned exponent fails");
      v.searched_to = c;
      v.bounds.push_back({"one-target.pinned", val.is_rational() && is_integer(val.rational_value())
                                          ? BoundResult::of_candidates({val.rational_value().get_num()})
                                          : BoundResult::no_solution()});
      return finish(v);
    }
  }

  ClassDecomposition cd = class_decomposition(mp.eigen);
  auto class_of = [&](const AlgebraicNumber& a) {
    for (size_t k = 0; k < cd.classes.size(); ++k)
      for (auto& [m, mu] : cd.classes[k].members)
        if (alg_equals(m, a)) return k;
    throw std::logic_error("eigenvalue missing from its class");
  };
  std::vector<size_t> cl;
  for (auto& r : roots) cl.push_back(class_of(r.e0->root));

  if (cd.classes.size() > 1) {
    // A quotient that is not a root of unity has at most one solving n.
    // Prefer a pair of distinct moduli (a real log bracket), then small degree.
    size_t bi = 0, bj = 0;
    std::optional<std::pair<int, long>> best;
    for (size_t i = 0; i < roots.size(); ++i)
      for (size_t j = i + 1; j < roots.size(); ++j) {
        if (cl[i] == cl[j]) continue;
        int same = abs_compare(roots[i].e0->root, roots[j].e0->root) == 0 ? 1 : 0;
        std::pair<int, long> cost{same, long(roots[i].e0->root.degree()) * roots[j].e0->root.degree()};
        if (!best || cost < *best) {
          best = cost;
          bi = i;
          bj = j;
        }
      }
    trace.push_back("one-target.quotient");
    const AlgebraicNumber& ai = roots[bi].e0->root;
    const AlgebraicNumber& aj = roots[bj].e0->root;
    const AlgebraicNumber& pi = roots[bi].e0->rhs_coeffs[0];
    const AlgebraicNumber& pj = roots[bj].e0->rhs_coeffs[0];
    BoundResult br;
    if (best->first == 0) {
      // n = ln|p_i / p_j| / ln|a_i / a_j|, bracketed.
      LogRat num = ln_abs(pi) - ln_abs(pj), den = ln_abs(ai) - ln_abs(aj);
      LogRat q = num / den;
      std::vector<Z> ns;
      for (Z n = std::max(Z(0), ceil_q(q.lo)); n <= floor_q(q.hi); ++n) ns.push_back(n);
      br = BoundResult::of_candidates(ns);
    } else {
      br = power_solve(ai / aj, pi / pj);
    }
    std::optional<unsigned long> w;
    if (br.kind == BoundResult::Kind::Candidates || br.kind == BoundResult::Kind::NoSolution) {
      for (auto& n : br.candidates)
        if (n.fits_ulong_p() && check_candidate(mp, ps, n, cfg)) {
          w = n.get_ui();
          break;
        }
      Verdict v = w ? yes_witness(*w) : no_verdict("the quotient equation pins a failing exponent");
      v.bounds.push_back({"one-target.quotient", br});
      return finish(v);
    }
    if (br.kind == BoundResult::Kind::Unknown) {
      Verdict v;
      v.reason = "power problem undecided: " + br.reason;
      v.bounds.push_back({"one-target.quotient", br});
      return finish(v);
    }
    throw std::logic_error("quotient of distinct classes behaved like a root of unity");
  }

  // All quotients are roots of unity; each fixes n mod its order.
  trace.push_back("one-target.unit-root-crt");
  std::vector<std::pair<Z, Z>> cs;
  Verdict v;
  for (size_t i = 1; i < roots.size(); ++i) {
    BoundResult br = power_solve(roots[i].e0->root / roots[0].e0->root,
                                 roots[i].e0->rhs_coeffs[0] / roots[0].e0->rhs_coeffs[0]);
    v.bounds.push_back({"one-target.unit-root-pair" + std::to_string(i), br});
    if (br.kind == BoundResult::Kind::NoSolution) {
      Verdict n = no_verdict("a pairwise congruence is unsatisfiable");
      n.bounds = v.bounds;
      return finish(n);
    }
    if (br.kind != BoundResult::Kind::Congruences || br.congruences.size() != 1)
      throw std::logic_error("root-of-unity quotient gave no single congruence");
    cs.push_back({Z(br.congruences[0].first), Z(br.congruences[0].second)});
  }
  auto merged = crt_merge(cs);
  if (!merged) {
    Verdict n = no_verdict("the congruences have no common solution");
    n.bounds = v.bounds;
    return finish(n);
  }
  unsigned long t = merged->first.get_ui(), m = merged->second.get_ui();
  if (!ps.member_at(Z(t)) || !ps.member_at(Z(t + m))) throw std::logic_error("congruence members fail to verify");
  v.result = Verdict::Result::Yes;
  v.witness = t;
  v.congruence = std::make_pair(t, m);
  return finish(v);
}

Verdict solve_2d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg) {
  if (mp.polys.size() != 2) throw InvalidInput("solve_2d needs exactly two target polynomials");
  (void)sys;
  Engine e(mp, cfg, "two-target");
  return e.run();
}

Verdict solve_3d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg) {
  if (mp.polys.size() != 3) throw InvalidInput("solve_3d needs exactly three target polynomials");
  (void)sys;
  Engine e(mp, cfg, "three-target");
  return e.run();
}

namespace {

Verdict decide_power_impl(const MatrixPowerInstance& mp, const SolverConfig& cfg, bool allow_orbit_form) {
  Verdict v;
  std::vector<std::string> trace{"reduce"};
  if (mp.early_witness) {
    v = yes_witness(*mp.early_witness);
    v.searched_to = *mp.early_witness + 1;
    trace.push_back("reduce.nilpotent-prefix");
  } else if (mp.vanishes) {
    v = yes_witness(mp.shift);
    v.congruence = std::make_pair(mp.shift, 1UL);
    trace.push_back("reduce.orbit-vanishes");
  } else if (mp.polys.empty()) {
    v = no_verdict("the orbit space meets the target only in zero");
    v.searched_to = mp.shift;
    trace.push_back("reduce.empty-intersection");
  } else if (!power_form_ready(mp)) {
    if (!allow_orbit_form) throw std::logic_error("reduction produced a matrix outside companion form");
    // Not in reduced shape: decide the equivalent orbit instance instead.
    MatrixPowerInstance base = mp;
    base.shift = 0;
    v = decide(matrix_power_to_orbit(base), cfg);
    if (v.witness) *v.witness += mp.shift;
    if (v.congruence) v.congruence->first += mp.shift;
    v.searched_to += mp.shift;
    trace.push_back("reduce.orbit-form");
  } else {
    EqSystem sys = build_system(mp);
    switch (mp.polys.size()) {
      case 1: v = solve_1d(mp, sys, cfg); break;
      case 2: v = solve_2d(mp, sys, cfg); break;
      case 3: v = solve_3d(mp, sys, cfg); break;
      default: throw UnsupportedDimension("more than three target polynomials");
    }
    if (v.witness) *v.witness += mp.shift;
    if (v.congruence) v.congruence->first += mp.shift;
    v.searched_to += mp.shift;
    if (v.witness && !power_member(mp, *v.witness - mp.shift)) throw std::logic_error("witness fails to verify");
  }
  v.case_trace.insert(v.case_trace.begin(), trace.begin(), trace.end());
  return v;
}

}  // namespace

Verdict decide_power(const MatrixPowerInstance& mp, const SolverConfig& cfg) {
  return decide_power_impl(mp, cfg, true);
}

Verdict decide(const OrbitInstance& inst, const SolverConfig& cfg) {
  validate(inst);
  size_t dim = inst.V.dim();
  if (dim < 1 || dim > 3) throw UnsupportedDimension("target dimension " + std::to_string(dim) + " outside 1..3");
  MatrixPowerInstance mp = reduce_orbit_to_power(inst);
  Verdict v = decide_power_impl(mp, cfg, false);
  if (mp.vanishes && mp.early_witness) {
    // Every n >= shift works; the set is one progression iff the prefix is full.
    bool full = true;
    for (unsigned long n = *mp.early_witness; n < mp.shift && full; ++n) full = verify_witness(inst, n);
    if (full) v.congruence = std::make_pair(*mp.early_witness, 1UL);
  }
  if (v.witness && !verify_witness(inst, *v.witness)) throw std::logic_error("witness fails exact membership");
  if (v.congruence) {
    auto [t, m] = *v.congruence;
    if (!verify_witness(inst, t) || !verify_witness(inst, t + m))
      throw std::logic_error("congruence members fail exact membership");
  }
  return v;
}

std::optional<unsigned long> brute_force(const OrbitInstance& inst, unsigned long N) {
  validate(inst);
  Z work = Z(N + 1) * Z(inst.A.rows) * Z(inst.A.rows);
  if (work > 10000000) throw DomainError("brute force request exceeds the work cap");
  RatVec y = inst.x;
  for (unsigned long n = 0; n <= N; ++n) {
    if (inst.V.contains(y)) return n;
    y = inst.A * y;
  }
  return std::nullopt;
}

bool verify_witness(const OrbitInstance& inst, unsigned long n) { return exact_membership(inst.A, inst.x, inst.V, n); }

}  // namespace orbit
