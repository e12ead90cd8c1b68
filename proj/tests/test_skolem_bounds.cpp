#include <gtest/gtest.h>

#include "exp_oracle.hpp"
#include "support.hpp"

using namespace orbit;
using namespace orbit::test;

namespace {

// Every brute-force witness n <= N is permitted.
void expect_sound(const std::vector<Term>& ts, const BoundResult& b, unsigned long N, const std::string& what) {
  for (unsigned long n : zero_indices(ts, N))
    EXPECT_TRUE(b.permits(Z(n))) << what << " witness n=" << n << " result " << to_json(b).dump();
}

}  // namespace

TEST(PowerSolve, Examples) {
  auto r = power_solve(AlgebraicNumber(2), AlgebraicNumber(1024));
  EXPECT_EQ(r.kind, BoundResult::Kind::Candidates);
  EXPECT_EQ(r.candidates, std::vector<Z>{Z(10)});
  auto c = power_solve(imag_unit(), AlgebraicNumber(-1));
  EXPECT_EQ(c.kind, BoundResult::Kind::Congruences);
  EXPECT_EQ(c.congruences, (std::vector<std::pair<long, long>>{{2, 4}}));
  EXPECT_EQ(power_solve(AlgebraicNumber(qv(3, 2)), AlgebraicNumber(2)).kind, BoundResult::Kind::NoSolution);
  EXPECT_EQ(power_solve(AlgebraicNumber(2), AlgebraicNumber(3)).kind, BoundResult::Kind::NoSolution);
  EXPECT_THROW(power_solve(AlgebraicNumber(0), AlgebraicNumber(3)), DomainError);
  EXPECT_THROW(power_solve(AlgebraicNumber(2), AlgebraicNumber(0)), DomainError);
}

// beta = alpha^k is recovered exactly for alpha of degree <= 2 that is not a
// root of unity; arbitrary beta yields only exact candidates.
TEST(PowerSolve, CompletenessAndSoundness) {
  Gen gen(13);
  int done = 0;
  while (done < 40) {
    AlgebraicNumber a;
    int kind = gen.U(0, 2);
    if (kind == 0) a = AlgebraicNumber(make_q(Z(gen.U(-5, 5)), Z(gen.U(1, 3))));
    else if (kind == 1) a = alg_of(gen.gint(3, true));
    else a = sqrt_of(gen.U(2, 7)) + AlgebraicNumber(gen.U(-2, 2));
    if (a.is_zero() || root_of_unity_check(a)) continue;
    unsigned long k = gen.U(0, 30);
    auto r = power_solve(a, alg_pow(a, k));
    EXPECT_EQ(r.kind, BoundResult::Kind::Candidates) << a.str();
    EXPECT_EQ(r.candidates, std::vector<Z>{Z(k)}) << a.str() << " k=" << k;
    auto b = alg_pow(a, k) + AlgebraicNumber(1);
    auto s = power_solve(a, b);
    for (auto& n : s.candidates) EXPECT_TRUE(alg_equals(alg_pow(a, n.get_ui()), b));
    ++done;
  }
}

TEST(PowerSolve, RootsOfUnity) {
  auto z = root_near(cyclotomic(12), 0.866, 0.5);
  auto r = power_solve(z, alg_pow(z, 7));
  EXPECT_EQ(r.kind, BoundResult::Kind::Congruences);
  EXPECT_EQ(r.congruences, (std::vector<std::pair<long, long>>{{7, 12}}));
  EXPECT_EQ(power_solve(z, AlgebraicNumber(2)).kind, BoundResult::Kind::NoSolution);
}

TEST(Blanksby, Examples) {
  auto b = blanksby_conjugate(AlgebraicNumber(2));
  EXPECT_TRUE(alg_equals(b.conjugate, 2));
  // 1 + 1/(30 ln 6) = 1.01860...
  EXPECT_GT(b.modulus_lower, Q(10185, 10000));
  EXPECT_LT(b.modulus_lower, Q(10187, 10000));
  auto phi = root_near(P({-1, -1, 1}), 1.618);
  auto bp = blanksby_conjugate(phi);
  EXPECT_EQ(abs_compare(bp.conjugate, AlgebraicNumber(bp.modulus_lower)), 1);
  EXPECT_TRUE(alg_equals(bp.conjugate, phi));
  EXPECT_THROW(blanksby_conjugate(imag_unit()), DomainError);
  EXPECT_THROW(blanksby_conjugate(AlgebraicNumber(qv(1, 2))), DomainError);
}

TEST(Baker, Constant) {
  LogRat c = baker_constant(1, 2);
  LogRat l2 = ln2_bracket();
  // 200 ln 32 = 1000 ln 2.
  EXPECT_LE(c.lo, 1000 * l2.hi);
  EXPECT_GE(c.hi, 1000 * l2.lo);
  EXPECT_LT(c.width(), Q(1, 1000000));
  LogRat c11 = baker_constant(1, 1), c21 = baker_constant(2, 1);
  EXPECT_LE(c11.lo, 800 * l2.hi);
  EXPECT_GE(c11.hi, 800 * l2.lo);
  EXPECT_LE(c21.lo, 2000 * l2.hi);
  EXPECT_GE(c21.hi, 2000 * l2.lo);
}

TEST(Baker, CircleBound) {
  auto lam = root_near(QP({Q(1), qv(-6, 5), Q(1)}), 0.6, 0.8);
  auto off = baker_circle_bound(lam, AlgebraicNumber(2), Q(1), qv(1, 2));
  EXPECT_EQ(off.kind, BoundResult::Kind::SearchBound);
  EXPECT_EQ(off.exact, std::optional<Z>(Z(1)));
  auto on = baker_circle_bound(lam, complex_conjugate(lam), Q(1), qv(1, 2));
  EXPECT_EQ(on.kind, BoundResult::Kind::SearchBound);
  EXPECT_GT(on.log2_bound, 62);
  EXPECT_FALSE(on.exact);
  EXPECT_THROW(baker_circle_bound(imag_unit(), AlgebraicNumber(2), Q(1), qv(1, 2)), DomainError);
  EXPECT_THROW(baker_circle_bound(AlgebraicNumber(2), AlgebraicNumber(2), Q(1), qv(1, 2)), DomainError);
}

TEST(TwoCircles, Examples) {
  auto lam = root_near(QP({Q(1), qv(-6, 5), Q(1)}), 0.6, 0.8);
  auto dis = two_circles_bound(lam, lam, 1, AlgebraicNumber(qv(1, 2)), 4, Q(1), qv(1, 2));
  EXPECT_EQ(dis.kind, BoundResult::Kind::SearchBound);
  EXPECT_EQ(dis.exact, std::optional<Z>(Z(2)));
  auto mu = root_near(QP({Q(1), qv(-14, 25), Q(1)}), 0.28, 0.96);
  auto inter = two_circles_bound(lam, mu, 1, 1, 1, Q(1), qv(1, 2));
  EXPECT_EQ(inter.kind, BoundResult::Kind::SearchBound);
  EXPECT_GT(inter.log2_bound, 0);
  EXPECT_THROW(two_circles_bound(AlgebraicNumber(1), lam, 1, 1, 1, Q(1), qv(1, 2)), DomainError);
  EXPECT_THROW(two_circles_bound(lam, lam, 0, 1, 1, Q(1), qv(1, 2)), DomainError);
}

TEST(VanDerPoorten, FormulaValue) {
  // (16 (n+1) d)^(12 (n+1)) (p^d / ln p) ln 4 (ln 8)^2 with n = d = 1, p = 2.
  LogRat v = vdp_bound(1, 1, Z(2), {Q(4)}, Q(8));
  // ln = 24 ln 32 + ln 2 - ln ln 2 + ln(2 ln 2) + 2 ln(3 ln 2)
  double want = 24 * std::log(32.0) + std::log(2.0 / std::log(2.0)) + std::log(std::log(4.0)) +
                2 * std::log(std::log(8.0));
  EXPECT_NEAR(Q(v.lo).get_d(), want, 1e-9);
  EXPECT_NEAR(Q(v.hi).get_d(), want, 1e-9);
  EXPECT_LE(v.lo, v.hi);
  EXPECT_GT(vdp_bound(1, 1, Z(2), {Q(4)}, Q(16)).lo, v.hi);
  EXPECT_GT(vdp_bound(1, 2, Z(3), {Q(4)}, Q(8)).lo, vdp_bound(1, 2, Z(2), {Q(4)}, Q(8)).hi);
}

TEST(Skolem3, Examples) {
  auto one = skolem3(1, 1, 1, 4, 2, 1);
  EXPECT_EQ(one.kind, BoundResult::Kind::SearchBound);
  EXPECT_EQ(one.exact, std::optional<Z>(Z(2)));
  auto a = gauss(3, 4);
  auto eq = skolem3(1, 1, -2, a, complex_conjugate(a), 5);
  EXPECT_EQ(eq.kind, BoundResult::Kind::Candidates);
  EXPECT_EQ(eq.candidates, std::vector<Z>{Z(0)});
  EXPECT_THROW(skolem3(1, 1, 1, 4, 2, -2), DomainError);
  EXPECT_THROW(skolem3(0, 1, 1, 4, 3, 2), DomainError);
}

TEST(Skolem3Repeated, Examples) {
  auto a = skolem3_repeated(1, 1, 1, 3, 2);
  EXPECT_EQ(a.exact, std::optional<Z>(Z(3)));
  auto b = skolem3_repeated(3, -1, AlgebraicNumber(qv(-4, 3)), 2, 3);
  EXPECT_EQ(b.exact, std::optional<Z>(Z(25)));
  EXPECT_TRUE(b.permits(Z(1)));
  EXPECT_THROW(skolem3_repeated(1, 1, 0, 3, 2), DomainError);
}

TEST(Skolem4, Examples) {
  auto p4 = skolem4({4}, {0, -6, 5, -1}, {2});
  EXPECT_EQ(p4.kind, BoundResult::Kind::Candidates);
  EXPECT_EQ(p4.candidates, (std::vector<Z>{Z(0), Z(2), Z(3)}));
  auto p22 = skolem4({2, 2}, {1, 1, 1, -1}, {2, 3});
  ASSERT_EQ(p22.kind, BoundResult::Kind::SearchBound);
  expect_sound({{{CQ{1}, CQ{1}}, CQ{2}}, {{CQ{1}, CQ{-1}}, CQ{3}}}, p22, 1000, "(2,2)");
  // Two conjugate pairs of modulus 5 with no root-of-unity ratio.
  auto a = gauss(3, 4), c = root_near(P({25, -2, 1}), 1, 4.9);
  auto p1111 = skolem4({1, 1, 1, 1}, {1, 1, 1, 1}, {a, complex_conjugate(a), c, complex_conjugate(c)});
  EXPECT_TRUE(p1111.kind == BoundResult::Kind::SearchBound || p1111.kind == BoundResult::Kind::Unknown);
  EXPECT_THROW(skolem4({2, 2}, {1, 1, 1}, {2, 3}), std::exception);
}

// The master soundness property over planted and unplanted instances.
TEST(Skolem3, SoundnessSweep) {
  Gen gen(101);
  int done = 0, decided = 0;
  while (done < 60) {
    bool cx = gen.U(0, 1);
    std::vector<CQ> r = {gen.gint(4, cx), gen.gint(4, cx), gen.gint(4, cx)};
    if (!pairwise_ok(r)) continue;
    CQ A = gen.gint(3, false), B = gen.gint(3, cx), C = gen.gint(3, cx);
    unsigned long n0 = gen.U(0, 6);
    if (gen.U(0, 1)) C = -(A * cpow(r[0], n0) + B * cpow(r[1], n0)) * inv(cpow(r[2], n0));
    if (C.is_zero()) continue;
    std::vector<Term> ts = {{{A}, r[0]}, {{B}, r[1]}, {{C}, r[2]}};
    auto b = skolem3(alg_of(A), alg_of(B), alg_of(C), alg_of(r[0]), alg_of(r[1]), alg_of(r[2]));
    decided += b.kind != BoundResult::Kind::Unknown;
    expect_sound(ts, b, 200, "skolem3");
    ++done;
  }
  EXPECT_GT(decided, 40);
}

TEST(Skolem3Repeated, SoundnessSweep) {
  Gen gen(202);
  int done = 0;
  while (done < 60) {
    bool cx = gen.U(0, 1);
    CQ a = gen.gint(4, cx), b = gen.gint(4, cx);
    if (ratio_is_unit_root(a, b)) continue;
    CQ A = gen.gint(3, false), B = gen.gint(3, cx), C = gen.gint(3, cx);
    unsigned long n0 = gen.U(0, 8);
    if (gen.U(0, 1)) C = -(A + B * cn(n0)) * cpow(a, n0) * inv(cpow(b, n0));
    if (C.is_zero()) continue;
    auto res = skolem3_repeated(alg_of(A), alg_of(B), alg_of(C), alg_of(a), alg_of(b));
    EXPECT_NE(res.kind, BoundResult::Kind::Unknown);
    expect_sound({{{A, B}, a}, {{C}, b}}, res, 300, "skolem3_repeated");
    ++done;
  }
}

TEST(Skolem4, SoundnessSweep) {
  Gen gen(303);
  const std::vector<std::vector<int>> patterns = {{4}, {3, 1}, {2, 2}, {2, 1, 1}, {1, 1, 1, 1}};
  for (auto& pat : patterns) {
    int done = 0, tries = 0, decided = 0;
    while (done < 25 && tries < 400) {
      ++tries;
      bool cx = gen.U(0, 1);
      std::vector<CQ> roots;
      for (size_t k = 0; k < pat.size(); ++k) roots.push_back(gen.gint(3, cx));
      if (!pairwise_ok(roots)) continue;
      std::vector<CQ> coeffs;
      for (int k = 0; k < 4; ++k) coeffs.push_back(gen.gint(3, cx && k > 0));
      std::vector<Term> ts;
      size_t at = 0;
      for (size_t k = 0; k < pat.size(); ++k) {
        Term t{{}, roots[k]};
        for (int j = 0; j < pat[k]; ++j) t.poly.push_back(coeffs[at++]);
        ts.push_back(t);
      }
      // Plant a witness through the last coefficient.
      unsigned long n0 = gen.U(0, 5);
      if (gen.U(0, 1)) {
        Term& last = ts.back();
        CQ np{1, 0};
        for (size_t j = 0; j + 1 < last.poly.size(); ++j) np = np * cn(n0);
        CQ lead = np * cpow(last.root, n0);
        last.poly.back() = CQ{};
        if (lead.is_zero()) continue;
        last.poly.back() = -eval_terms(ts, n0) * inv(lead);
        coeffs.back() = last.poly.back();
      }
      if (coeffs.back().is_zero() && pat != std::vector<int>{4}) continue;
      std::vector<AlgebraicNumber> ac, ar;
      for (auto& c : coeffs) ac.push_back(alg_of(c));
      for (auto& r : roots) ar.push_back(alg_of(r));
      BoundResult b;
      try {
        b = skolem4(pat, ac, ar);
      } catch (const DomainError&) {
        continue;  // outside the lemma's hypotheses
      }
      decided += b.kind != BoundResult::Kind::Unknown;
      expect_sound(ts, b, 200, "skolem4");
      ++done;
    }
    EXPECT_EQ(done, 25) << "pattern size " << pat.size();
    EXPECT_GT(decided, 10) << "pattern size " << pat.size();
  }
}

TEST(BoundResult, PermitsAndLimit) {
  auto c = BoundResult::of_candidates({Z(3), Z(5)});
  EXPECT_TRUE(c.permits(Z(5)));
  EXPECT_FALSE(c.permits(Z(4)));
  EXPECT_EQ(c.limit(), std::optional<Z>(Z(6)));
  EXPECT_EQ(BoundResult::of_candidates({}).kind, BoundResult::Kind::NoSolution);
  auto g = BoundResult::of_congruences({{1, 4}});
  EXPECT_TRUE(g.permits(Z(9)));
  EXPECT_FALSE(g.permits(Z(10)));
  EXPECT_FALSE(g.limit());
  auto s = BoundResult::search_bound(Z(10));
  EXPECT_TRUE(s.permits(Z(9)));
  EXPECT_FALSE(s.permits(Z(10)));
  EXPECT_EQ(s.exact, std::optional<Z>(Z(10)));
  EXPECT_TRUE(BoundResult::unknown("x").permits(Z(12345)));
  auto f = fold_candidates(Z(3), {Z(7)});
  EXPECT_TRUE(f.permits(Z(2)) && f.permits(Z(7)));
  EXPECT_FALSE(f.permits(Z(8)));
  EXPECT_EQ(f.limit(), std::optional<Z>(Z(8)));
}

// Exponent-free bracketing helpers the bounds rest on.
TEST(LogRat, Brackets) {
  for (long q : {2L, 3L, 10L, 1000L}) {
    LogRat l = ln_bracket(Q(q));
    EXPECT_LE(Q(l.lo).get_d(), std::log(double(q)) + 1e-12);
    EXPECT_GE(Q(l.hi).get_d(), std::log(double(q)) - 1e-12);
    EXPECT_LT(l.width(), Q(1, 1000000000));
  }
  LogRat a = abs_bracket(gauss(3, 4));
  EXPECT_TRUE(a.contains(Q(5)) || (a.lo <= 5 && a.hi >= 5));
  EXPECT_EQ(log2_upper(Z(1)), 0);
  EXPECT_GE(log2_upper(Z(1000)), Q(9965, 1000));
  // n * 1 > 10 + 0 for n >= 11.
  EXPECT_EQ(exceed_threshold(LogRat(Q(1)), LogRat(Q(10)), LogRat(Q(0))), Z(11));
}
