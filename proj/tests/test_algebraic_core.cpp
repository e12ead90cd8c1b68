#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

using namespace orbit;
using namespace orbit::test;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_q("-6/4"), qv(-3, 2));
  EXPECT_EQ(to_string(qv(-3, 2)), "-3/2");
  EXPECT_EQ(to_string(Q(5)), "5");
  EXPECT_THROW(parse_q("1.5"), InvalidInput);
  EXPECT_THROW(parse_q("1/0"), InvalidInput);
}

TEST(Factor, SpecExamples) {
  auto f = factor_rational_poly(P({-1, 0, 1}));
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[0].first, P({-1, 1}));
  EXPECT_EQ(f[1].first, P({1, 1}));
  EXPECT_EQ(factor_rational_poly(P({-2, 0, 1})), (std::vector<std::pair<RatPoly, int>>{{P({-2, 0, 1}), 1}}));
  auto g = factor_rational_poly(P({1, -2, 2, -2, 1}));
  std::map<std::string, int> seen;
  for (auto& [p, m] : g) seen[to_string(p)] = m;
  EXPECT_EQ(seen.size(), 2u);
  EXPECT_EQ(seen[to_string(P({-1, 1}))], 2);
  EXPECT_EQ(seen[to_string(P({1, 0, 1}))], 1);
  EXPECT_THROW(factor_rational_poly(RatPoly()), InvalidInput);
}

// Expected factorizations computed independently with a computer algebra system.
TEST(Factor, FrozenOracleValues) {
  auto as_map = [](const RatPoly& p) {
    std::map<std::string, int> m;
    for (auto& [f, k] : factor_rational_poly(p)) m[to_string(f)] = k;
    return m;
  };
  EXPECT_EQ(as_map(P({4, 0, 0, 0, 1})),
            (std::map<std::string, int>{{to_string(P({2, -2, 1})), 1}, {to_string(P({2, 2, 1})), 1}}));
  EXPECT_EQ(as_map(P({-1, 0, 0, 0, 0, 0, 1})).size(), 4u);
  EXPECT_EQ(as_map(P({576, 0, -960, 0, 352, 0, -40, 0, 1})).size(), 1u);
  EXPECT_TRUE(is_irreducible(P({-1, -1, 0, 0, 0, 1})));
  auto m = as_map(P({-2, 10, -11, -11, 10, 27, -18, -12, 8}));
  EXPECT_EQ(m[to_string(QP({qv(-1, 2), Q(1)}))], 3);
  EXPECT_EQ(m[to_string(P({-2, 0, 1}))], 1);
  EXPECT_EQ(m[to_string(P({-1, -1, 0, 1}))], 1);
}

// Products of known irreducibles come back exactly, multiplicities included.
TEST(Factor, RandomProductsRoundTrip) {
  std::mt19937 g(7);
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  for (int it = 0; it < 40; ++it) {
    std::map<std::string, int> expect;
    RatPoly prod = P({1});
    for (int k = U(1, 4); k > 0; --k) {
      RatPoly f;
      if (U(0, 1)) {
        f = P({U(-6, 6), 1});
      } else {
        // x^2 + b x + c with b^2 - 4c < 0: no real root, so irreducible.
        int b = U(-4, 4), c = b * b / 4 + U(1, 5);
        f = P({c, b, 1});
      }
      int m = U(1, 2);
      expect[to_string(f)] += m;
      for (int j = 0; j < m; ++j) prod *= f;
    }
    std::map<std::string, int> got;
    for (auto& [f, m] : factor_rational_poly(prod)) got[to_string(f)] += m;
    EXPECT_EQ(got, expect) << to_string(prod);
  }
}

TEST(Isolation, SpecExamples) {
  auto r2 = isolate_roots(P({-2, 0, 1}));
  ASSERT_EQ(r2.size(), 2u);
  EXPECT_NEAR(r2[0].box().center_re.get_d(), -1.41421356, 1e-6);
  EXPECT_NEAR(r2[1].box().center_re.get_d(), 1.41421356, 1e-6);
  auto ri = isolate_roots(P({1, 0, 1}));
  ASSERT_EQ(ri.size(), 2u);
  EXPECT_NEAR(std::abs(ri[0].box().center_im.get_d()), 1.0, 1e-6);
  auto r1 = isolate_roots(P({-1, 3, -3, 1}));
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_EQ(r1[0].min_poly(), P({-1, 1}));
}

// Boxes match a long-double Durand-Kerner oracle root for root.
TEST(Isolation, AgreesWithNumericOracle) {
  std::mt19937 g(11);
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  for (int it = 0; it < 30; ++it) {
    std::vector<Q> c;
    int d = U(2, 6);
    for (int i = 0; i < d; ++i) c.push_back(Q(U(-9, 9)));
    c.push_back(Q(1));
    RatPoly p = squarefree_part(RatPoly(c));
    if (p.degree() < 1) continue;
    auto boxes = isolate_roots(p);
    auto num = numeric_roots(p);
    ASSERT_EQ(boxes.size(), num.size());
    for (auto& b : boxes) {
      auto box = b.refined(Q(1, 1000000));
      double best = 1e300;
      for (auto& z : num)
        best = std::min(best, double(std::abs(z - std::complex<long double>(box.center_re.get_d(), box.center_im.get_d()))));
      EXPECT_LT(best, 1e-5) << to_string(p);
    }
  }
}

TEST(Isolation, SeparationBoundExamples) {
  Q s = separation_lower_bound(P({-2, 0, 1}));
  EXPECT_GT(s, 0);
  EXPECT_LE(s, Q(433, 1000));
  EXPECT_LE(separation_lower_bound(P({1, 0, 1})), 2);
  EXPECT_THROW(separation_lower_bound(P({0, 1})), InvalidInput);
  // Against the frozen minimum root distance of x^5 - 3x + 1 (0.87991...).
  EXPECT_LT(separation_lower_bound(P({1, -3, 0, 0, 0, 1})), Q(8799, 10000));
}

TEST(Algebraic, BinopExamples) {
  auto r2 = sqrt_of(2), r3 = sqrt_of(3);
  EXPECT_TRUE(alg_equals(r2 + AlgebraicNumber(0), r2));
  auto sq = r2 * r2;
  EXPECT_TRUE(sq.is_rational());
  EXPECT_EQ(sq.rational_value(), 2);
  auto s = r2 + r3;
  EXPECT_EQ(s.min_poly(), P({1, 0, -10, 0, 1}));
  auto box = s.refined(make_q(Z(1), Z(10) << 64));
  EXPECT_NEAR(box.center_re.get_d(), 3.14626436994197234, 1e-15);
  EXPECT_THROW(r2 / AlgebraicNumber(0), DomainError);
  EXPECT_TRUE(alg_equals(s * s, AlgebraicNumber(5) + AlgebraicNumber(2) * sqrt_of(6)));
}

TEST(Algebraic, FrozenMinimalPolynomials) {
  auto c2 = root_near(P({-2, 0, 0, 1}), 1.26);
  EXPECT_EQ((c2 + imag_unit()).min_poly(), P({5, 12, 3, -4, 3, 0, 1}));
  EXPECT_EQ((sqrt_of(2) * gauss(1, 1)).min_poly(), P({16, 0, 0, 0, 1}));
  auto phi = root_near(P({-1, -1, 1}), 1.618);
  EXPECT_EQ((phi / sqrt_of(3)).min_poly(), QP({qv(1, 9), Q(0), Q(-1), Q(0), Q(1)}));
}

TEST(Algebraic, EvalPoly) {
  auto r2 = sqrt_of(2);
  EXPECT_TRUE(alg_equals(alg_eval_poly(P({0, 0, 1}), r2), AlgebraicNumber(2)));
  EXPECT_TRUE(alg_eval_poly(RatPoly(), r2).is_zero());
  auto phi = root_near(P({-1, -1, 1}), 1.618);
  EXPECT_TRUE(alg_equals(alg_eval_poly(P({0, -1, 1}), phi), AlgebraicNumber(1)));
}

TEST(Algebraic, Equality) {
  auto a = isolate_roots(P({-2, 0, 1}))[1];
  auto b = root_near(P({-4, 0, 2}), 1.4);
  EXPECT_TRUE(alg_equals(a, b));
  EXPECT_FALSE(alg_equals(a, -a));
}

TEST(Algebraic, RootOfUnity) {
  EXPECT_EQ(root_of_unity_check(imag_unit()), std::make_pair(4L, 1L));
  EXPECT_EQ(root_of_unity_check(AlgebraicNumber(-1)), std::make_pair(2L, 1L));
  AlgebraicNumber z = root_near(QP({Q(1), qv(-6, 5), Q(1)}), 0.6, 0.8);
  EXPECT_FALSE(root_of_unity_check(z));
  EXPECT_THROW(root_of_unity_check(AlgebraicNumber(0)), DomainError);
}

// Soundness: a reported order k means a^k = 1 and no smaller power is 1.
TEST(Algebraic, RootOfUnityOrderIsMinimal) {
  for (long k = 1; k <= 12; ++k)
    for (auto& r : isolate_roots(cyclotomic(k))) {
      auto res = root_of_unity_check(r);
      ASSERT_TRUE(res);
      EXPECT_EQ(res->first, k);
      EXPECT_TRUE(alg_equals(alg_pow(r, k), AlgebraicNumber(1)));
      for (long j = 1; j < k; ++j) EXPECT_FALSE(alg_equals(alg_pow(r, j), AlgebraicNumber(1)));
    }
}

TEST(Algebraic, Conjugation) {
  auto r2 = sqrt_of(2);
  EXPECT_EQ(conjugates(r2).size(), 2u);
  EXPECT_EQ(conjugates(AlgebraicNumber(3)).size(), 1u);
  auto cs = conjugates(root_near(P({-2, 0, 0, 1}), 1.26));
  ASSERT_EQ(cs.size(), 3u);
  int real = 0;
  for (auto& c : cs) real += c.is_real();
  EXPECT_EQ(real, 1);
  EXPECT_TRUE(alg_equals(complex_conjugate(imag_unit()), -imag_unit()));
  EXPECT_TRUE(alg_equals(complex_conjugate(r2), r2));
  EXPECT_TRUE(alg_equals(complex_conjugate(gauss(1, 1)), gauss(1, -1)));
}

TEST(Algebraic, MagnitudeAndNorms) {
  EXPECT_EQ(abs_compare(gauss(3, 4), AlgebraicNumber(5)), 0);
  EXPECT_EQ(abs_compare(AlgebraicNumber(2), AlgebraicNumber(3)), -1);
  EXPECT_EQ(abs_compare(gauss(1, 1), sqrt_of(2)), 0);
  EXPECT_EQ(abs_norm(sqrt_of(2)), -2);
  EXPECT_EQ(abs_norm(AlgebraicNumber(qv(3, 2))), qv(3, 2));
  EXPECT_EQ(abs_norm(gauss(1, 1)), 2);
  EXPECT_EQ(norm_valuation(AlgebraicNumber(2), Z(2)), 1);
  EXPECT_EQ(norm_valuation(AlgebraicNumber(qv(3, 2)), Z(2)), -1);
  EXPECT_EQ(norm_valuation(gauss(1, 1), Z(2)), 1);
  EXPECT_EQ(norm_valuation(AlgebraicNumber(0), Z(2)), kInfiniteValuation);
}

TEST(Algebraic, Refine) {
  Q eps = make_q(Z(1), Z(10) << 100);
  auto b = refine(sqrt_of(2), eps);
  EXPECT_LE(b.radius, eps);
  // 1.41421356237309504880168872420969807856967...
  Q lo = make_q(Z("141421356237309504880168872420969807"), Z("100000000000000000000000000000000000"));
  Q hi = lo + make_q(Z(1), Z("100000000000000000000000000000000000"));
  EXPECT_LT(lo, b.center_re);
  EXPECT_GT(hi, b.center_re);
  EXPECT_LE(refine(imag_unit(), 1).radius, 1);
}

// Containment and canonicality over random operations.
TEST(Algebraic, RandomOperationInvariants) {
  std::mt19937 g(3);
  const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
  const Q eps = make_q(Z(1), Z(10) << 110);
  for (int it = 0; it < 120; ++it) {
    auto a = random_alg(g), b = random_alg(g);
    BinOp op = ops[it % 4];
    if (op == BinOp::Div && b.is_zero()) continue;
    auto r = alg_binop(op, a, b);
    EXPECT_LE(r.degree(), a.degree() * b.degree());
    auto ra = a.refined(eps), rb = b.refined(eps), rr = r.refined(eps);
    Disc want = combine(op, {ra.center_re, ra.center_im, ra.radius}, {rb.center_re, rb.center_im, rb.radius});
    Q dre = want.re - rr.center_re, dim = want.im - rr.center_im;
    EXPECT_LE(sqrt_lower(dre * dre + dim * dim), want.rad + rr.radius);
    // Minimal polynomial vanishes on the box, and the box excludes conjugates.
    Ball v = ball_eval(r.min_poly(), r.box().to_ball(128), 128);
    EXPECT_TRUE(v.contains_zero());
    for (auto& c : conjugates(r))
      if (!alg_equals(c, r)) EXPECT_FALSE(c.box().overlaps(r.box()));
    // Same value by another route gives the same canonical form.
    if (op == BinOp::Add) {
      auto r2 = b + a;
      EXPECT_TRUE(alg_equals(r, r2));
      EXPECT_EQ(r.min_poly(), r2.min_poly());
    }
  }
}

TEST(Algebraic, FieldAxiomsOnSamples) {
  std::mt19937 g(5);
  for (int it = 0; it < 15; ++it) {
    auto a = random_alg(g), b = random_alg(g), c = random_alg(g);
    if (a.degree() * b.degree() * c.degree() > 12) continue;
    EXPECT_TRUE(alg_equals((a + b) + c, a + (b + c)));
    EXPECT_TRUE(alg_equals(a * (b + c), a * b + a * c));
    if (!a.is_zero()) EXPECT_TRUE(alg_equals(a * alg_inverse(a), AlgebraicNumber(1)));
  }
}

// |N(ab)|^(d/deg ab) = |N(a)|^(d/deg a) |N(b)|^(d/deg b) with d = 4.
TEST(Algebraic, NormMultiplicativity) {
  std::mt19937 g(9);
  for (int it = 0; it < 30; ++it) {
    auto a = random_alg(g), b = random_alg(g);
    if (a.degree() > 2 || b.degree() > 2 || a.is_zero() || b.is_zero()) continue;
    auto ab = a * b;
    auto powq = [](const Q& q, long e) {
      Q r = 1;
      for (long i = 0; i < e; ++i) r *= q;
      return r;
    };
    long d = 4;
    EXPECT_EQ(powq(abs_q(abs_norm(ab)), d / ab.degree()),
              powq(abs_q(abs_norm(a)), d / a.degree()) * powq(abs_q(abs_norm(b)), d / b.degree()));
  }
}

TEST(Algebraic, JsonRoundTrip) {
  auto a = root_near(P({-2, 0, 0, 1}), -0.63, 1.09);
  auto j = to_json(a);
  EXPECT_TRUE(j.contains("min_poly"));
  EXPECT_TRUE(j["re"].is_string());
  EXPECT_TRUE(alg_equals(algebraic_from_json(j), a));
}
