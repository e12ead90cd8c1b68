#include <gtest/gtest.h>

#include "orbit/circuit.hpp"
#include "support.hpp"

using namespace orbit;
using namespace orbit::test;

namespace {

Z zabs(const Z& z) { return z < 0 ? Z(-z) : z; }

// Random SLP over a few inputs, built bottom up.
SLP random_slp(std::mt19937& g, size_t nodes) {
  auto U = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); };
  SLP s;
  s.inputs = {Z(U(-9, 9)), Z(U(-9, 9))};
  s.input(0);
  s.input(1);
  s.constant(Z(U(-20, 20)));
  while (s.nodes.size() < nodes) {
    size_t i = U(0, s.nodes.size() - 1), j = U(0, s.nodes.size() - 1);
    switch (U(0, 3)) {
      case 0: s.add(i, j); break;
      case 1: s.sub(i, j); break;
      case 2: s.mul(i, j); break;
      default: s.constant(Z(U(-1000, 1000)));
    }
  }
  for (size_t k = 0; k < nodes; k += 3) s.outputs.push_back(k);
  s.outputs.push_back(nodes - 1);
  return s;
}

// A circuit that is identically zero by construction: e - e for each random e,
// and expanded squares minus their expansion.
SLP zero_circuit(std::mt19937& g, size_t size) {
  SLP s = random_slp(g, size);
  std::vector<size_t> outs;
  for (size_t o : s.outputs) outs.push_back(s.sub(o, o));
  size_t x = 0, y = 1;
  size_t lhs = s.mul(s.add(x, y), s.add(x, y));
  size_t rhs = s.add(s.add(s.mul(x, x), s.mul(y, y)), s.add(s.mul(x, y), s.mul(x, y)));
  outs.push_back(s.sub(lhs, rhs));
  s.outputs = outs;
  return s;
}

Q budget() { return make_q(Z(1), Z(1) << 64); }

}  // namespace

TEST(SLP, PowerMembershipExamples) {
  auto s1 = power_membership_slp(RatMatrix::identity(2), vec({1, 0}), {vec({1, 0})}, 5);
  auto v1 = eval_exact(s1);
  ASSERT_EQ(v1.size(), 1u);
  EXPECT_EQ(v1[0], 0);
  auto s2 = power_membership_slp(diag({2, 3}), vec({1, 1}), {vec({1, 0})}, 4);
  auto v2 = eval_exact(s2);
  ASSERT_EQ(v2.size(), 1u);
  EXPECT_EQ(zabs(v2[0]), 81);
  auto s0 = power_membership_slp(diag({2, 3}), vec({1, 0}), {vec({1, 0})}, 0);
  for (auto& v : eval_exact(s0)) EXPECT_EQ(v, 0);
  auto s3 = power_membership_slp(diag({2, 3}), vec({0, 1}), {vec({1, 0})}, 0);
  EXPECT_NE(eval_exact(s3)[0], 0);
  RatMatrix half(1, 1);
  half(0, 0) = qv(1, 2);
  EXPECT_THROW(power_membership_slp(half, vec({1}), {vec({1})}, 1), InvalidInput);
}

TEST(SLP, SquaringDepthIsLogarithmic) {
  auto a = rows({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
  size_t small = power_membership_slp(a, vec({1, 0, 0}), {vec({1, 0, 0})}, 1 << 4).nodes.size();
  size_t big = power_membership_slp(a, vec({1, 0, 0}), {vec({1, 0, 0})}, 1UL << 40).nodes.size();
  EXPECT_LT(big, small * 12);
}

TEST(SLP, EvalModExamples) {
  SLP s;
  size_t two = s.constant(Z(2));
  size_t t = s.mul(two, two);           // 4
  t = s.mul(t, t);                      // 16
  size_t t8 = s.mul(t, t);              // 256
  size_t t10 = s.mul(t8, s.mul(two, two));
  s.outputs = {t10};
  EXPECT_EQ(eval_mod(s, 7), std::vector<uint64_t>{2});
  EXPECT_EQ(eval_exact(s), std::vector<Z>{Z(1024)});
  SLP z;
  z.outputs = {z.constant(Z(0))};
  EXPECT_EQ(eval_mod(z, 13), std::vector<uint64_t>{0});
  SLP d;
  d.inputs = {Z(12345)};
  size_t x = d.input(0);
  d.outputs = {d.sub(x, x)};
  EXPECT_EQ(eval_mod(d, 1000003), std::vector<uint64_t>{0});
  SLP neg;
  neg.outputs = {neg.constant(Z(-3))};
  EXPECT_EQ(eval_mod(neg, 7), std::vector<uint64_t>{4});
}

TEST(SLP, ZeroTestExamples) {
  SLP s;
  s.inputs = {Z(7)};
  size_t x = s.input(0), one = s.constant(Z(1)), two = s.constant(Z(2));
  size_t sq = s.mul(s.add(x, one), s.add(x, one));
  s.outputs = {s.sub(s.sub(s.sub(sq, s.mul(x, x)), s.mul(two, x)), one)};
  EXPECT_TRUE(prob_zero_test(s, budget()).all_zero);
  SLP c;
  c.outputs = {c.constant(Z(1))};
  EXPECT_FALSE(prob_zero_test(c, budget()).all_zero);
  SLP big;
  size_t t = big.constant(Z(2));
  for (int i = 0; i < 6; ++i) t = big.mul(t, t);
  big.outputs = {big.sub(t, big.constant(Z("18446744073709551616")))};
  EXPECT_TRUE(prob_zero_test(big, budget()).all_zero);
  EXPECT_EQ(eval_exact(big), std::vector<Z>{Z(0)});
}

TEST(SLP, NonzeroOutputIsReported) {
  SLP s;
  s.outputs = {s.constant(Z(0)), s.constant(Z(0)), s.constant(Z(5))};
  auto r = prob_zero_test(s, budget());
  EXPECT_FALSE(r.all_zero);
  EXPECT_EQ(r.nonzero_output, 2u);
}

// A value divisible by many word primes is still caught: the sample covers
// every prime factor the magnitude bound allows.
TEST(SLP, ProductOfWordPrimesIsNonzero) {
  std::mt19937_64 rng(99);
  SLP s;
  size_t acc = s.constant(Z(1));
  for (int i = 0; i < 40; ++i) acc = s.mul(acc, s.constant(Z(static_cast<unsigned long>(random_word_prime(rng)))));
  s.outputs = {acc};
  for (uint64_t seed = 1; seed <= 5; ++seed) EXPECT_FALSE(prob_zero_test(s, budget(), seed).all_zero);
}

TEST(SLP, MagnitudeBoundDominates) {
  std::mt19937 g(5);
  for (int it = 0; it < 200; ++it) {
    SLP s = random_slp(g, 5 + it % 26);
    s.outputs.clear();
    for (size_t k = 0; k < s.nodes.size(); ++k) s.outputs.push_back(k);
    for (auto& v : eval_exact(s))
      if (v != 0) EXPECT_LE(Q(floor_log2(v) + 1), s.magnitude_log2);
  }
}

TEST(SLP, ZeroCircuitsNeverReportedNonzero) {
  std::mt19937 g(77);
  for (int it = 0; it < 60; ++it) {
    SLP s = zero_circuit(g, 10 + it % 30);
    for (auto& v : eval_exact(s)) ASSERT_EQ(v, 0);
    EXPECT_TRUE(prob_zero_test(s, budget(), it + 1).all_zero);
  }
}

TEST(SLP, ModularAgreesWithExact) {
  std::mt19937 g(8);
  std::mt19937_64 rng(8);
  for (int it = 0; it < 50; ++it) {
    SLP s = random_slp(g, 20);
    uint64_t p = random_word_prime(rng);
    auto ex = eval_exact(s);
    auto md = eval_mod(s, p);
    ASSERT_EQ(ex.size(), md.size());
    for (size_t k = 0; k < ex.size(); ++k) {
      Z r = ex[k] % Z(static_cast<unsigned long>(p));
      if (r < 0) r += Z(static_cast<unsigned long>(p));
      EXPECT_EQ(r, Z(static_cast<unsigned long>(md[k])));
    }
  }
}

TEST(SLP, WordPrimesInWindow) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    uint64_t p = random_word_prime(rng);
    EXPECT_GE(p, uint64_t(1) << 61);
    EXPECT_LT(p, uint64_t(1) << 62);
    EXPECT_NE(mpz_probab_prime_p(Z(static_cast<unsigned long>(p)).get_mpz_t(), 30), 0);
  }
}

TEST(ExactMembership, Examples) {
  auto fib = rows({{0, 1}, {1, 1}});
  Subspace v(2, {vec({1, 1})});
  EXPECT_TRUE(exact_membership(fib, vec({0, 1}), v, 1));
  EXPECT_FALSE(exact_membership(fib, vec({0, 1}), v, 2));
  EXPECT_TRUE(exact_membership(diag({5, 7}), vec({1, 1}), v, 0));
  EXPECT_THROW(exact_membership(fib, vec({0, 1}), v, 100, 10), std::exception);
}

// Both membership routes agree with the orbit walk.
TEST(ExactMembership, AgreesWithWalkAndCircuit) {
  std::mt19937 g(19);
  for (int it = 0; it < 120; ++it) {
    auto inst = random_instance(g);
    RatMatrix A = rescale_to_integer(inst.A);
    unsigned long n = it % 20;
    RatVec y = inst.x;
    for (unsigned long i = 0; i < n; ++i) y = A * y;
    bool want = inst.V.contains(y);
    EXPECT_EQ(exact_membership(A, inst.x, inst.V, n), want);
    auto slp = power_membership_slp(A, inst.x, inst.V.basis, n);
    EXPECT_EQ(prob_zero_test(slp, budget(), it + 1).all_zero, want);
  }
}

TEST(SLP, DumpFormat) {
  SLP s;
  s.inputs = {Z(3)};
  size_t x = s.input(0);
  s.outputs = {s.mul(x, x)};
  std::string d = dump(s);
  EXPECT_NE(d.find("t1 = MUL t0 t0"), std::string::npos) << d;
}
