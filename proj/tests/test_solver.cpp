#include <gtest/gtest.h>

#include "support.hpp"

using namespace orbit;
using namespace orbit::test;

namespace {

using R = Verdict::Result;

SolverConfig exact_cfg() {
  SolverConfig c;
  c.use_prob_membership = false;
  return c;
}

// What the oracle can refute: a Yes must name the smallest witness the oracle
// finds, a No must leave the oracle empty, and a congruence must match every
// witness up to N.
void expect_agrees(const OrbitInstance& inst, const Verdict& v, unsigned long N, const std::string& what) {
  auto w = brute_force(inst, N);
  if (v.result == R::Yes) {
    ASSERT_TRUE(v.witness) << what;
    EXPECT_TRUE(verify_witness(inst, *v.witness)) << what;
    if (*v.witness <= N) EXPECT_EQ(w, v.witness) << what;
  } else if (v.result == R::No) {
    EXPECT_FALSE(w) << what << " oracle witness " << *w;
  } else if (w && v.searched_to > *w) {
    ADD_FAILURE() << what << ": unknown verdict claims to have searched past witness " << *w;
  }
  if (v.congruence) {
    auto [t, m] = *v.congruence;
    EXPECT_TRUE(verify_witness(inst, t)) << what;
    EXPECT_TRUE(verify_witness(inst, t + m)) << what;
    unsigned long top = std::min(N, 200UL);
    auto flags = std::vector<bool>(top + 1);
    RatVec y = inst.x;
    for (unsigned long n = 0; n <= top; ++n, y = inst.A * y) {
      bool in = inst.V.contains(y);
      bool claimed = m == 0 ? n == t : (n >= t && (n - t) % m == 0);
      EXPECT_EQ(in, claimed) << what << " n=" << n;
    }
  }
}

}  // namespace

TEST(Decide, NamedExamples) {
  auto rot = decide(instance(rows({{0, -1}, {1, 0}}), vec({1, 0}), {vec({0, 1})}));
  EXPECT_EQ(rot.result, R::Yes);
  EXPECT_EQ(rot.witness, std::optional<unsigned long>(1));
  EXPECT_EQ(rot.congruence, (std::optional<std::pair<unsigned long, unsigned long>>({1, 2})));
  EXPECT_EQ(decide(instance(diag({2, 3}), vec({1, 1}), {vec({1, 0})})).result, R::No);
  auto in = decide(instance(diag({2, 3, 5}), vec({1, 1, 0}), {vec({1, 0, 0}), vec({0, 1, 0})}));
  EXPECT_EQ(in.result, R::Yes);
  EXPECT_EQ(in.witness, std::optional<unsigned long>(0));
  auto fib = decide(instance(rows({{0, 1}, {1, 1}}), vec({0, 1}), {vec({1, 1})}));
  EXPECT_EQ(fib.result, R::Yes);
  EXPECT_EQ(fib.witness, std::optional<unsigned long>(1));
}

TEST(Decide, DimensionGuard) {
  auto A = diag({2, 3, 5, 7, 11});
  std::vector<RatVec> b = {vec({1, 0, 0, 0, 0}), vec({0, 1, 0, 0, 0}), vec({0, 0, 1, 0, 0}), vec({0, 0, 0, 1, 0})};
  EXPECT_THROW(decide(instance(A, vec({1, 1, 1, 1, 1}), b)), UnsupportedDimension);
  EXPECT_THROW(decide(OrbitInstance{A, vec({1, 1, 1, 1, 1}), Subspace(5, {})}), UnsupportedDimension);
  EXPECT_THROW(decide(instance(A, vec({0, 0, 0, 0, 0}), {b[0]})), InvalidInput);
}

TEST(Decide, JsonShape) {
  auto v = decide(instance(rows({{0, -1}, {1, 0}}), vec({1, 0}), {vec({0, 1})}));
  auto j = to_json(v);
  EXPECT_EQ(j["result"], "yes");
  EXPECT_EQ(j["witness"], 1);
  EXPECT_EQ(j["congruence"], nlohmann::json::array({1, 2}));
  EXPECT_TRUE(j["case_trace"].is_array());
  EXPECT_FALSE(j["case_trace"].empty());
}

TEST(BruteForce, Examples) {
  auto fib = instance(rows({{0, 1}, {1, 1}}), vec({0, 1}), {vec({1, 1})});
  EXPECT_EQ(brute_force(fib, 10), std::optional<unsigned long>(1));
  EXPECT_EQ(brute_force(instance(diag({2, 3}), vec({1, 1}), {vec({1, 0})}), 100), std::nullopt);
  EXPECT_EQ(brute_force(instance(diag({2, 3}), vec({1, 0}), {vec({1, 0})}), 100), std::optional<unsigned long>(0));
  auto rot = instance(rows({{0, -1}, {1, 0}}), vec({1, 0}), {vec({0, 1})});
  EXPECT_TRUE(verify_witness(rot, 1));
  EXPECT_FALSE(verify_witness(rot, 2));
  EXPECT_TRUE(verify_witness(fib, 1));
  EXPECT_THROW(brute_force(instance(diag({2, 3, 5, 7, 11}), vec({1, 1, 1, 1, 1}), {vec({1, 0, 0, 0, 0})}), 100000000),
               std::exception);
}

TEST(Crt, Merge) {
  EXPECT_EQ(crt_merge({{Z(1), Z(2)}, {Z(0), Z(3)}}), (std::optional<std::pair<Z, Z>>({Z(3), Z(6)})));
  EXPECT_EQ(crt_merge({{Z(1), Z(2)}, {Z(0), Z(4)}}), std::nullopt);
  EXPECT_EQ(crt_merge({{Z(1), Z(4)}, {Z(3), Z(6)}}), (std::optional<std::pair<Z, Z>>({Z(9), Z(12)})));
  EXPECT_EQ(crt_merge({}), (std::optional<std::pair<Z, Z>>({Z(0), Z(1)})));
  // Against a direct search over all residues.
  std::mt19937 g(3);
  for (int it = 0; it < 200; ++it) {
    std::vector<std::pair<Z, Z>> cs;
    int k = 1 + it % 3;
    for (int i = 0; i < k; ++i) {
      long m = std::uniform_int_distribution<long>(1, 12)(g);
      cs.push_back({Z(std::uniform_int_distribution<long>(0, m - 1)(g)), Z(m)});
    }
    long L = 1;
    for (auto& [t, m] : cs) L = std::lcm(L, m.get_si());
    std::optional<long> first;
    for (long n = 0; n < L && !first; ++n) {
      bool ok = true;
      for (auto& [t, m] : cs) ok = ok && n % m.get_si() == t.get_si();
      if (ok) first = n;
    }
    auto r = crt_merge(cs);
    ASSERT_EQ(bool(r), bool(first));
    if (r) {
      EXPECT_EQ(r->first, *first);
      EXPECT_EQ(r->second, L);
    }
  }
}

// Every hand-derived one-target instance is answered exactly, and the answer
// agrees with the direct power search.
TEST(Solve1D, ConstructedSuite) {
  for (auto& c : one_dim_suite()) {
    auto sys = build_system(c.mp);
    Verdict v = solve_1d(c.mp, sys, SolverConfig{});
    EXPECT_EQ(v.result, c.result) << c.name << " " << to_json(v).dump();
    EXPECT_EQ(v.witness, c.witness) << c.name;
    if (c.congruence) EXPECT_EQ(v.congruence, c.congruence) << c.name;
    auto seen = power_witnesses(c.mp, 120);
    if (c.result == R::No) EXPECT_TRUE(seen.empty()) << c.name;
    else {
      ASSERT_FALSE(seen.empty()) << c.name;
      EXPECT_EQ(seen[0], *c.witness) << c.name;
    }
    if (c.congruence)
      for (unsigned long n = 0; n <= 120; ++n) {
        auto [t, m] = *c.congruence;
        bool claimed = n >= t && (n - t) % m == 0;
        EXPECT_EQ(claimed, std::find(seen.begin(), seen.end(), n) != seen.end()) << c.name << " n=" << n;
      }
    // The public polynomial-form entry agrees.
    Verdict p = decide_power(c.mp);
    EXPECT_EQ(p.result, c.result) << c.name;
    EXPECT_EQ(p.witness, c.witness) << c.name;
  }
}

TEST(Solve1D, CasesAreTraced) {
  for (auto& c : one_dim_suite()) {
    Verdict v = solve_1d(c.mp, build_system(c.mp), SolverConfig{});
    EXPECT_FALSE(v.case_trace.empty()) << c.name;
  }
}

TEST(Solve2D, ConstructedInstances) {
  // Three real classes, plane target.
  auto a = instance(diag({2, 3, 5}), vec({1, 1, 1}), {vec({4, 0, 25}), vec({0, 1, 0})});
  expect_agrees(a, decide(a), 2000, "diag235-plane");
  auto b = instance(diag({2, 3, 5}), vec({1, 1, 1}), {vec({1, 1, 0}), vec({0, 1, 1})});
  expect_agrees(b, decide(b), 2000, "diag235-generic");
  // A Jordan block of size three inside a single class.
  auto j = instance(rows({{2, 1, 0}, {0, 2, 1}, {0, 0, 2}}), vec({0, 0, 1}), {vec({1, 0, 0}), vec({0, 1, -1})});
  expect_agrees(j, decide(j), 2000, "jordan3");
  // Two classes, both simple, independent columns: positive from the start.
  auto t = instance(diag({2, -2, 3}), vec({1, 1, 1}), {vec({1, 0, 0}), vec({0, 1, 1})});
  expect_agrees(t, decide(t), 2000, "two-classes");
}

TEST(Solve3D, ConstructedInstances) {
  // Conjugate pairs of moduli 5 and 13 in block-diagonal form.
  auto blk = rows({{0, -25, 0, 0}, {1, 6, 0, 0}, {0, 0, 0, -13}, {0, 0, 1, 4}});
  auto a = instance(blk, vec({1, 0, 1, 0}), {vec({1, 0, 0, 0}), vec({0, 1, 0, 1}), vec({0, 0, 1, 1})});
  expect_agrees(a, decide(a), 2000, "two-pairs");
  // Repeated conjugate pair.
  auto rep = rows({{0, -5, 1, 0}, {1, 2, 0, 1}, {0, 0, 0, -5}, {0, 0, 1, 2}});
  auto b = instance(rep, vec({0, 0, 1, 0}), {vec({1, 0, 0, 0}), vec({0, 1, 0, 0}), vec({0, 0, 1, 1})});
  expect_agrees(b, decide(b), 2000, "repeated-pair");
  auto c = instance(diag({2, 3, 5, 7}), vec({1, 1, 1, 1}), {vec({1, 2, 0, 0}), vec({0, 0, 1, 0}), vec({0, 0, 0, 1})});
  auto vc = decide(c);
  EXPECT_EQ(vc.result, R::No);
  expect_agrees(c, vc, 2000, "diag2357");
}

TEST(Decide, DeterministicAndModeIndependent) {
  std::mt19937 g(55);
  for (int it = 0; it < 25; ++it) {
    auto inst = random_instance(g);
    auto a = decide(inst), b = decide(inst), c = decide(inst, exact_cfg());
    EXPECT_EQ(to_json(a), to_json(b));
    EXPECT_EQ(a.result, c.result);
    EXPECT_EQ(a.witness, c.witness);
    EXPECT_EQ(a.congruence, c.congruence);
  }
}

// Oracle agreement on a modest sample; the full sweep lives in the acceptance binary.
TEST(Decide, OracleAgreementSample) {
  std::mt19937 g(2024);
  for (int it = 0; it < 40; ++it) {
    auto inst = random_instance(g);
    expect_agrees(inst, decide(inst), 500, "random " + std::to_string(it));
  }
}

TEST(Decide, NilpotentPrefix) {
  auto a = instance(rows({{0, 1}, {0, 0}}), vec({0, 1}), {vec({1, 0})});
  auto v = decide(a);
  EXPECT_EQ(v.result, R::Yes);
  EXPECT_EQ(v.witness, std::optional<unsigned long>(1));
  EXPECT_EQ(v.congruence, (std::optional<std::pair<unsigned long, unsigned long>>({1, 1})));
  // Singular but not nilpotent: the zero eigenvalue only delays the orbit.
  auto b = instance(rows({{0, 0, 0}, {1, 2, 0}, {0, 0, 3}}), vec({1, 0, 1}), {vec({0, 2, 3})});
  expect_agrees(b, decide(b), 500, "shifted");
}

// Affine and Skolem front ends, decided end to end.
TEST(Decide, ReductionFrontEnds) {
  auto aff = affine_to_linear(rows({{2}}), vec({1}), Subspace(1, {}), vec({8}));
  auto v = decide(aff);
  EXPECT_EQ(v.result, R::Yes);
  EXPECT_EQ(v.witness, std::optional<unsigned long>(3));
  auto sk = skolem_to_orbit(vec({1, 1}), diag({1, -1}), vec({1, 1}));
  auto w = decide(sk);
  EXPECT_EQ(w.result, R::Yes);
  EXPECT_EQ(w.witness, std::optional<unsigned long>(1));
  EXPECT_EQ(decide(skolem_to_orbit(vec({1, 0}), RatMatrix::identity(2), vec({1, 0}))).result, R::No);
}
