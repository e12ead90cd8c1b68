#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orbit/algebraic.hpp"
#include "orbit/lograt.hpp"

namespace orbit {

// What a lemma says about the exponents n >= 0 that can solve an equation.
struct BoundResult {
  enum class Kind { NoSolution, Candidates, Congruences, SearchBound, Unknown };
  Kind kind = Kind::Unknown;
  std::vector<Z> candidates;                       // Candidates: the only possible n
  std::vector<std::pair<long, long>> congruences;  // Congruences: n = t mod m for some listed (t, m)
  Q log2_bound = 0;                                // SearchBound: every solution n < 2^log2_bound
  std::optional<Z> exact;                          // SearchBound: every solution n < exact
  std::string reason;                              // Unknown

  static BoundResult no_solution();
  static BoundResult of_candidates(std::vector<Z> ns);  // empty set collapses to NoSolution
  static BoundResult of_congruences(std::vector<std::pair<long, long>> cs);
  // All solutions lie below m (m <= 0 means none).
  static BoundResult search_bound(const Z& m);
  static BoundResult unknown(std::string why);

  // Does the result allow n as a solution?
  bool permits(const Z& n) const;
  // Exclusive upper limit on solutions, when there is one.
  std::optional<Z> limit() const;
};

std::string kind_name(BoundResult::Kind k);
nlohmann::json to_json(const BoundResult& b);

// Tightest sound combination: solutions of the equation lie below m or are
// one of the extra values.
BoundResult fold_candidates(const Z& m, const std::vector<Z>& extra);

// {n : alpha^n = beta}.
BoundResult power_solve(const AlgebraicNumber& alpha, const AlgebraicNumber& beta);

struct BlanksbyResult {
  AlgebraicNumber conjugate;
  Q modulus_lower;
};
// Conjugate of an algebraic integer (not a root of unity) whose modulus
// exceeds 1 + 1/(30 n^2 ln(6n)); ln is replaced by a rational upper bound.
BlanksbyResult blanksby_conjugate(const AlgebraicNumber& alpha);

// ln c for the linear-forms-in-logarithms constant c = (16 n d)^(200 n).
LogRat baker_constant(unsigned long n, unsigned long d);

// Solutions of lambda^n = phi(n) + b with |lambda| = 1 and |phi(n)| <= a chi^n.
BoundResult baker_circle_bound(const AlgebraicNumber& lambda, const AlgebraicNumber& b, const Q& a, const Q& chi);

// Solutions of a l1^n = b l2^n + c + phi(n), |l1| = |l2| = 1, 0 < |phi(n)| <= w chi^n.
BoundResult two_circles_bound(const AlgebraicNumber& l1, const AlgebraicNumber& l2, const AlgebraicNumber& a,
                              const AlgebraicNumber& b, const AlgebraicNumber& c, const Q& w, const Q& chi);

// ln of the p-adic linear-forms bound
// (16(n+1)d)^(12(n+1)) (p^d / ln p) Omega (ln B)^2, Omega the product of ln heights.
LogRat vdp_bound(unsigned long n_terms, unsigned long d, const Z& p, const std::vector<Q>& heights, const Q& B);

// A a^n + B b^n + C c^n = 0.
BoundResult skolem3(const AlgebraicNumber& A, const AlgebraicNumber& B, const AlgebraicNumber& C,
                    const AlgebraicNumber& alpha, const AlgebraicNumber& beta, const AlgebraicNumber& gamma);

// (A + B n) a^n + C b^n = 0.
BoundResult skolem3_repeated(const AlgebraicNumber& A, const AlgebraicNumber& B, const AlgebraicNumber& C,
                             const AlgebraicNumber& alpha, const AlgebraicNumber& beta);

// Depth-4 shapes: pattern lists root multiplicities in order, coefficients
// run over the terms' polynomial coefficients from the constant up:
//   (1,1,1,1): A a^n + B b^n + C c^n + D d^n
//   (2,1,1):   (A + B n) a^n + C b^n + D c^n
//   (2,2):     (A + B n) a^n + (C + D n) b^n
//   (3,1):     (A + B n + C n^2) a^n + D b^n
//   (4):       (A + B n + C n^2 + D n^3) a^n
BoundResult skolem4(const std::vector<int>& pattern, const std::vector<AlgebraicNumber>& coeffs,
                    const std::vector<AlgebraicNumber>& roots);

// Newton polygon of f at p: valuations (v(p) = 1) of the roots of f with
// multiplicities, ascending.
std::vector<std::pair<Q, int>> root_valuations(const RatPoly& f, const Z& p);

}  // namespace orbit
