#pragma once

#include <climits>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orbit/ball.hpp"
#include "orbit/factor.hpp"
#include "orbit/isolate.hpp"
#include "orbit/poly.hpp"

namespace orbit {

// An algebraic number given by its monic minimal polynomial over Q and a disc
// containing exactly that root and no other root of the polynomial. Values
// are immutable; refinement swaps a shared cached disc under a lock.
class AlgebraicNumber {
 public:
  AlgebraicNumber() : AlgebraicNumber(Q(0)) {}
  AlgebraicNumber(const Q& q);  // NOLINT(implicit)
  AlgebraicNumber(long v) : AlgebraicNumber(Q(v)) {}  // NOLINT(implicit)

  // Trusted constructor: min_poly monic irreducible, box isolating one root
  // with radius < separation/4. Reals must have center_im == 0.
  static AlgebraicNumber from_isolated(const RatPoly& min_poly, const ComplexBox& box);

  const RatPoly& min_poly() const { return min_poly_; }
  const ComplexBox& box() const { return box_; }
  int degree() const { return min_poly_.degree(); }
  const Z& height() const { return height_; }
  const ZPoly& integer_poly() const { return zpoly_; }
  const Q& separation() const { return sep_; }

  bool is_rational() const { return degree() == 1; }
  Q rational_value() const;  // requires is_rational()
  bool is_zero() const { return is_rational() && min_poly_.c[0] == 0; }
  bool is_real() const { return box_.center_im == 0; }
  bool is_algebraic_integer() const;

  // Ball of radius <= 2^-prec containing the number.
  Ball ball(long prec) const;
  // Refined disc of radius <= eps.
  ComplexBox refined(const Q& eps) const;

  std::string str() const;

 private:
  RatPoly min_poly_;
  ComplexBox box_;
  ZPoly zpoly_;
  Z height_;
  Q sep_;
  struct Cache {
    std::mutex m;
    ComplexBox best;
  };
  std::shared_ptr<Cache> cache_;
};

enum class BinOp { Add, Sub, Mul, Div };

// Distinct roots of p, each with its irreducible factor as min poly. Sorted
// by factor (degree then coefficients), then by (re, im).
std::vector<AlgebraicNumber> isolate_roots(const RatPoly& p);

AlgebraicNumber alg_binop(BinOp kind, const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
AlgebraicNumber operator-(const AlgebraicNumber& a);
AlgebraicNumber alg_inverse(const AlgebraicNumber& a);
AlgebraicNumber alg_pow(const AlgebraicNumber& a, unsigned long n);

// Positive square root of a positive real algebraic number.
AlgebraicNumber alg_positive_sqrt(const AlgebraicNumber& r);

AlgebraicNumber alg_eval_poly(const RatPoly& p, const AlgebraicNumber& a);
bool alg_equals(const AlgebraicNumber& a, const AlgebraicNumber& b);

// (order, phase) with a = exp(2 pi i phase / order), gcd(phase, order) = 1.
std::optional<std::pair<long, long>> root_of_unity_check(const AlgebraicNumber& a);
RatPoly cyclotomic(long k);
long euler_phi(long k);

std::vector<AlgebraicNumber> conjugates(const AlgebraicNumber& a);
AlgebraicNumber complex_conjugate(const AlgebraicNumber& a);
AlgebraicNumber real_part(const AlgebraicNumber& a);
// a * conj(a)
AlgebraicNumber abs_squared(const AlgebraicNumber& a);
// -1, 0, 1 for |a| <, =, > |b|.
int abs_compare(const AlgebraicNumber& a, const AlgebraicNumber& b);
// Sign of a - b for real a, b.
int real_compare(const AlgebraicNumber& a, const AlgebraicNumber& b);

// Product of the conjugates: (-1)^n c_0 / c_n of the minimal polynomial.
Q abs_norm(const AlgebraicNumber& a);

constexpr long kInfiniteValuation = LONG_MAX;
long norm_valuation(const AlgebraicNumber& a, const Z& p);

ComplexBox refine(const AlgebraicNumber& a, const Q& eps);

// Interval evaluation of a rational polynomial on a ball.
Ball ball_eval(const RatPoly& p, const Ball& x, long prec);

// Canonical number among the roots of f (nonzero) that equals the value
// enclosed by approx(prec) for every prec. approx must shrink to a point.
AlgebraicNumber identify_root(const RatPoly& f, const std::function<Ball(long)>& approx);

nlohmann::json to_json(const AlgebraicNumber& a);
AlgebraicNumber algebraic_from_json(const nlohmann::json& j);

}  // namespace orbit
