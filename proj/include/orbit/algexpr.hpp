#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "orbit/algebraic.hpp"
#include "orbit/lograt.hpp"

namespace orbit {

// Distinct roots of a monic integral polynomial, grouped by irreducible
// factor. Expressions built on a table are rational-coefficient polynomials
// in its roots, so each Galois conjugate of an expression is the same
// expression evaluated at permuted roots within each factor.
class RootTable {
 public:
  RootTable() = default;
  // Every root must be an algebraic integer; roots must be distinct.
  explicit RootTable(std::vector<AlgebraicNumber> roots);

  size_t size() const { return roots_.size(); }
  const AlgebraicNumber& root(size_t i) const { return roots_[i]; }
  size_t factor_of(size_t i) const { return factor_[i]; }
  int factor_degree(size_t f) const { return factor_degree_[f]; }
  // Upper bound, at least 1, on the modulus of every conjugate of root i.
  const Q& conj_modulus(size_t i) const { return conj_mod_[factor_[i]]; }
  Ball ball(size_t i, long prec) const;

 private:
  std::vector<AlgebraicNumber> roots_;
  std::vector<size_t> factor_;
  std::vector<int> factor_degree_;
  std::vector<Q> conj_mod_;
};

class AlgExpr {
 public:
  enum class Op { Const, Root, Add, Sub, Mul, Neg, Pow };
  struct Node {
    Op op = Op::Const;
    Q value;                 // Const
    size_t index = 0;        // Root
    unsigned long exp = 0;   // Pow
    std::shared_ptr<const Node> a, b;
  };

  AlgExpr() : AlgExpr(Q(0)) {}
  AlgExpr(const Q& v);  // NOLINT(implicit)
  AlgExpr(long v) : AlgExpr(Q(v)) {}  // NOLINT(implicit)
  static AlgExpr root(size_t i);

  bool is_const() const { return node_->op == Op::Const; }
  const Q& const_value() const { return node_->value; }
  const Node* node() const { return node_.get(); }

  friend AlgExpr operator+(const AlgExpr& x, const AlgExpr& y);
  friend AlgExpr operator-(const AlgExpr& x, const AlgExpr& y);
  friend AlgExpr operator*(const AlgExpr& x, const AlgExpr& y);
  friend AlgExpr operator-(const AlgExpr& x);
  friend AlgExpr pow(const AlgExpr& x, unsigned long e);

 private:
  explicit AlgExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// p(root i) by Horner.
AlgExpr eval_at_root(const RatPoly& p, size_t i);

Ball eval(const AlgExpr& e, const RootTable& t, long prec);
std::set<size_t> roots_used(const AlgExpr& e);
// Exact zero test: evaluation to a precision below the smallest modulus a
// nonzero value of this degree, denominator and conjugate size can have.
bool is_zero(const AlgExpr& e, const RootTable& t);
// Bracket of |e| for nonzero e; throws DomainError when e == 0.
LogRat abs_bracket(const AlgExpr& e, const RootTable& t);
// Upper bound on |e| (cheap, no zero test).
Q abs_upper(const AlgExpr& e, const RootTable& t);
// Exact value, or nothing when an intermediate degree would exceed max_degree.
std::optional<AlgebraicNumber> materialize(const AlgExpr& e, const RootTable& t, int max_degree);

}  // namespace orbit
