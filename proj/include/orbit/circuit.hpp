#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "orbit/linalg.hpp"

namespace orbit {

// Division-free straight-line program over the integers.
struct SLP {
  enum class Op { Const, Input, Add, Sub, Mul };
  struct Node {
    Op op = Op::Const;
    Z value;         // Const
    size_t a = 0;    // Input index, or first operand
    size_t b = 0;    // second operand
  };

  std::vector<Node> nodes;
  std::vector<size_t> outputs;
  std::vector<Z> inputs;     // values bound to Input nodes
  Q magnitude_log2 = 0;      // log2 of an upper bound on every |node value|

  size_t constant(const Z& v);
  size_t input(size_t index);
  size_t add(size_t i, size_t j);
  size_t sub(size_t i, size_t j);
  size_t mul(size_t i, size_t j);

 private:
  std::vector<long> mag_;  // per-node log2 bounds
  size_t push(Node n, long mag);
};

// For every (k+1)-subset of coordinates, the determinant of
// [A^n x | y_1 | ... | y_k] restricted to those rows. All outputs vanish iff
// A^n x lies in V. A must be integral; x and the basis are scaled to integers.
SLP power_membership_slp(const RatMatrix& A, const RatVec& x, const std::vector<RatVec>& V_basis,
                         unsigned long n);

std::vector<uint64_t> eval_mod(const SLP& slp, uint64_t p);
// Exact evaluation, for tests and small circuits.
std::vector<Z> eval_exact(const SLP& slp);

struct ZeroTestResult {
  bool all_zero = true;
  size_t nonzero_output = 0;
};
// One-sided: a nonzero verdict is always right; AllZero is wrong with
// probability at most error_budget.
ZeroTestResult prob_zero_test(const SLP& slp, const Q& error_budget, uint64_t seed = 1);

// Exact A^n x in V by repeated squaring. Refuses exponents above cap.
bool exact_membership(const RatMatrix& A, const RatVec& x, const Subspace& V, unsigned long n,
                      unsigned long cap = 10000000);

// "t3 = MUL t1 t2" listing followed by the output nodes.
std::string dump(const SLP& slp);

// Random prime in [2^61, 2^62).
uint64_t random_word_prime(std::mt19937_64& rng);

}  // namespace orbit
