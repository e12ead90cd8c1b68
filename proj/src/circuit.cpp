#include "orbit/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace orbit {

namespace {

long bit_bound(const Z& v) { return v == 0 ? 0 : static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)); }

Z det_small(const std::vector<std::vector<Z>>& m) {
  size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  Z acc = 0;
  for (size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<Z>> sub;
    for (size_t i = 1; i < n; ++i) {
      std::vector<Z> row;
      for (size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      sub.push_back(row);
    }
    Z t = m[0][j] * det_small(sub);
    acc += (j % 2 ? -t : t);
  }
  return acc;
}

std::vector<Z> integral_scaled(const RatVec& v) {
  Z c = 1;
  for (auto& q : v) c = lcm(c, q.get_den());
  std::vector<Z> out;
  for (auto& q : v) {
    Q s = q * Q(c);
    out.push_back(s.get_num());
  }
  return out;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

void subsets(size_t n, size_t k, size_t start, std::vector<size_t>& cur, std::vector<std::vector<size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

size_t SLP::push(Node n, long mag) {
  nodes.push_back(std::move(n));
  mag_.push_back(mag);
  if (Q(mag) > magnitude_log2) magnitude_log2 = mag;
  return nodes.size() - 1;
}

size_t SLP::constant(const Z& v) {
  Node n;
  n.op = Op::Const;
  n.value = v;
  return push(n, bit_bound(v));
}

size_t SLP::input(size_t index) {
  if (index >= inputs.size()) throw InvalidInput("SLP input index out of range");
  Node n;
  n.op = Op::Input;
  n.a = index;
  return push(n, bit_bound(inputs[index]));
}

size_t SLP::add(size_t i, size_t j) {
  if (i >= nodes.size() || j >= nodes.size()) throw InvalidInput("SLP operand out of range");
  Node n;
  n.op = Op::Add;
  n.a = i;
  n.b = j;
  return push(n, std::max(mag_[i], mag_[j]) + 1);
}

size_t SLP::sub(size_t i, size_t j) {
  if (i >= nodes.size() || j >= nodes.size()) throw InvalidInput("SLP operand out of range");
  Node n;
  n.op = Op::Sub;
  n.a = i;
  n.b = j;
  return push(n, std::max(mag_[i], mag_[j]) + 1);
}

size_t SLP::mul(size_t i, size_t j) {
  if (i >= nodes.size() || j >= nodes.size()) throw InvalidInput("SLP operand out of range");
  Node n;
  n.op = Op::Mul;
  n.a = i;
  n.b = j;
  return push(n, mag_[i] + mag_[j]);
}

SLP power_membership_slp(const RatMatrix& A, const RatVec& x, const std::vector<RatVec>& V_basis,
                         unsigned long n) {
  size_t d = A.rows;
  if (!A.square() || x.size() != d) throw InvalidInput("power_membership_slp dimension mismatch");
  for (auto& q : A.a)
    if (!is_integer(q)) throw InvalidInput("power_membership_slp needs an integral matrix");
  for (auto& v : V_basis)
    if (v.size() != d) throw InvalidInput("target basis vector has the wrong length");
  size_t k = V_basis.size();

  SLP slp;
  auto xs = integral_scaled(x);
  std::vector<std::vector<Z>> ys;
  for (auto& v : V_basis) ys.push_back(integral_scaled(v));

  std::vector<size_t> vec(d), pw(d * d);
  for (size_t i = 0; i < d; ++i) vec[i] = slp.constant(xs[i]);
  for (size_t i = 0; i < d * d; ++i) pw[i] = slp.constant(A.a[i].get_num());
  auto matvec = [&](const std::vector<size_t>& m, const std::vector<size_t>& v) {
    std::vector<size_t> out(d);
    for (size_t i = 0; i < d; ++i) {
      size_t acc = slp.mul(m[i * d], v[0]);
      for (size_t j = 1; j < d; ++j) acc = slp.add(acc, slp.mul(m[i * d + j], v[j]));
      out[i] = acc;
    }
    return out;
  };
  auto matmul = [&](const std::vector<size_t>& a, const std::vector<size_t>& b) {
    std::vector<size_t> out(d * d);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) {
        size_t acc = slp.mul(a[i * d], b[j]);
        for (size_t l = 1; l < d; ++l) acc = slp.add(acc, slp.mul(a[i * d + l], b[l * d + j]));
        out[i * d + j] = acc;
      }
    return out;
  };
  for (unsigned long e = n; e; e >>= 1) {
    if (e & 1) vec = matvec(pw, vec);
    if (e > 1) pw = matmul(pw, pw);
  }

  std::vector<std::vector<size_t>> subs;
  std::vector<size_t> cur;
  subsets(d, k + 1, 0, cur, subs);
  for (auto& s : subs) {
    // Expand det[v_S | Y_S] along the first column.
    std::optional<size_t> acc;
    for (size_t i = 0; i <= k; ++i) {
      std::vector<std::vector<Z>> minor;
      for (size_t r = 0; r <= k; ++r) {
        if (r == i) continue;
        std::vector<Z> row;
        for (size_t c = 0; c < k; ++c) row.push_back(ys[c][s[r]]);
        minor.push_back(row);
      }
      Z cof = det_small(minor);
      if (cof == 0) continue;
      if (i % 2) cof = -cof;
      size_t term = slp.mul(slp.constant(cof), vec[s[i]]);
      acc = acc ? slp.add(*acc, term) : term;
    }
    slp.outputs.push_back(acc ? *acc : slp.constant(0));
  }
  return slp;
}

std::vector<uint64_t> eval_mod(const SLP& slp, uint64_t p) {
  std::vector<uint64_t> val(slp.nodes.size());
  for (size_t i = 0; i < slp.nodes.size(); ++i) {
    const auto& nd = slp.nodes[i];
    switch (nd.op) {
      case SLP::Op::Const:
        val[i] = mpz_fdiv_ui(nd.value.get_mpz_t(), p);
        break;
      case SLP::Op::Input:
        val[i] = mpz_fdiv_ui(slp.inputs[nd.a].get_mpz_t(), p);
        break;
      case SLP::Op::Add:
        val[i] = static_cast<uint64_t>((static_cast<unsigned __int128>(val[nd.a]) + val[nd.b]) % p);
        break;
      case SLP::Op::Sub:
        val[i] = static_cast<uint64_t>((static_cast<unsigned __int128>(val[nd.a]) + p - val[nd.b]) % p);
        break;
      case SLP::Op::Mul:
        val[i] = mulmod(val[nd.a], val[nd.b], p);
        break;
    }
  }
  std::vector<uint64_t> out;
  for (auto o : slp.outputs) out.push_back(val[o]);
  return out;
}

std::vector<Z> eval_exact(const SLP& slp) {
  std::vector<Z> val(slp.nodes.size());
  for (size_t i = 0; i < slp.nodes.size(); ++i) {
    const auto& nd = slp.nodes[i];
    switch (nd.op) {
      case SLP::Op::Const: val[i] = nd.value; break;
      case SLP::Op::Input: val[i] = slp.inputs[nd.a]; break;
      case SLP::Op::Add: val[i] = val[nd.a] + val[nd.b]; break;
      case SLP::Op::Sub: val[i] = val[nd.a] - val[nd.b]; break;
      case SLP::Op::Mul: val[i] = val[nd.a] * val[nd.b]; break;
    }
  }
  std::vector<Z> out;
  for (auto o : slp.outputs) out.push_back(val[o]);
  return out;
}

uint64_t random_word_prime(std::mt19937_64& rng) {
  const uint64_t lo = uint64_t(1) << 61;
  Z cand;
  for (;;) {
    uint64_t v = lo | (rng() & (lo - 1)) | 1;
    mpz_set_ui(cand.get_mpz_t(), v);
    // 4^-40 per composite; folded into the budget by the caller's margin.
    if (mpz_probab_prime_p(cand.get_mpz_t(), 40)) return v;
  }
}

ZeroTestResult prob_zero_test(const SLP& slp, const Q& error_budget, uint64_t seed) {
  if (error_budget <= 0 || error_budget >= 1) throw InvalidInput("error budget must lie in (0, 1)");
  // A nonzero output below 2^B has at most B/61 prime factors >= 2^61, and the
  // window [2^61, 2^62) holds more than 2^54 primes.
  double bits = slp.magnitude_log2.get_d();
  double outs = std::max<size_t>(1, slp.outputs.size());
  double miss_log2 = std::log2(outs) + std::log2(bits / 61.0 + 1.0) - 54.0;
  double budget_log2 = std::log2(error_budget.get_d()) - 1.0;
  ZeroTestResult res;
  if (miss_log2 >= -1.0) {
    // Too large for the sampling argument to pay off; evaluate exactly.
    auto vals = eval_exact(slp);
    for (size_t i = 0; i < vals.size(); ++i)
      if (vals[i] != 0) return ZeroTestResult{false, i};
    return res;
  }
  long trials = std::max<long>(1, static_cast<long>(std::ceil(budget_log2 / miss_log2)));
  std::mt19937_64 rng(seed);
  for (long t = 0; t < trials; ++t) {
    uint64_t p = random_word_prime(rng);
    auto vals = eval_mod(slp, p);
    for (size_t i = 0; i < vals.size(); ++i)
      if (vals[i] != 0) return ZeroTestResult{false, i};
  }
  return res;
}

bool exact_membership(const RatMatrix& A, const RatVec& x, const Subspace& V, unsigned long n, unsigned long cap) {
  if (!A.square() || x.size() != A.rows || V.ambient_dim != A.rows)
    throw InvalidInput("exact_membership dimension mismatch");
  if (n > cap) throw DomainError("exact membership exponent exceeds the cap");
  RatVec v = x;
  RatMatrix p = A;
  for (unsigned long e = n; e; e >>= 1) {
    if (e & 1) v = p * v;
    if (e > 1) p = p * p;
  }
  return V.contains(v);
}

std::string dump(const SLP& slp) {
  std::ostringstream os;
  for (size_t i = 0; i < slp.nodes.size(); ++i) {
    const auto& nd = slp.nodes[i];
    os << "t" << i << " = ";
    switch (nd.op) {
      case SLP::Op::Const: os << "CONST " << nd.value.get_str(); break;
      case SLP::Op::Input: os << "INPUT " << nd.a; break;
      case SLP::Op::Add: os << "ADD t" << nd.a << " t" << nd.b; break;
      case SLP::Op::Sub: os << "SUB t" << nd.a << " t" << nd.b; break;
      case SLP::Op::Mul: os << "MUL t" << nd.a << " t" << nd.b; break;
    }
    os << "\n";
  }
  for (auto o : slp.outputs) os << "OUT t" << o << "\n";
  return os.str();
}

}  // namespace orbit
