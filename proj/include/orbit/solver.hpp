#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orbit/bounds.hpp"
#include "orbit/reduction.hpp"

namespace orbit {

struct SolverConfig {
  unsigned long search_cap = 1000000;        // largest exhaustive witness search
  unsigned long residue_work_cap = 1000000;  // residues times tuples examined
  Q error_budget = make_q(Z(1), Z(1) << 64);
  bool use_prob_membership = true;
  uint64_t seed = 1;
};

// Target dimension outside the supported range.
struct UnsupportedDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Verdict {
  enum class Result { Yes, No, Unknown };
  Result result = Result::Unknown;
  std::optional<unsigned long> witness;  // smallest witness found
  // Yes with the complete solution set {t + m k : k >= 0}.
  std::optional<std::pair<unsigned long, unsigned long>> congruence;
  std::optional<Q> log2_bound;  // Unknown: every solution n < 2^log2_bound
  unsigned long searched_to = 0;  // every n < searched_to was examined
  std::string reason;
  std::vector<std::string> case_trace;
  // Bounds harvested along the way, labelled by where they came from.
  std::vector<std::pair<std::string, BoundResult>> bounds;
};

std::string result_name(Verdict::Result r);
nlohmann::json to_json(const Verdict& v);

// Full pipeline. Throws UnsupportedDimension unless 1 <= dim(V) <= 3.
Verdict decide(const OrbitInstance& inst, const SolverConfig& cfg = {});
// Polynomial-form entry point; exponents are those of M (shift added back).
Verdict decide_power(const MatrixPowerInstance& mp, const SolverConfig& cfg = {});

// One to three target polynomials.
Verdict solve_1d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg);
Verdict solve_2d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg);
Verdict solve_3d(const MatrixPowerInstance& mp, const EqSystem& sys, const SolverConfig& cfg);

// Is M^n in span{p_i(M)}? Exact.
bool power_member(const MatrixPowerInstance& mp, unsigned long n);

// Smallest n <= N with A^n x in V. Refuses N (d^2) above 10^7 work units.
std::optional<unsigned long> brute_force(const OrbitInstance& inst, unsigned long N);
bool verify_witness(const OrbitInstance& inst, unsigned long n);

// First solution of x = t_i mod m_i for all i, as (t, lcm), or nothing.
std::optional<std::pair<Z, Z>> crt_merge(const std::vector<std::pair<Z, Z>>& congruences);

}  // namespace orbit
