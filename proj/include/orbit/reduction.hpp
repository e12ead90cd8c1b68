#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "orbit/algebraic.hpp"
#include "orbit/linalg.hpp"

namespace orbit {

// Does A^n x land in V for some n >= 0?
struct OrbitInstance {
  RatMatrix A;
  RatVec x;
  Subspace V;
};

// Checks shapes and x != 0; throws InvalidInput.
void validate(const OrbitInstance& inst);

nlohmann::json to_json(const OrbitInstance& inst);
// Accepts an optional "offset" (affine target V + z), folded in by affine_to_linear.
OrbitInstance orbit_instance_from_json(const nlohmann::json& j);

// Polynomial form: is M^n in span{p_i(M)}? M is the integral, invertible,
// companion-shaped restriction of the rescaled matrix to the cyclic space of
// A^shift x. Exponents n of M correspond to exponents n + shift of A.
struct MatrixPowerInstance {
  RatMatrix M;
  std::vector<RatPoly> polys;
  std::vector<std::pair<AlgebraicNumber, int>> eigen;

  // Zero-eigenvalue bookkeeping: the cyclic space of x may carry a nilpotent
  // part of length `shift`. early_witness is the smallest n < shift with
  // A^n x in V; `vanishes` means A^shift x = 0, so every n >= shift works.
  unsigned long shift = 0;
  std::optional<unsigned long> early_witness;
  bool vanishes = false;
};

nlohmann::json to_json(const MatrixPowerInstance& mp);
// Inverse of to_json; eigenvalues are recomputed from M.
MatrixPowerInstance matrix_power_from_json(const nlohmann::json& j);
// Equivalent orbit instance for a polynomial-form instance with shift 0:
// (M, e1, span{p_i(M) e1}) when M is companion shaped, otherwise the action
// of M on flattened matrices.
OrbitInstance matrix_power_to_orbit(const MatrixPowerInstance& mp);

MatrixPowerInstance reduce_orbit_to_power(const OrbitInstance& inst);

// eq(root, deriv): n(n-1)...(n-deriv+1) root^(n-deriv) = sum_t a_t p_t^(deriv)(root).
struct Equation {
  AlgebraicNumber root;
  int deriv = 0;
  std::string lhs;
  std::vector<AlgebraicNumber> rhs_coeffs;
};

struct EqSystem {
  std::vector<Equation> equations;
  size_t unknowns = 0;
};

EqSystem build_system(const MatrixPowerInstance& mp);
nlohmann::json to_json(const EqSystem& sys);
std::string lhs_tag(int deriv);

struct EigenClass {
  std::vector<std::pair<AlgebraicNumber, int>> members;
  AlgebraicNumber stem;
  // omegas[k] = members[k] / stem, a root of unity of order omega_orders[k].
  std::vector<AlgebraicNumber> omegas;
  std::vector<long> omega_orders;
  bool self_conjugate = false;
  std::optional<size_t> conjugate_partner;
};

struct ClassDecomposition {
  std::vector<EigenClass> classes;
  long L = 1;
};

// Classes of the relation "ratio is a root of unity". Self-conjugate classes
// get the common modulus as stem; paired classes get the member with the
// lexicographically smallest disc center and its partner the conjugate.
ClassDecomposition class_decomposition(const std::vector<std::pair<AlgebraicNumber, int>>& eigen);
nlohmann::json to_json(const ClassDecomposition& cd);

struct CollapsedClass {
  std::vector<Equation> collapsed;  // one per derivative level, root = stem
  AlgMatrix constraint;             // rows of B': phi(first member) - phi(other member)
};

// Replaces the class's equations, for n = r mod L, by stem equations plus
// linear constraints on the coefficients.
CollapsedClass collapse_class(const EigenClass& cls, long L, const EqSystem& system, long r);

struct SplitResult {
  std::vector<OrbitInstance> instances;  // (A^L, A^i x, V), i = 0..L-1
  std::optional<long> cap_exceeded;      // L when L > cap
  long L = 1;
};
SplitResult nonsingular_split(const OrbitInstance& inst, long cap);

// A^n x in V + z  <=>  [[A,0],[0,1]]^n (x,1) in span(V, (z,1)).
OrbitInstance affine_to_linear(const RatMatrix& A, const RatVec& x, const Subspace& V, const RatVec& z);

// x^T A^n y = 0  <=>  A^n y in span{x}^perp.
OrbitInstance skolem_to_orbit(const RatVec& xrow, const RatMatrix& A, const RatVec& y);

}  // namespace orbit
