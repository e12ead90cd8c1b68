#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "orbit/poly.hpp"

namespace orbit {

// Irreducible monic factors over Q with multiplicities, sorted by degree then
// coefficients. Throws InvalidInput on the zero polynomial.
std::vector<std::pair<RatPoly, int>> factor_rational_poly(const RatPoly& p);

// Irreducible factors of a primitive squarefree integer polynomial, each
// primitive with positive leading coefficient.
std::vector<ZPoly> factor_squarefree_integer(const ZPoly& f);

bool is_irreducible(const RatPoly& p);

namespace modp {

using Vec = std::vector<uint64_t>;

// Polynomials over GF(p) for p < 2^32, lowest degree first, trimmed.
void trim(Vec& a);
Vec from_z(const ZPoly& f, uint64_t p);
Vec mul(const Vec& a, const Vec& b, uint64_t p);
Vec sub(const Vec& a, const Vec& b, uint64_t p);
Vec rem(const Vec& a, const Vec& b, uint64_t p);
Vec quo(const Vec& a, const Vec& b, uint64_t p);
Vec gcd(Vec a, Vec b, uint64_t p);
Vec make_monic(const Vec& a, uint64_t p);
uint64_t inv(uint64_t a, uint64_t p);

// Complete factorization of a monic squarefree polynomial into monic
// irreducibles. Deterministic for a fixed seed.
std::vector<Vec> factor_squarefree(const Vec& f, uint64_t p, uint64_t seed = 1);

// Degrees of irreducible factors via distinct-degree factorization only.
std::vector<int> factor_degrees(const Vec& f, uint64_t p);

}  // namespace modp

}  // namespace orbit
