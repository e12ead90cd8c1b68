#pragma once

#include <json.hpp>

#include "orbit/matrix.hpp"

namespace orbit {

// Rationals travel as "p/q" strings; integers are also accepted on input.
nlohmann::json q_to_json(const Q& q);
Q q_from_json(const nlohmann::json& j);

nlohmann::json vec_to_json(const RatVec& v);
RatVec vec_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const RatMatrix& m);
RatMatrix matrix_from_json(const nlohmann::json& j);

// Coefficient list, lowest degree first.
nlohmann::json poly_to_json(const RatPoly& p);
RatPoly poly_from_json(const nlohmann::json& j);

}  // namespace orbit
