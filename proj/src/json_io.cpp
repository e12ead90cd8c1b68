#include "orbit/json_io.hpp"

namespace orbit {

using nlohmann::json;

json q_to_json(const Q& q) { return to_string(q); }

Q q_from_json(const json& j) {
  if (j.is_string()) return parse_q(j.get<std::string>());
  if (j.is_number_integer()) return Q(Z(std::to_string(j.get<long long>())));
  throw InvalidInput("expected a rational as \"p/q\" string or integer");
}

json vec_to_json(const RatVec& v) {
  json out = json::array();
  for (auto& q : v) out.push_back(q_to_json(q));
  return out;
}

RatVec vec_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of rationals");
  RatVec v;
  for (auto& e : j) v.push_back(q_from_json(e));
  return v;
}

json matrix_to_json(const RatMatrix& m) {
  json out = json::array();
  for (size_t i = 0; i < m.rows; ++i) out.push_back(vec_to_json(m.row(i)));
  return out;
}

RatMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("expected a nonempty array of rows");
  std::vector<RatVec> rows;
  for (auto& r : j) rows.push_back(vec_from_json(r));
  for (auto& r : rows)
    if (r.size() != rows[0].size() || r.empty()) throw InvalidInput("ragged or empty matrix rows");
  return RatMatrix::from_rows(rows);
}

json poly_to_json(const RatPoly& p) { return vec_to_json(p.c); }

RatPoly poly_from_json(const json& j) { return RatPoly(vec_from_json(j)); }

}  // namespace orbit
