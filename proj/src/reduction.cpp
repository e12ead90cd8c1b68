#include "orbit/reduction.hpp"

#include <algorithm>
#include <numeric>

#include "orbit/circuit.hpp"
#include "orbit/json_io.hpp"

namespace orbit {

using nlohmann::json;

void validate(const OrbitInstance& inst) {
  const auto& A = inst.A;
  if (A.rows == 0 || !A.square()) throw InvalidInput("matrix must be square and nonempty");
  if (inst.x.size() != A.rows) throw InvalidInput("point length does not match the matrix");
  if (inst.V.ambient_dim != A.rows) throw InvalidInput("target space lives in the wrong dimension");
  if (is_zero_vec(inst.x)) throw InvalidInput("point must be nonzero");
}

json to_json(const OrbitInstance& inst) {
  json basis = json::array();
  for (auto& b : inst.V.basis) basis.push_back(vec_to_json(b));
  return {{"matrix", matrix_to_json(inst.A)}, {"point", vec_to_json(inst.x)}, {"target_basis", basis}};
}

OrbitInstance orbit_instance_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("instance must be a JSON object");
  for (const char* key : {"matrix", "point", "target_basis"})
    if (!j.contains(key)) throw InvalidInput(std::string("instance is missing \"") + key + "\"");
  RatMatrix A = matrix_from_json(j.at("matrix"));
  RatVec x = vec_from_json(j.at("point"));
  if (!j.at("target_basis").is_array()) throw InvalidInput("target_basis must be an array");
  std::vector<RatVec> basis;
  for (auto& b : j.at("target_basis")) {
    basis.push_back(vec_from_json(b));
    if (basis.back().size() != A.rows) throw InvalidInput("target basis vector has the wrong length");
  }
  Subspace V(A.rows, basis);
  OrbitInstance inst{A, x, V};
  if (j.contains("offset") && !j.at("offset").is_null()) {
    RatVec z = vec_from_json(j.at("offset"));
    if (z.size() != A.rows) throw InvalidInput("offset has the wrong length");
    inst = affine_to_linear(A, x, V, z);
  }
  validate(inst);
  return inst;
}

namespace {

json eigen_to_json(const std::vector<std::pair<AlgebraicNumber, int>>& eigen) {
  json out = json::array();
  for (auto& [a, m] : eigen) out.push_back({{"value", to_json(a)}, {"mul", m}});
  return out;
}

bool companion_shaped(const RatMatrix& m) {
  if (!m.square()) return false;
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j + 1 < m.cols; ++j)
      if (m(i, j) != (i == j + 1 ? 1 : 0)) return false;
  return true;
}

}  // namespace

json to_json(const MatrixPowerInstance& mp) {
  json polys = json::array();
  for (auto& p : mp.polys) polys.push_back(poly_to_json(p));
  json out = {{"kind", "matrix_power"},
              {"matrix", mp.M.rows ? matrix_to_json(mp.M) : json::array()},
              {"polys", polys},
              {"eigenvalues", eigen_to_json(mp.eigen)},
              {"shift", mp.shift},
              {"vanishes", mp.vanishes}};
  out["early_witness"] = mp.early_witness ? json(*mp.early_witness) : json(nullptr);
  return out;
}

MatrixPowerInstance matrix_power_from_json(const json& j) {
  if (!j.is_object() || !j.contains("matrix") || !j.contains("polys"))
    throw InvalidInput("matrix power instance needs \"matrix\" and \"polys\"");
  MatrixPowerInstance mp;
  if (!j.at("matrix").empty()) mp.M = matrix_from_json(j.at("matrix"));
  if (!mp.M.square()) throw InvalidInput("matrix must be square");
  if (!j.at("polys").is_array()) throw InvalidInput("polys must be an array");
  for (auto& p : j.at("polys")) mp.polys.push_back(poly_from_json(p));
  if (j.contains("shift")) mp.shift = j.at("shift").get<unsigned long>();
  if (j.contains("vanishes")) mp.vanishes = j.at("vanishes").get<bool>();
  if (j.contains("early_witness") && !j.at("early_witness").is_null())
    mp.early_witness = j.at("early_witness").get<unsigned long>();
  if (mp.M.rows == 0 && !mp.vanishes) throw InvalidInput("empty matrix only allowed for a vanishing orbit");
  if (mp.M.rows) mp.eigen = matrix_eigenvalues(mp.M);
  return mp;
}

OrbitInstance matrix_power_to_orbit(const MatrixPowerInstance& mp) {
  const RatMatrix& M = mp.M;
  size_t k = M.rows;
  if (k == 0) throw InvalidInput("matrix power instance has no matrix");
  if (companion_shaped(M)) {
    // M^i e1 = e_{i+1}, so p(M) e1 is the coefficient vector of p.
    std::vector<RatVec> basis;
    for (auto& p : mp.polys) {
      RatVec v = (poly_eval(p, M)).col(0);
      basis.push_back(v);
    }
    RatVec e1(k, Q(0));
    e1[0] = 1;
    return OrbitInstance{M, e1, Subspace(k, basis)};
  }
  RatMatrix op = kronecker(M, RatMatrix::identity(k));
  std::vector<RatVec> basis;
  for (auto& p : mp.polys) basis.push_back(poly_eval(p, M).a);
  return OrbitInstance{op, RatMatrix::identity(k).a, Subspace(k * k, basis)};
}

MatrixPowerInstance reduce_orbit_to_power(const OrbitInstance& inst) {
  validate(inst);
  RatMatrix A = rescale_to_integer(inst.A);
  MatrixPowerInstance mp;

  // b_0 = ... = b_{z-1} = 0 in the Krylov relation means x^z divides the
  // minimal polynomial of x; peel that nilpotent part off first.
  KrylovResult k0 = krylov_reduce(A, inst.x);
  size_t m0 = k0.M.rows;
  size_t z = 0;
  while (z < m0 && k0.M(z, m0 - 1) == 0) ++z;
  RatVec y = inst.x;
  for (size_t n = 0; n < z; ++n) {
    if (!mp.early_witness && inst.V.contains(y)) mp.early_witness = n;
    y = A * y;
  }
  mp.shift = z;
  if (is_zero_vec(y)) {
    mp.vanishes = true;
    return mp;
  }

  KrylovResult k = z ? krylov_reduce(A, y) : k0;
  mp.M = k.M;
  size_t d = A.rows;
  std::vector<RatVec> dcols;
  for (size_t j = 0; j < k.D.cols; ++j) dcols.push_back(k.D.col(j));
  Subspace U(d, dcols);
  Subspace W = subspace_intersect(U, inst.V);
  std::vector<RatMatrix> ts;
  for (auto& w : W.basis) {
    RatVec wp;
    if (!solve(k.D, w, wp)) throw std::logic_error("intersection vector outside the Krylov space");
    ts.push_back(target_matrices(k.M, wp));
  }
  mp.polys = intersect_to_polys(ts, k.M);
  mp.eigen = matrix_eigenvalues(k.M);
  return mp;
}

std::string lhs_tag(int deriv) {
  std::string s;
  for (int i = 0; i < deriv; ++i) s += i == 0 ? "n" : "*(n-" + std::to_string(i) + ")";
  if (deriv > 0) s += "*";
  s += deriv == 0 ? "alpha^n" : "alpha^(n-" + std::to_string(deriv) + ")";
  return s;
}

EqSystem build_system(const MatrixPowerInstance& mp) {
  EqSystem sys;
  sys.unknowns = mp.polys.size();
  for (auto& [alpha, mul] : mp.eigen) {
    std::vector<RatPoly> ders = mp.polys;
    for (int j = 0; j < mul; ++j) {
      Equation e;
      e.root = alpha;
      e.deriv = j;
      e.lhs = lhs_tag(j);
      for (auto& p : ders) e.rhs_coeffs.push_back(alg_eval_poly(p, alpha));
      sys.equations.push_back(std::move(e));
      for (auto& p : ders) p = p.derivative();
    }
  }
  return sys;
}

json to_json(const EqSystem& sys) {
  json eqs = json::array();
  for (auto& e : sys.equations) {
    json rhs = json::array();
    for (auto& c : e.rhs_coeffs) rhs.push_back(to_json(c));
    eqs.push_back({{"root", to_json(e.root)}, {"deriv", e.deriv}, {"lhs", e.lhs}, {"rhs_coeffs", rhs}});
  }
  return {{"unknowns", sys.unknowns}, {"equations", eqs}};
}

namespace {

bool ratio_is_root_of_unity(const AlgebraicNumber& a, const AlgebraicNumber& b, long* order) {
  if (abs_compare(a, b) != 0) return false;
  auto r = root_of_unity_check(a / b);
  if (!r) return false;
  if (order) *order = r->first;
  return true;
}

bool lex_less(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  const auto& x = a.box();
  const auto& y = b.box();
  if (x.center_re != y.center_re) return x.center_re < y.center_re;
  return x.center_im < y.center_im;
}

}  // namespace

ClassDecomposition class_decomposition(const std::vector<std::pair<AlgebraicNumber, int>>& eigen) {
  size_t n = eigen.size();
  for (auto& [a, m] : eigen)
    if (a.is_zero()) throw InvalidInput("class decomposition needs nonzero eigenvalues");
  std::vector<size_t> cls(n);
  std::iota(cls.begin(), cls.end(), 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < i; ++j)
      if (cls[j] == j && ratio_is_root_of_unity(eigen[i].first, eigen[j].first, nullptr)) {
        cls[i] = j;
        break;
      }
  std::vector<size_t> heads;
  for (size_t i = 0; i < n; ++i)
    if (cls[i] == i) heads.push_back(i);

  ClassDecomposition cd;
  for (size_t h : heads) {
    EigenClass c;
    for (size_t i = 0; i < n; ++i)
      if (cls[i] == h) c.members.push_back(eigen[i]);
    cd.classes.push_back(std::move(c));
  }
  // Conjugation acts on classes.
  auto class_of = [&](const AlgebraicNumber& a) -> size_t {
    for (size_t c = 0; c < cd.classes.size(); ++c)
      for (auto& [m, mul] : cd.classes[c].members)
        if (alg_equals(m, a)) return c;
    throw std::logic_error("conjugate eigenvalue missing from the spectrum");
  };
  for (size_t c = 0; c < cd.classes.size(); ++c) {
    size_t p = class_of(complex_conjugate(cd.classes[c].members[0].first));
    cd.classes[c].self_conjugate = p == c;
    if (p != c) cd.classes[c].conjugate_partner = p;
  }
  for (size_t c = 0; c < cd.classes.size(); ++c) {
    auto& cl = cd.classes[c];
    if (cl.self_conjugate) {
      cl.stem = alg_positive_sqrt(abs_squared(cl.members[0].first));
    } else {
      size_t p = *cl.conjugate_partner;
      const AlgebraicNumber* best = nullptr;
      for (size_t q : {c, p})
        for (auto& [m, mul] : cd.classes[q].members)
          if (!best || lex_less(m, *best)) best = &m;
      bool mine = false;
      for (auto& [m, mul] : cl.members)
        if (alg_equals(m, *best)) mine = true;
      cl.stem = mine ? *best : complex_conjugate(*best);
    }
    for (auto& [m, mul] : cl.members) {
      AlgebraicNumber w = m / cl.stem;
      auto r = root_of_unity_check(w);
      if (!r) throw std::logic_error("class member is not a root-of-unity multiple of the stem");
      cl.omegas.push_back(w);
      cl.omega_orders.push_back(r->first);
      cd.L = std::lcm(cd.L, r->first);
    }
  }
  return cd;
}

json to_json(const ClassDecomposition& cd) {
  json classes = json::array();
  for (auto& c : cd.classes) {
    json members = eigen_to_json(c.members);
    classes.push_back({{"members", members},
                       {"stem", to_json(c.stem)},
                       {"omega_orders", c.omega_orders},
                       {"self_conjugate", c.self_conjugate},
                       {"conjugate_partner", c.conjugate_partner ? json(*c.conjugate_partner) : json(nullptr)}});
  }
  return {{"classes", classes}, {"L", cd.L}};
}

CollapsedClass collapse_class(const EigenClass& cls, long L, const EqSystem& system, long r) {
  if (r < 0 || r >= L) throw InvalidInput("residue must lie in [0, L)");
  int levels = 0;
  for (auto& [m, mul] : cls.members) levels = std::max(levels, mul);
  size_t s = system.unknowns;
  CollapsedClass out;
  std::vector<AlgVec> rows;
  for (int j = 0; j < levels; ++j) {
    std::vector<AlgVec> phis;
    for (size_t k = 0; k < cls.members.size(); ++k) {
      if (cls.members[k].second <= j) continue;
      const Equation* eq = nullptr;
      for (auto& e : system.equations)
        if (e.deriv == j && alg_equals(e.root, cls.members[k].first)) eq = &e;
      if (!eq) throw InvalidInput("system lacks an equation for a class member");
      long ord = cls.omega_orders[k];
      long e = (((j - r) % ord) + ord) % ord;
      AlgebraicNumber w = alg_pow(cls.omegas[k], static_cast<unsigned long>(e));
      AlgVec phi;
      for (size_t t = 0; t < s; ++t) phi.push_back(eq->rhs_coeffs[t] * w);
      phis.push_back(std::move(phi));
    }
    Equation c;
    c.root = cls.stem;
    c.deriv = j;
    c.lhs = lhs_tag(j);
    c.rhs_coeffs = phis[0];
    out.collapsed.push_back(c);
    for (size_t k = 1; k < phis.size(); ++k) {
      AlgVec row;
      for (size_t t = 0; t < s; ++t) row.push_back(phis[0][t] - phis[k][t]);
      rows.push_back(std::move(row));
    }
  }
  if (!rows.empty()) out.constraint = AlgMatrix::from_rows(rows);
  else out.constraint = AlgMatrix(0, s);
  return out;
}

SplitResult nonsingular_split(const OrbitInstance& inst, long cap) {
  validate(inst);
  SplitResult res;
  std::vector<AlgebraicNumber> ev;
  for (auto& [a, m] : matrix_eigenvalues(inst.A))
    if (!a.is_zero()) ev.push_back(a);
  long L = 1;
  for (size_t i = 0; i < ev.size(); ++i)
    for (size_t j = 0; j < i; ++j) {
      long ord = 0;
      if (ratio_is_root_of_unity(ev[i], ev[j], &ord)) L = std::lcm(L, ord);
    }
  res.L = L;
  if (L > cap) {
    res.cap_exceeded = L;
    return res;
  }
  RatMatrix AL = mat_pow(inst.A, static_cast<unsigned long>(L));
  RatVec y = inst.x;
  for (long i = 0; i < L; ++i) {
    res.instances.push_back(OrbitInstance{AL, y, inst.V});
    y = inst.A * y;
  }
  return res;
}

OrbitInstance affine_to_linear(const RatMatrix& A, const RatVec& x, const Subspace& V, const RatVec& z) {
  size_t d = A.rows;
  if (!A.square() || x.size() != d || z.size() != d || V.ambient_dim != d)
    throw InvalidInput("affine_to_linear dimension mismatch");
  RatMatrix B(d + 1, d + 1);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) B(i, j) = A(i, j);
  B(d, d) = 1;
  RatVec xe = x;
  xe.push_back(1);
  std::vector<RatVec> basis;
  for (auto& v : V.basis) {
    RatVec ve = v;
    ve.push_back(0);
    basis.push_back(ve);
  }
  RatVec ze = z;
  ze.push_back(1);
  basis.push_back(ze);
  return OrbitInstance{B, xe, Subspace(d + 1, basis)};
}

OrbitInstance skolem_to_orbit(const RatVec& xrow, const RatMatrix& A, const RatVec& y) {
  size_t d = A.rows;
  if (!A.square() || xrow.size() != d || y.size() != d) throw InvalidInput("skolem_to_orbit dimension mismatch");
  if (is_zero_vec(xrow)) throw InvalidInput("skolem_to_orbit needs a nonzero row vector");
  RatMatrix row = RatMatrix::from_rows({xrow});
  return OrbitInstance{A, y, Subspace(d, nullspace(row))};
}

}  // namespace orbit
