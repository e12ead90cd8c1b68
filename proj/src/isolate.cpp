#include "orbit/isolate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

namespace orbit {

bool ComplexBox::contains(const Q& re, const Q& im) const {
  Q dr = re - center_re, di = im - center_im;
  return dr * dr + di * di <= radius * radius;
}

bool ComplexBox::overlaps(const ComplexBox& o) const {
  Q dr = o.center_re - center_re, di = o.center_im - center_im;
  Q s = radius + o.radius;
  return dr * dr + di * di <= s * s;
}

Q separation_lower_bound(const RatPoly& p) {
  if (p.degree() < 2) throw InvalidInput("separation bound needs degree >= 2");
  ZPoly z = primitive_integer(p);
  long n = z.degree();
  Z h = 0;
  for (const auto& v : z.c) h = std::max(h, Z(abs(v)));
  Z nz(n);
  Z n_pow, h_pow, norm_pow;
  // sqrt(6) / (n^((n+1)/2) H^(n-1)) = sqrt(6 / (n^(n+1) H^(2(n-1)))).
  mpz_pow_ui(n_pow.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(n + 1));
  mpz_pow_ui(h_pow.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(2 * (n - 1)));
  Q stated = sqrt_lower(make_q(Z(6), n_pow * h_pow), 64);
  // Mignotte with the Euclidean norm and |disc| >= 1:
  // sqrt(3) / (n^((n+2)/2) ||p||^(n-1)) = sqrt(3 / (n^(n+2) ||p||^(2(n-1)))).
  Z n_pow2;
  mpz_pow_ui(n_pow2.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(n + 2));
  mpz_pow_ui(norm_pow.get_mpz_t(), norm2_sq(z).get_mpz_t(), static_cast<unsigned long>(n - 1));
  Q rigorous = sqrt_lower(make_q(Z(3), n_pow2 * norm_pow), 64);
  return std::min(stated, rigorous);
}

namespace {

struct CD {
  Dyadic re, im;
};

long bitlen(const Z& z) { return z == 0 ? 0 : static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

CD cround(const CD& a, long prec) {
  if (a.re.is_zero() && a.im.is_zero()) return a;
  long t = std::max(a.re.top(), a.im.top());
  long cut = t - prec;
  auto tr = [&](const Dyadic& d) {
    if (d.is_zero() || d.exp >= cut) return d;
    Z m;
    mpz_tdiv_q_2exp(m.get_mpz_t(), d.mant.get_mpz_t(), static_cast<mp_bitcnt_t>(cut - d.exp));
    return Dyadic(m, cut);
  };
  return {tr(a.re), tr(a.im)};
}
CD cadd(const CD& a, const CD& b) { return {a.re + b.re, a.im + b.im}; }
CD csub(const CD& a, const CD& b) { return {a.re - b.re, a.im - b.im}; }
CD cmul(const CD& a, const CD& b, long prec) {
  return cround({a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}, prec);
}
CD cdiv(const CD& a, const CD& b, long prec) {
  Dyadic n2 = (b.re * b.re + b.im * b.im);
  if (n2.is_zero()) throw DomainError("complex division by zero");
  CD num = cmul(a, {b.re, -b.im}, prec + 8);
  return cround({div_near(num.re, n2, prec, nullptr), div_near(num.im, n2, prec, nullptr)}, prec);
}
bool cis_zero(const CD& a) { return a.re.is_zero() && a.im.is_zero(); }

// Approximate |a| as a double-exponent estimate log2|a|.
double clog2abs(const CD& a) {
  if (cis_zero(a)) return -1e300;
  long t = std::max(a.re.top(), a.im.top());
  long sh = t - 60;
  auto part = [&](const Dyadic& d) { return std::ldexp(d.mant.get_d(), static_cast<int>(d.exp - sh)); };
  double x = part(a.re), y = part(a.im);
  return std::log2(std::sqrt(x * x + y * y)) + static_cast<double>(sh);
}

// Horner evaluation of f and f' at z, rounded to prec.
void eval_fd(const ZPoly& f, const CD& z, long prec, CD& fz, CD& dfz) {
  CD p{Dyadic(f.c.back()), Dyadic()};
  CD d{Dyadic(), Dyadic()};
  for (size_t i = f.c.size() - 1; i-- > 0;) {
    d = cadd(cmul(d, z, prec), p);
    p = cadd(cmul(p, z, prec), CD{Dyadic(f.c[i]), Dyadic()});
  }
  fz = cround(p, prec);
  dfz = cround(d, prec);
}

// Exact evaluation (dyadic arithmetic without rounding).
CD eval_exact(const ZPoly& f, const CD& z) {
  CD p{Dyadic(f.c.back()), Dyadic()};
  for (size_t i = f.c.size() - 1; i-- > 0;) {
    CD t{p.re * z.re - p.im * z.im, p.re * z.im + p.im * z.re};
    p = {t.re + Dyadic(f.c[i]), t.im};
  }
  return p;
}

CD eval_exact_deriv(const ZPoly& f, const CD& z) { return eval_exact(f.derivative().is_zero() ? ZPoly({Z(0)}) : f.derivative(), z); }

std::vector<CD> initial_ld(const ZPoly& f) {
  int n = f.degree();
  using C = std::complex<long double>;
  std::vector<long double> a(f.c.size());
  bool ok = true;
  for (size_t i = 0; i < f.c.size(); ++i) {
    long e;
    double m = mpz_get_d_2exp(&e, f.c[i].get_mpz_t());
    if (e > 16000) ok = false;
    a[i] = std::ldexp(static_cast<long double>(m), static_cast<int>(std::min(e, 16000L)));
  }
  double R = 0;
  std::vector<CD> out(n);
  {
    // Fujiwara-style bound via logs.
    double llc = 0;
    {
      long e;
      double m = mpz_get_d_2exp(&e, f.c.back().get_mpz_t());
      llc = std::log2(std::fabs(m)) + static_cast<double>(e);
    }
    double best = -1e300;
    for (int k = 1; k <= n; ++k) {
      const Z& c = f.c[n - k];
      if (c == 0) continue;
      long e;
      double m = mpz_get_d_2exp(&e, c.get_mpz_t());
      double l = (std::log2(std::fabs(m)) + static_cast<double>(e) - llc) / k;
      best = std::max(best, l);
    }
    R = best + 1.0;
  }
  std::vector<C> z(n);
  const long double pi = 3.14159265358979323846264338327950288L;
  long double rad = std::pow(2.0L, static_cast<long double>(std::min(R, 16000.0))) * 0.5L;
  for (int k = 0; k < n; ++k) {
    long double ang = 2 * pi * k / n + 0.4L;
    z[k] = C(rad * std::cos(ang), rad * std::sin(ang));
  }
  if (ok && R < 8000 && R > -8000) {
    for (int it = 0; it < 800; ++it) {
      long double maxrel = 0;
      for (int k = 0; k < n; ++k) {
        C p = a[n], d = 0;
        for (int i = n - 1; i >= 0; --i) {
          d = d * z[k] + p;
          p = p * z[k] + a[i];
        }
        if (p == C(0)) continue;
        C ratio = p / d;
        C s = 0;
        for (int j = 0; j < n; ++j)
          if (j != k) s += C(1) / (z[k] - z[j]);
        C w = ratio / (C(1) - ratio * s);
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
        z[k] -= w;
        long double rel = std::abs(w) / std::max(std::abs(z[k]), 1e-300L);
        maxrel = std::max(maxrel, rel);
      }
      if (maxrel < 1e-17L) break;
    }
  }
  for (int k = 0; k < n; ++k) {
    out[k].re = Dyadic::from_double(static_cast<double>(z[k].real()));
    out[k].im = Dyadic::from_double(static_cast<double>(z[k].imag()));
  }
  return out;
}

void aberth_dyadic(const ZPoly& f, std::vector<CD>& z, long prec, int max_iter) {
  int n = f.degree();
  for (int it = 0; it < max_iter; ++it) {
    double worst = -1e300;
    for (int k = 0; k < n; ++k) {
      CD fz, dfz;
      eval_fd(f, z[k], prec + 16, fz, dfz);
      if (cis_zero(fz)) continue;
      if (cis_zero(dfz)) {
        z[k] = cadd(z[k], CD{Dyadic(Z(1), -prec / 4), Dyadic(Z(1), -prec / 4)});
        continue;
      }
      CD ratio = cdiv(fz, dfz, prec + 16);
      CD s{Dyadic(), Dyadic()};
      bool bad = false;
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        CD diff = csub(z[k], z[j]);
        if (cis_zero(diff)) {
          bad = true;
          break;
        }
        s = cadd(s, cdiv(CD{Dyadic(1), Dyadic()}, diff, prec + 16));
      }
      CD w;
      if (bad) {
        w = ratio;
      } else {
        CD den = csub(CD{Dyadic(1), Dyadic()}, cmul(ratio, s, prec + 16));
        w = cis_zero(den) ? ratio : cdiv(ratio, den, prec + 16);
      }
      z[k] = cround(csub(z[k], w), prec + 16);
      double rel = clog2abs(w) - std::max(clog2abs(z[k]), -1e6);
      worst = std::max(worst, rel);
    }
    if (worst < -static_cast<double>(prec) + 4) break;
  }
}

void symmetrize(std::vector<CD>& z, long prec) {
  std::vector<int> pos, negs;
  for (size_t k = 0; k < z.size(); ++k) {
    double mag = std::max(clog2abs(z[k]), 0.0);
    double lim = mag - static_cast<double>(prec) / 2;
    if (z[k].im.is_zero() || clog2abs(CD{Dyadic(), z[k].im}) < lim) {
      z[k].im = Dyadic();
    } else if (z[k].im.sign() > 0) {
      pos.push_back(static_cast<int>(k));
    } else {
      negs.push_back(static_cast<int>(k));
    }
  }
  if (pos.size() != negs.size()) return;
  std::vector<bool> used(negs.size(), false);
  std::vector<std::pair<int, int>> pairs;
  for (int p : pos) {
    int best = -1;
    double bd = 1e300;
    for (size_t j = 0; j < negs.size(); ++j) {
      if (used[j]) continue;
      CD c{z[negs[j]].re, -z[negs[j]].im};
      double d = clog2abs(csub(c, z[p]));
      if (best < 0 || d < bd) {
        bd = d;
        best = static_cast<int>(j);
      }
    }
    used[best] = true;
    pairs.emplace_back(p, negs[best]);
  }
  for (auto [p, q] : pairs) z[q] = CD{z[p].re, -z[p].im};
}

// Gerschgorin-type inclusion: with w_i = f(z_i) / (lc prod_{j!=i} (z_i - z_j)),
// pairwise disjoint discs D(z_i, n|w_i|) each contain exactly one root.
bool certify(const ZPoly& f, const std::vector<CD>& z, long prec, std::vector<ComplexBox>& out) {
  int n = f.degree();
  std::vector<Q> rad(n);
  Ball lc = Ball::from_z(f.lc());
  for (int i = 0; i < n; ++i) {
    CD fz = eval_exact(f, z[i]);
    if (cis_zero(fz)) {
      rad[i] = 0;
      continue;
    }
    Ball den = lc;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      Ball d(z[i].re - z[j].re, z[i].im - z[j].im);
      den = mul(den, d, prec + 32);
    }
    Dyadic dl = den.abs_lower();
    if (dl.is_zero()) return false;
    Dyadic fu = sqrt_up(fz.re * fz.re + fz.im * fz.im);
    rad[i] = Dyadic::from_q_ceil(Q(n) * fu.to_q() / dl.to_q(), 30).to_q();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Q dr = (z[i].re - z[j].re).to_q(), di = (z[i].im - z[j].im).to_q();
      Q s = rad[i] + rad[j];
      if (dr * dr + di * di <= s * s) return false;
    }
  }
  out.resize(n);
  for (int i = 0; i < n; ++i) out[i] = ComplexBox{z[i].re.to_q(), z[i].im.to_q(), rad[i]};
  return true;
}

struct IsoEntry {
  long prec = 0;
  std::vector<CD> approx;
  std::vector<ComplexBox> boxes;
  Q sep = 0;
  bool has_sep = false;
};

std::mutex g_iso_mutex;
std::map<std::string, IsoEntry> g_iso_cache;

std::string key_of(const ZPoly& f) {
  std::string k;
  for (const auto& c : f.c) {
    k += c.get_str(16);
    k += ',';
  }
  return k;
}

}  // namespace

std::vector<ComplexBox> isolate_squarefree(const ZPoly& f0, const Q& max_radius) {
  ZPoly f = primitive_part(f0);
  int n = f.degree();
  if (n < 1) return {};
  if (n == 1) {
    Q r = make_q(-f.c[0], f.c[1]);
    return {ComplexBox{r, 0, 0}};
  }
  std::string key = key_of(f);
  IsoEntry entry;
  {
    std::lock_guard<std::mutex> lock(g_iso_mutex);
    auto it = g_iso_cache.find(key);
    if (it != g_iso_cache.end()) entry = it->second;
  }
  if (!entry.has_sep) {
    entry.sep = separation_lower_bound(to_rat(f));
    entry.has_sep = true;
  }
  Q target = std::min(max_radius, Q(entry.sep / 4));
  if (!entry.boxes.empty()) {
    bool ok = true;
    for (auto& b : entry.boxes)
      if (b.radius > target || b.radius * 4 >= entry.sep) ok = false;
    if (ok) return entry.boxes;
  }
  if (entry.approx.empty()) {
    entry.approx = initial_ld(f);
    entry.prec = 64;
  }
  // Precision needed so that n * error is below target.
  long need = 64;
  {
    double lt = std::log2(std::max(1e-300, target.get_d()));
    if (target > 0 && !std::isfinite(lt)) lt = -static_cast<double>(bitlen(target.get_den()));
    if (target.get_d() == 0.0) lt = static_cast<double>(bitlen(target.get_num())) - static_cast<double>(bitlen(target.get_den()));
    double maxmag = 0;
    for (auto& z : entry.approx) maxmag = std::max(maxmag, clog2abs(z));
    need = static_cast<long>(std::ceil(maxmag - lt + std::log2(n) + 16));
    need = std::max(need, 64L);
  }
  long prec = std::max(entry.prec, need);
  std::vector<ComplexBox> boxes;
  for (int round_no = 0; round_no < 40; ++round_no) {
    aberth_dyadic(f, entry.approx, prec, round_no == 0 ? 200 + 20 * n : 60);
    std::vector<CD> z = entry.approx;
    symmetrize(z, prec);
    if (certify(f, z, prec, boxes)) {
      bool ok = true;
      for (auto& b : boxes)
        if (b.radius > target || b.radius * 4 >= entry.sep) ok = false;
      if (ok) break;
    }
    boxes.clear();
    prec *= 2;
  }
  if (boxes.empty()) throw DomainError("root isolation did not converge");
  std::sort(boxes.begin(), boxes.end(), [](const ComplexBox& a, const ComplexBox& b) {
    if (a.center_re != b.center_re) return a.center_re < b.center_re;
    return a.center_im < b.center_im;
  });
  entry.prec = prec;
  entry.boxes = boxes;
  {
    std::lock_guard<std::mutex> lock(g_iso_mutex);
    if (g_iso_cache.size() > 4096) g_iso_cache.clear();
    g_iso_cache[key] = entry;
  }
  return boxes;
}

ComplexBox refine_root(const ZPoly& f0, const ComplexBox& box, const Q& eps, const Q& sep) {
  if (box.radius <= eps) return box;
  ZPoly f = primitive_part(f0);
  int n = f.degree();
  if (n <= 1) {
    if (n == 1) return ComplexBox{make_q(-f.c[0], f.c[1]), 0, 0};
    return box;
  }
  CD z{Dyadic::from_q_floor(box.center_re, 64), Dyadic::from_q_floor(box.center_im, 64)};
  if (box.center_im == 0) z.im = Dyadic();
  double le = -static_cast<double>(bitlen(eps.get_den())) + static_cast<double>(bitlen(eps.get_num()));
  double mag = std::max(clog2abs(z), 0.0);
  long prec = static_cast<long>(std::ceil(mag - le + std::log2(n) + 24));
  prec = std::max(prec, 64L);
  bool real = box.center_im == 0;
  Q half_sep = sep / 2;
  for (int attempt = 0; attempt < 30; ++attempt) {
    // Newton iteration at the working precision.
    for (int it = 0; it < 200; ++it) {
      CD fz, dfz;
      eval_fd(f, z, prec + 16, fz, dfz);
      if (cis_zero(fz) || cis_zero(dfz)) break;
      CD step = cdiv(fz, dfz, prec + 16);
      z = cround(csub(z, step), prec + 16);
      if (real) z.im = Dyadic();
      if (clog2abs(step) - std::max(clog2abs(z), -1e6) < -static_cast<double>(prec)) break;
    }
    // Some root lies within n |f(z)/f'(z)| of z.
    CD fz = eval_exact(f, z);
    Q r = 0;
    if (!cis_zero(fz)) {
      CD dfz = eval_exact_deriv(f, z);
      Dyadic dl = sqrt_down(dfz.re * dfz.re + dfz.im * dfz.im);
      if (!dl.is_zero()) {
        Dyadic fu = sqrt_up(fz.re * fz.re + fz.im * fz.im);
        r = Dyadic::from_q_ceil(Q(n) * fu.to_q() / dl.to_q(), 30).to_q();
      } else {
        r = -1;
      }
    }
    if (r >= 0) {
      Q dr = z.re.to_q() - box.center_re, di = z.im.to_q() - box.center_im;
      Q reach = sqrt_upper(dr * dr + di * di, 32) + r;
      if (reach < half_sep && r <= eps) return ComplexBox{z.re.to_q(), z.im.to_q(), r};
    }
    prec *= 2;
  }
  throw DomainError("root refinement did not converge");
}

}  // namespace orbit
