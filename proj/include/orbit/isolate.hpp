#pragma once

#include <vector>

#include "orbit/ball.hpp"
#include "orbit/poly.hpp"

namespace orbit {

struct ComplexBox {
  Q center_re = 0;
  Q center_im = 0;
  Q radius = 0;

  Ball to_ball(long prec) const { return Ball::from_q(center_re, center_im, radius, prec); }
  bool contains(const Q& re, const Q& im) const;
  bool overlaps(const ComplexBox& o) const;
  friend bool operator==(const ComplexBox& a, const ComplexBox& b) {
    return a.center_re == b.center_re && a.center_im == b.center_im && a.radius == b.radius;
  }
};

// Lower bound on the minimum distance between distinct roots of a squarefree
// polynomial of degree >= 2. Throws InvalidInput for degree < 2.
Q separation_lower_bound(const RatPoly& p);

// Certified isolating discs for all roots of a squarefree polynomial. Every
// disc satisfies radius <= max_radius and radius < separation/4, discs are
// pairwise disjoint, and real roots get centers on the real axis. Output is
// sorted by (center_re, center_im).
std::vector<ComplexBox> isolate_squarefree(const ZPoly& f, const Q& max_radius);

// Shrinks the disc around the unique root of irreducible (or squarefree) f
// inside box to radius <= eps. sep must be a valid separation lower bound
// and box.radius < sep/4.
ComplexBox refine_root(const ZPoly& f, const ComplexBox& box, const Q& eps, const Q& sep);

}  // namespace orbit
