#ifndef ISOCRIT_GALLERY_HPP
#define ISOCRIT_GALLERY_HPP

#include <string>
#include <vector>

#include "isocrit/degree.hpp"
#include "isocrit/field.hpp"

namespace isocrit {

// A numeric fact the test suite can check against computed results.
struct GalleryFact {
  std::string kind;
  double value = 0.0;
};

struct GalleryEntry {
  std::string id;
  VectorField field;
  std::vector<GalleryFact> known_facts;
};

// Ids understood by builtin(); "z_pow_n:<k>" takes k in 1..12.
std::vector<std::string> gallery_ids();

// Named example fields:
//   z_pow_n:<k>      z -> z^k in real coordinates
//   z_abs2           z -> z|z|^2, written (x(x^2+y^2), y(x^2+y^2))
//   circle_poly      F(x,y) = (x-1)^2 + y^2 - 1 on R x R
//   z2_minus_w4      K(z,w) = z^2 - w^4 as a map R^2 x R^2 -> R^2
//   belitskii_kerner (y1^2 + x y1 - x^3, y2^2 + x y2 - x^3) on R x R^2
//   hadamard_demo    2x + 0.5 (sin x2, sin x1) on R^2
GalleryEntry builtin(const std::string& id);

// H_g(x, z) = (x^3 + g(z) x, z) on R x R^{n-1}. g must be scalar and
// non-negative (checked by sampling); the closed-form determinant
// 3x^2 + g(z) is attached, and the critical set is {0} x g^{-1}(0).
VectorField planar_critical_line(const FieldAst& g);

// The radial field H_g(re) = (r^3 - 3r^2 + 3r + g(e) r^2) e on R^n in
// Cartesian form, with the removable singularity at r = 0 handled by the
// polynomial factor. Attaches the analytic Jacobian and the determinant
// (3r^2 - 6r + 3 + 2 g(e) r) (r^2 - 3r + 3 + g(e) r)^{n-1}; the critical
// set is the part of the unit sphere where g vanishes.
VectorField spherical_critical_set(const FieldAst& g, int n);

// g(z) = prod_i |z - p_i|^2: smooth, non-negative, vanishing exactly on the
// given finite point set (the empty product is the constant 1).
FieldAst finite_zero_bump(const std::vector<Vec>& points, int dim);

// The section-in-y family F_t(y) = (t y1^2 + x y1 - t x^3, ...) at fixed x,
// which deforms the Belitskii-Kerner map to the dilation y -> x y.
HomotopyFamily belitskii_kerner_family(double x);

}  // namespace isocrit

#endif
