#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "isocrit/degree.hpp"
#include "isocrit/errors.hpp"
#include "isocrit/gallery.hpp"
#include "isocrit/winding.hpp"

using namespace isocrit;

namespace {

Box box2(double lo1, double hi1, double lo2, double hi2) {
  Box b;
  b.side = {{lo1, hi1}, {lo2, hi2}};
  return b;
}

// Random planar polynomial map with monomials x^a y^b, a + b <= 3.
VectorField random_cubic_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AstBuilder b(2, 2);
  for (int comp = 0; comp < 2; ++comp) {
    int sum = -1;
    for (int a = 0; a <= 3; ++a)
      for (int p = 0; a + p <= 3; ++p) {
        int term = b.constant(u(rng));
        if (a > 0) term = b.mul(term, b.pow(b.var(1), a));
        if (p > 0) term = b.mul(term, b.pow(b.var(2), p));
        sum = sum < 0 ? term : b.add(sum, term);
      }
    b.set_root(comp, sum);
  }
  return VectorField::from_ast(b.take());
}

}  // namespace

TEST_CASE("preimage degree: square roots of (1,0)") {
  const GalleryEntry z2 = builtin("z_pow_n:2");
  const DegreeCertificate cert =
      preimage_degree(z2.field, Vec{1.0, 0.0}, box2(-2, 2, -2, 2), 32);
  REQUIRE(cert.preimages.size() == 2);
  CHECK(cert.degree == 2);
  CHECK(cert.boundary_margin > 0.0);
  // roots are sorted lexicographically: (-1, 0) then (1, 0)
  CHECK(cert.preimages[0].x[0] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(cert.preimages[1].x[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (const Preimage& p : cert.preimages) {
    CHECK(p.sign == 1);
    CHECK(p.residual < 1e-10);
  }
}

TEST_CASE("preimage degree: identity and the cubic bijection") {
  const GalleryEntry id = builtin("z_pow_n:1");
  const DegreeCertificate c1 =
      preimage_degree(id.field, Vec{0.3, 0.4}, box2(-1, 1, -1, 1), 16);
  CHECK(c1.degree == 1);
  REQUIRE(c1.preimages.size() == 1);
  CHECK(c1.preimages[0].x[0] == doctest::Approx(0.3));

  const GalleryEntry f = builtin("z_abs2");
  const DegreeCertificate c2 =
      preimage_degree(f.field, Vec{0.1, 0.0}, box2(-1, 1, -1, 1), 16);
  CHECK(c2.degree == 1);
  CHECK(c2.preimages.size() == 1);
}

TEST_CASE("certify_zero: positive and undetermined cases") {
  const GalleryEntry id = builtin("z_pow_n:1");
  const auto cert = certify_zero(id.field, box2(-1, 1, -1, 1), 16);
  REQUIRE(cert.has_value());
  CHECK(cert->degree == 1);
  CHECK(norm(cert->preimages[0].x) < 1e-10);

  // no zero inside: only zero of z^2 is the origin, outside this box
  const GalleryEntry z2 = builtin("z_pow_n:2");
  const auto none = certify_zero(z2.field, box2(0.5, 1.5, -0.5, 0.5), 16);
  CHECK_FALSE(none.has_value());
}

TEST_CASE("boundary zero is reported") {
  const GalleryEntry id = builtin("z_pow_n:1");
  // the target (1, 0) lies exactly on the box boundary image
  CHECK_THROWS_AS(preimage_degree(id.field, Vec{1.0, 0.0}, box2(-1, 1, -1, 1), 8),
                  BoundaryZero);
}

TEST_CASE("singular preimage is reported") {
  const GalleryEntry z2 = builtin("z_pow_n:2");
  CHECK_THROWS_AS(preimage_degree(z2.field, Vec{0.0, 0.0}, box2(-1, 1, -1, 1), 16),
                  SingularPreimage);
}

TEST_CASE("covered ball radius of the squaring map") {
  const GalleryEntry z2 = builtin("z_pow_n:2");
  const double r = covered_ball_radius(z2.field, box2(-1, 1, -1, 1));
  CHECK(r >= 0.99);
  CHECK(r <= 1.01);

  // every target inside the covered ball solves
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-0.95 * r, 0.95 * r);
  for (int t = 0; t < 20; ++t) {
    Vec target{u(rng), u(rng)};
    while (norm(target) > 0.95 * r || norm(target) < 1e-3)
      target = {u(rng), u(rng)};
    const DegreeCertificate cert =
        preimage_degree(z2.field, target, box2(-1, 1, -1, 1), 24);
    CHECK(cert.preimages.size() >= 1);
    for (const Preimage& p : cert.preimages) CHECK(p.residual < 1e-10);
  }

  const GalleryEntry id = builtin("z_pow_n:1");
  CHECK(covered_ball_radius(id.field, box2(-1, 1, -1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("degree equals boundary winding on random cubic fields") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  int done = 0;
  while (done < 5) {
    const VectorField f = random_cubic_field(rng);
    const Box box = box2(-1.1, 1.1, -1.1, 1.1);
    const Vec inner{u(rng), u(rng)};
    const Vec y = f.eval(inner);
    try {
      const DegreeCertificate cert = preimage_degree(f, y, box, 48);
      if (cert.boundary_margin <= 0.01) continue;
      const LoopSample loop = sample_box_loop(f, y, box, 4096);
      CHECK(cert.degree == angle_lift(loop).winding);
      ++done;
    } catch (const Error&) {
      continue;  // singular draw; try another field
    }
  }
}

TEST_CASE("degree matches the local index at an isolated critical point") {
  for (int n = 1; n <= 4; ++n) {
    const GalleryEntry e = builtin("z_pow_n:" + std::to_string(n));
    const IndexResult idx = local_index(e.field, {0.0, 0.0}, 0.5);
    const DegreeCertificate cert =
        preimage_degree(e.field, Vec{0.05, 0.02}, box2(-1, 1, -1, 1), 48);
    CHECK(cert.degree == idx.sign * idx.magnitude);
  }
}

TEST_CASE("excision: shrinking the box preserves the degree") {
  const GalleryEntry z2 = builtin("z_pow_n:2");
  const Vec y{1.0, 0.0};
  const int d_big = preimage_degree(z2.field, y, box2(-2, 2, -2, 2), 32).degree;
  const int d_small = preimage_degree(z2.field, y, box2(-1.3, 1.3, -1.2, 1.2), 32).degree;
  CHECK(d_big == d_small);
}

TEST_CASE("reflection flips the planar degree") {
  const GalleryEntry z2 = builtin("z_pow_n:2");
  const FieldAst& ast = *z2.field.ast();
  AstBuilder b(2, 2);
  b.set_root(0, b.import(ast, ast.roots[0], 0));
  b.set_root(1, b.neg(b.import(ast, ast.roots[1], 0)));
  const VectorField reflected = VectorField::from_ast(b.take());
  const int d = preimage_degree(z2.field, Vec{1.0, 0.0}, box2(-2, 2, -2, 2), 32).degree;
  const int dr =
      preimage_degree(reflected, Vec{1.0, 0.0}, box2(-2, 2, -2, 2), 32).degree;
  CHECK(dr == -d);
}

TEST_CASE("homotopy scans") {
  // constant identity family on the unit circle: min modulus exactly 1
  HomotopyFamily constant;
  constant.dim = 2;
  constant.description = "identity for all t";
  constant.at = [](double, std::span<const double> x) {
    return Vec{x[0], x[1]};
  };
  const std::vector<Vec> circle = sphere_points(Vec{0.0, 0.0}, 1.0, 128);
  const HomotopyScan s1 = homotopy_boundary_scan(constant, circle, 16);
  CHECK(s1.min_modulus == doctest::Approx(1.0));
  CHECK_FALSE(s1.vanished);

  // straight line from z^2 to z^3: endpoint degrees differ, so the family
  // must vanish somewhere on the boundary
  HomotopyFamily line;
  line.dim = 2;
  line.description = "line from z^2 to z^3";
  line.at = [](double t, std::span<const double> x) {
    const std::complex<double> z{x[0], x[1]};
    const std::complex<double> v = (1.0 - t) * z * z + t * z * z * z;
    return Vec{v.real(), v.imag()};
  };
  const HomotopyScan s2 = homotopy_boundary_scan(line, circle, 128);
  CHECK(s2.min_modulus <= 0.05);  // vanishing point caught at sample resolution

  // the Belitskii-Kerner family stays above the |x|^3 / 10 wall
  const double x = 0.05;
  const HomotopyScan s3 = homotopy_boundary_scan(
      belitskii_kerner_family(x),
      sphere_points(Vec{0.0, 0.0}, 2.0 * x * x, 256), 32);
  CHECK(s3.min_modulus > 0.0);
  CHECK(s3.min_modulus >= (x * x * x / 10.0) * 0.9);

  CHECK_THROWS_AS(homotopy_boundary_scan(constant, circle, 8), ArityError);
}

TEST_CASE("newton refinement polishes to tight residuals") {
  const GalleryEntry f = builtin("z_abs2");
  const auto r = newton_refine(f.field, Vec{0.1, 0.0}, Vec{0.4, 0.1});
  REQUIRE(r.has_value());
  CHECK(r->residual < 1e-10);
  // |z|^3 = 0.1 on the real axis
  CHECK(r->x[0] == doctest::Approx(std::cbrt(0.1)).epsilon(1e-9));
  CHECK(std::abs(r->x[1]) < 1e-9);
}
