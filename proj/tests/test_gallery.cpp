#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "isocrit/errors.hpp"
#include "isocrit/gallery.hpp"
#include "isocrit/winding.hpp"

using namespace isocrit;

TEST_CASE("builtin ids resolve and unknown ids do not") {
  for (const std::string& id : {"z_pow_n:1", "z_pow_n:5", "z_abs2", "circle_poly",
                                "z2_minus_w4", "belitskii_kerner", "hadamard_demo"})
    CHECK_NOTHROW(builtin(id));
  CHECK_THROWS_AS(builtin("nope"), UnknownGalleryId);
  CHECK_THROWS_AS(builtin("z_pow_n:0"), UnknownGalleryId);
  CHECK_THROWS_AS(builtin("z_pow_n:x"), UnknownGalleryId);
}

TEST_CASE("known facts hold for the index entries") {
  for (int k = 1; k <= 5; ++k) {
    const GalleryEntry e = builtin("z_pow_n:" + std::to_string(k));
    REQUIRE(e.known_facts.size() == 1);
    CHECK(e.known_facts[0].kind == "local_index_at_origin");
    const IndexResult idx = local_index(e.field, {0.0, 0.0}, 0.5);
    CHECK(idx.magnitude == static_cast<int>(e.known_facts[0].value));
  }
  const GalleryEntry f = builtin("z_abs2");
  const IndexResult idx = local_index(f.field, {0.0, 0.0}, 0.5);
  CHECK(idx.magnitude == 1);
}

TEST_CASE("z_pow_n fields match complex powers") {
  const GalleryEntry e = builtin("z_pow_n:4");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 50; ++t) {
    const double x = u(rng), y = u(rng);
    const std::complex<double> z{x, y};
    const std::complex<double> w = z * z * z * z;
    const Vec v = e.field.eval(Vec{x, y});
    CHECK(v[0] == doctest::Approx(w.real()).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(w.imag()).epsilon(1e-12));
  }
}

TEST_CASE("planar critical line: analytic determinant matches the LU route") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);

  const FieldAst g = finite_zero_bump({Vec{-0.5}, Vec{0.5}}, 1);
  const VectorField h = planar_critical_line(g);
  REQUIRE(h.has_analytic_det());
  for (int t = 0; t < 200; ++t) {
    const Vec p{u(rng), u(rng)};
    const double analytic = h.analytic_det(p);
    const double lu = h.jacobian_det(p).value;
    CHECK(std::abs(analytic - lu) <= 1e-9 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("planar critical line: prescribed critical sets") {
  // g == 0: every point of the hyperplane {x = 0} is critical
  const VectorField flat = planar_critical_line(finite_zero_bump({Vec{0.0}}, 1));
  // here g(z) = z^2, so use the raw zero bump of the empty set for g == 0:
  AstBuilder zb(1, 1);
  zb.set_root(0, zb.constant(0.0));
  const VectorField h0 = planar_critical_line(zb.take());
  CHECK(h0.analytic_det(Vec{0.0, 1.7}) == doctest::Approx(0.0));
  CHECK(h0.analytic_det(Vec{0.0, -0.4}) == doctest::Approx(0.0));
  CHECK(h0.analytic_det(Vec{0.3, 0.0}) == doctest::Approx(0.27));

  // g(z) = z^2: critical exactly at the origin
  CHECK(flat.analytic_det(Vec{0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(flat.analytic_det(Vec{0.0, 0.3}) > 0.0);
  CHECK(flat.analytic_det(Vec{0.1, 0.0}) > 0.0);

  // g == 1: no critical points at all
  AstBuilder ob(1, 1);
  ob.set_root(0, ob.constant(1.0));
  const VectorField h1 = planar_critical_line(ob.take());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t)
    CHECK(h1.analytic_det(Vec{u(rng), u(rng)}) >= 1.0);
}

TEST_CASE("planar critical line rejects negative bumps") {
  const FieldAst neg = parse_field("-1 - x1^2", 1, 1);
  CHECK_THROWS_AS(planar_critical_line(neg), NegativeBumpError);
}

TEST_CASE("spherical construction: critical sphere for g == 0") {
  AstBuilder zb(2, 1);
  zb.set_root(0, zb.constant(0.0));
  const VectorField h = spherical_critical_set(zb.take(), 2);

  // determinant vanishes on the unit circle, stays away from zero off it
  for (double th : linspace(0.0, 6.2, 37)) {
    const Vec on{std::cos(th), std::sin(th)};
    CHECK(std::abs(h.jacobian_det(on).value) < 1e-8);
    for (double r : {0.5, 1.5}) {
      const Vec off{r * std::cos(th), r * std::sin(th)};
      CHECK(std::abs(h.jacobian_det(off).value) > 0.1);
    }
  }

  // removable singularity: H(0) = 0 and J(0) = 3 I
  const Vec at0 = h.eval(Vec{0.0, 0.0});
  CHECK(at0[0] == 0.0);
  CHECK(at0[1] == 0.0);
  const Mat j0 = h.jacobian(Vec{0.0, 0.0});
  CHECK(j0(0, 0) == doctest::Approx(3.0));
  CHECK(j0(1, 1) == doctest::Approx(3.0));
  CHECK(j0(0, 1) == doctest::Approx(0.0));

  // analytic determinant formula agrees with the LU determinant of the
  // attached analytic Jacobian, including a direction-dependent bump
  const FieldAst bump = parse_field("x1^2*x2^2", 2, 1);
  const VectorField hb = spherical_critical_set(bump, 2);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 100; ++t) {
    const Vec p{u(rng), u(rng)};
    if (norm(p) < 1e-3) continue;
    CHECK(std::abs(hb.analytic_det(p) - hb.jacobian_det(p).value) <=
          1e-8 * std::max(1.0, std::abs(hb.analytic_det(p))));
  }
}

TEST_CASE("spherical construction in three dimensions") {
  AstBuilder zb(3, 1);
  zb.set_root(0, zb.constant(0.0));
  const VectorField h = spherical_critical_set(zb.take(), 3);
  for (const Vec& e : sphere_points(Vec{0.0, 0.0, 0.0}, 1.0, 12))
    CHECK(std::abs(h.jacobian_det(e).value) < 1e-8);
  for (double r : {0.5, 1.5})
    for (const Vec& e : sphere_points(Vec{0.0, 0.0, 0.0}, r, 8))
      CHECK(std::abs(h.jacobian_det(e).value) > 0.1);
  const Mat j0 = h.jacobian(Vec{0.0, 0.0, 0.0});
  for (int i = 0; i < 3; ++i) CHECK(j0(i, i) == doctest::Approx(3.0));
}

TEST_CASE("spherical construction with g == 1 has no critical points nearby") {
  AstBuilder ob(2, 1);
  ob.set_root(0, ob.constant(1.0));
  const VectorField h = spherical_critical_set(ob.take(), 2);
  for (double r : linspace(0.05, 2.5, 50))
    for (double th : linspace(0.0, 6.2, 25)) {
      const Vec p{r * std::cos(th), r * std::sin(th)};
      CHECK(std::abs(h.analytic_det(p)) > 1e-3);
    }
}

TEST_CASE("finite zero bump: examples and positivity") {
  // single point at the origin of R^1: g(z) = z^2
  const FieldAst g0 = finite_zero_bump({Vec{0.0}}, 1);
  CHECK(eval_ast(g0, Vec{0.5})[0] == doctest::Approx(0.25));
  CHECK(eval_ast(g0, Vec{0.0})[0] == 0.0);

  // two points: (z+1)^2 (z-1)^2
  const FieldAst g2 = finite_zero_bump({Vec{-1.0}, Vec{1.0}}, 1);
  CHECK(eval_ast(g2, Vec{0.0})[0] == doctest::Approx(1.0));
  CHECK(eval_ast(g2, Vec{1.0})[0] == 0.0);
  CHECK(eval_ast(g2, Vec{-1.0})[0] == 0.0);
  CHECK(eval_ast(g2, Vec{2.0})[0] == doctest::Approx(9.0));

  // empty set: the constant 1
  const FieldAst ge = finite_zero_bump({}, 3);
  CHECK(eval_ast(ge, Vec{4.0, -2.0, 0.1})[0] == 1.0);

  CHECK_THROWS_AS(finite_zero_bump({Vec{0.3}, Vec{0.3}}, 1), DuplicatePointError);

  // non-negative everywhere; tiny only within 1e-6 of an input point
  const FieldAst g = finite_zero_bump({Vec{-1.0, 0.0}, Vec{1.0, 0.5}}, 2);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 2000; ++t) {
    const Vec z{u(rng), u(rng)};
    const double v = eval_ast(g, z)[0];
    CHECK(v >= 0.0);
    if (v < 1e-12) {
      const double d = std::min(dist(z, Vec{-1.0, 0.0}), dist(z, Vec{1.0, 0.5}));
      CHECK(d < 1e-6);
    }
  }
}

TEST_CASE("belitskii-kerner family endpoints") {
  const HomotopyFamily fam = belitskii_kerner_family(0.05);
  // t = 0 is the dilation y -> x y
  const Vec v0 = fam.at(0.0, Vec{0.003, -0.004});
  CHECK(v0[0] == doctest::Approx(0.05 * 0.003));
  CHECK(v0[1] == doctest::Approx(0.05 * -0.004));
  // t = 1 is the map itself
  const GalleryEntry bk = builtin("belitskii_kerner");
  const Vec v1 = fam.at(1.0, Vec{0.003, -0.004});
  const Vec w = bk.field.eval(Vec{0.05, 0.003, -0.004});
  CHECK(v1[0] == doctest::Approx(w[0]));
  CHECK(v1[1] == doctest::Approx(w[1]));
}
