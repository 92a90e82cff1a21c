#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "isocrit/errors.hpp"
#include "isocrit/gallery.hpp"
#include "isocrit/implicit.hpp"

using namespace isocrit;

namespace {

// F(x, y) = y + a x on R x R^2: the slice in y is the identity.
VectorField linear_field(double a1, double a2) {
  AstBuilder b(3, 2);
  b.set_root(0, b.add(b.var(2), b.mul(b.constant(a1), b.var(1))));
  b.set_root(1, b.add(b.var(3), b.mul(b.constant(a2), b.var(1))));
  return VectorField::from_ast(b.take());
}

// The four w with w^4 = z^2, by radicals.
std::vector<std::complex<double>> quartic_roots(std::complex<double> z) {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  std::vector<std::complex<double>> roots;
  for (int k = 0; k < 4; ++k)
    roots.push_back(std::polar(std::sqrt(r), (2.0 * theta + 6.283185307179586 * k) / 4.0));
  return roots;
}

}  // namespace

TEST_CASE("calibrate: linear map succeeds with the expected wall") {
  const VectorField F = linear_field(0.7, -0.3);
  ImplicitOptions opts;
  opts.sphere_res = 128;
  const CalibrationConstants c = calibrate(F, Vec{0.0}, Vec{0.0, 0.0}, opts);
  // the slice is the identity, so the wall equals the radius s1
  CHECK(c.wall == doctest::Approx(c.s1).epsilon(1e-6));
  CHECK(c.s1 > 0.0);
  CHECK(c.r1 > 0.0);
  CHECK(c.k >= 2);
  CHECK(c.s2 == doctest::Approx(c.s1 / c.k));
  CHECK(c.r2 > 0.0);
  CHECK(c.r2 <= c.r1 / c.k);

  // re-verify the sampled invariants directly
  double wall = 1e300;
  for (const Vec& y : sphere_points(Vec{0.0, 0.0}, c.s1, 256))
    wall = std::min(wall, norm(F.eval(Vec{0.0, y[0], y[1]})));
  CHECK(wall == doctest::Approx(c.wall).epsilon(1e-3));
  for (const Vec& x : ball_points(Vec{0.0}, c.r1, 9))
    for (const Vec& y : sphere_points(Vec{0.0, 0.0}, c.s1, 64))
      CHECK(norm(F.eval(Vec{x[0], y[0], y[1]})) >= c.wall / 2.0 - 1e-9);
  double inner_max = 0.0;
  for (const Vec& x : ball_points(Vec{0.0}, c.r2, 9))
    for (const Vec& y : ball_points(Vec{0.0, 0.0}, c.s2, 9))
      inner_max = std::max(inner_max, norm(F.eval(Vec{x[0], y[0], y[1]})));
  CHECK(inner_max <= c.wall / 4.0 + 1e-9);
  for (const Vec& x : ball_points(Vec{0.0}, c.r2, 9))
    for (const Vec& y : sphere_points(Vec{0.0, 0.0}, c.s2, 64))
      CHECK(norm(F.eval(Vec{x[0], y[0], y[1]})) > 0.0);
}

TEST_CASE("calibrate: m = 1 is rejected, constant slices fail") {
  const VectorField F1 = VectorField::from_ast(parse_field("x2 - x1", 2, 1));
  CHECK_THROWS_AS(calibrate(F1, Vec{0.0}, Vec{0.0}), ArityError);

  // F(x, y) = (x, x): constant in y, the wall never rises
  const VectorField Fc = VectorField::from_ast(parse_field("x1 ; x1", 3, 2));
  CHECK_THROWS_AS(calibrate(Fc, Vec{0.0}, Vec{0.0, 0.0}), CalibrationFailure);
}

TEST_CASE("unique mode: linear field solves with the iff contract") {
  const VectorField F = linear_field(0.7, -0.3);
  ImplicitOptions opts;
  CalibrationConstants c = calibrate(F, Vec{0.0}, Vec{0.0, 0.0}, opts);
  const std::vector<Vec> xs{Vec{0.5 * c.r2}, Vec{-0.5 * c.r2}, Vec{0.9 * c.r2},
                            Vec{-0.9 * c.r2}, Vec{0.1 * c.r2}};
  const ImplicitReport rep =
      solve_implicit(F, Vec{0.0}, Vec{0.0, 0.0}, xs, SolveMode::unique, opts);
  REQUIRE(rep.calibration.has_value());
  CHECK(rep.solved_count() == 5);
  for (const auto& s : rep.samples) {
    REQUIRE(s.solved);
    CHECK(s.residual <= opts.tol);
    CHECK(s.certificate == CertKind::winding);
    // g(x) = -a x exactly
    CHECK(s.y[0] == doctest::Approx(-0.7 * s.x[0]).epsilon(1e-8));
    CHECK(s.y[1] == doctest::Approx(0.3 * s.x[0]).epsilon(1e-8));
  }
}

TEST_CASE("unique mode: the cubic homeomorphism slice") {
  // F(x, y) = y |y|^2 + x c: the y-slice is the global homeomorphism z|z|^2
  AstBuilder b(3, 2);
  const int norm2 = b.add(b.pow(b.var(2), 2), b.pow(b.var(3), 2));
  b.set_root(0, b.add(b.mul(b.var(2), norm2), b.mul(b.constant(0.4), b.var(1))));
  b.set_root(1, b.add(b.mul(b.var(3), norm2), b.mul(b.constant(-0.2), b.var(1))));
  const VectorField F = VectorField::from_ast(b.take());

  ImplicitOptions opts;
  opts.scan_res = 41;
  const CalibrationConstants c = calibrate(F, Vec{0.0}, Vec{0.0, 0.0}, opts);
  const std::vector<Vec> xs{Vec{0.8 * c.r2}, Vec{-0.8 * c.r2}, Vec{0.3 * c.r2}};
  const ImplicitReport rep =
      solve_implicit(F, Vec{0.0}, Vec{0.0, 0.0}, xs, SolveMode::unique, opts);
  CHECK(rep.solved_count() == 3);
  for (const auto& s : rep.samples) {
    REQUIRE(s.solved);
    CHECK(s.residual <= opts.tol);
    // solution satisfies y|y|^2 = -x c, so |y|^3 = |x| |c|
    const double expect = std::cbrt(std::abs(s.x[0]) * std::hypot(0.4, 0.2));
    CHECK(norm(s.y) == doctest::Approx(expect).epsilon(1e-6));
  }

  // re-solving from different interior starting boxes gives the same root
  const Vec x_probe{0.5 * c.r2};
  for (double shift : {-0.3, -0.1, 0.0, 0.1, 0.3}) {
    ImplicitOptions eopts;
    eopts.search_radius = [&](std::span<const double>) { return c.s2; };
    Box ybox;
    ybox.side = {{-c.s2 + shift * c.s2, c.s2 + shift * c.s2},
                 {-c.s2, c.s2}};
    eopts.y_box = ybox;
    const ImplicitReport er = solve_implicit(F, Vec{0.0}, Vec{0.0, 0.0},
                                             {x_probe}, SolveMode::existence_only,
                                             eopts);
    if (er.samples[0].solved) {
      const ImplicitReport ur = solve_implicit(F, Vec{0.0}, Vec{0.0, 0.0},
                                               {x_probe}, SolveMode::unique, opts);
      CHECK(dist(er.samples[0].y, ur.samples[0].y) < 1e-8);
    }
  }
}

TEST_CASE("existence mode: z^2 - w^4 produces branch roots of the right size") {
  const GalleryEntry K = builtin("z2_minus_w4");
  ImplicitOptions opts;
  opts.search_radius = [](std::span<const double> x) {
    return 1.5 * std::sqrt(std::hypot(x[0], x[1]));
  };
  std::vector<Vec> xs;
  for (double r : {0.1, 0.05, 0.01})
    for (double th : {0.3, 2.0, 4.1})
      xs.push_back(Vec{r * std::cos(th), r * std::sin(th)});

  const ImplicitReport rep = solve_implicit(K.field, Vec{0.0, 0.0}, Vec{0.0, 0.0},
                                            xs, SolveMode::existence_only, opts);
  CHECK(rep.solved_count() == static_cast<int>(xs.size()));
  for (const auto& s : rep.samples) {
    REQUIRE(s.solved);
    CHECK(s.certificate == CertKind::winding);
    CHECK(s.residual < 1e-10);
    const double expected = std::sqrt(std::hypot(s.x[0], s.x[1]));
    CHECK(std::abs(norm(s.y) - expected) < 1e-9);
    // the root matches one of the four radical roots
    const auto roots = quartic_roots({s.x[0], s.x[1]});
    double best = 1e300;
    for (const auto& w : roots)
      best = std::min(best, std::hypot(s.y[0] - w.real(), s.y[1] - w.imag()));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("existence mode: all four branches are reachable via starting boxes") {
  const GalleryEntry K = builtin("z2_minus_w4");
  const std::complex<double> z{0.08, 0.03};
  const auto roots = quartic_roots(z);
  for (const auto& w : roots) {
    ImplicitOptions opts;
    opts.search_radius = [](std::span<const double> x) {
      return 1.5 * std::sqrt(std::hypot(x[0], x[1]));
    };
    Box ybox;
    const double pad = 0.35 * std::abs(w);
    ybox.side = {{w.real() - pad, w.real() + pad}, {w.imag() - pad, w.imag() + pad}};
    opts.y_box = ybox;
    const ImplicitReport rep =
        solve_implicit(K.field, Vec{0.0, 0.0}, Vec{0.0, 0.0},
                       {Vec{z.real(), z.imag()}}, SolveMode::existence_only, opts);
    REQUIRE(rep.samples[0].solved);
    CHECK(std::hypot(rep.samples[0].y[0] - w.real(),
                     rep.samples[0].y[1] - w.imag()) < 1e-8);
  }
}

TEST_CASE("existence mode: belitskii-kerner inside |y| < 2 x^2") {
  const GalleryEntry bk = builtin("belitskii_kerner");
  ImplicitOptions opts;
  opts.search_radius = [](std::span<const double> x) { return 2.0 * x[0] * x[0]; };
  const std::vector<Vec> xs{Vec{0.05}, Vec{-0.05}, Vec{0.02}, Vec{-0.02}};
  const ImplicitReport rep = solve_implicit(bk.field, Vec{0.0}, Vec{0.0, 0.0}, xs,
                                            SolveMode::existence_only, opts);
  CHECK(rep.solved_count() == 4);
  for (const auto& s : rep.samples) {
    REQUIRE(s.solved);
    CHECK(s.certificate == CertKind::winding);
    CHECK(s.residual < 1e-10);
    CHECK(norm(s.y) < 2.0 * s.x[0] * s.x[0]);
    // per-component root: y_i = x (-1 + sqrt(1 + 4x)) / 2
    const double yi = s.x[0] * (-1.0 + std::sqrt(1.0 + 4.0 * s.x[0])) / 2.0;
    CHECK(s.y[0] == doctest::Approx(yi).epsilon(1e-7));
    CHECK(s.y[1] == doctest::Approx(yi).epsilon(1e-7));
  }
}

TEST_CASE("m = 1 slice: the circle polynomial") {
  const GalleryEntry cp = builtin("circle_poly");

  // positive x: the root sqrt(2x - x^2) lies in [0, 1.5]
  for (double x : {0.1, 0.5}) {
    const auto root = solve_slice_1d(cp.field, Vec{x}, 0.0, 1.5);
    REQUIRE(root.has_value());
    const double expected = std::sqrt(2.0 * x - x * x);
    CHECK(std::abs(*root - expected) < 1e-9);
    CHECK(std::abs(cp.field.eval(Vec{x, *root})[0]) < 1e-12);
  }

  // negative x: F > 0 on the whole bracket, no sign change anywhere
  for (double x : {-0.1, -0.01}) {
    CHECK_FALSE(solve_slice_1d(cp.field, Vec{x}, -1.0, 1.0).has_value());
    CHECK_FALSE(solve_slice_1d(cp.field, Vec{x}, 0.0, 1.5).has_value());
  }

  // trivial: F(y) = y
  const VectorField fy = VectorField::from_ast(parse_field("x2", 2, 1));
  const auto r = solve_slice_1d(fy, Vec{0.33}, -1.0, 1.0);
  REQUIRE(r.has_value());
  CHECK(std::abs(*r) < 1e-15);

  // the m = 1 route through solve_implicit records unsolved samples
  ImplicitOptions o;
  o.default_radius = 1.0;
  const ImplicitReport rep =
      solve_implicit(cp.field, Vec{0.0}, Vec{0.0}, {Vec{-0.1}, Vec{-0.01}},
                     SolveMode::existence_only, o);
  CHECK_FALSE(rep.samples[0].solved);
  CHECK_FALSE(rep.samples[1].solved);

  // and solves when the bracket sees a sign change: F(x, y) = y - x^2
  const VectorField para = VectorField::from_ast(parse_field("x2 - x1^2", 2, 1));
  const ImplicitReport rep2 = solve_implicit(
      para, Vec{0.0}, Vec{0.0}, {Vec{0.4}, Vec{-0.3}}, SolveMode::existence_only, o);
  for (const auto& s : rep2.samples) {
    REQUIRE(s.solved);
    CHECK(s.certificate == CertKind::bisection);
    CHECK(s.y[0] == doctest::Approx(s.x[0] * s.x[0]).epsilon(1e-10));
  }
}

TEST_CASE("continuity profile shrinks toward the anchor") {
  const GalleryEntry K = builtin("z2_minus_w4");
  ImplicitOptions opts;
  opts.search_radius = [](std::span<const double> x) {
    return 1.5 * std::sqrt(std::hypot(x[0], x[1]));
  };
  std::vector<Vec> xs;
  for (double r : {0.1, 0.05, 0.01})
    for (double th : {0.0, 1.5, 3.1, 4.6})
      xs.push_back(Vec{r * std::cos(th), r * std::sin(th)});
  const ImplicitReport rep = solve_implicit(K.field, Vec{0.0, 0.0}, Vec{0.0, 0.0},
                                            xs, SolveMode::existence_only, opts);
  const auto profile = continuity_profile(rep, {0.1, 0.05, 0.01});
  REQUIRE(profile.size() == 3);
  for (std::size_t i = 0; i < profile.size(); ++i)
    CHECK(profile[i].second <= 1.1 * std::sqrt(profile[i].first));
  CHECK(profile[2].second < 0.12);
  for (std::size_t i = 1; i < profile.size(); ++i)
    CHECK(profile[i].second <= profile[i - 1].second);

  CHECK_THROWS_AS(continuity_profile(rep, {1e-6}), InsufficientSamples);
  const ImplicitReport empty{
      Vec{0.0, 0.0}, Vec{0.0, 0.0}, SolveMode::existence_only, 1e-10, {}, {}};
  CHECK_THROWS_AS(continuity_profile(empty, {0.1}), InsufficientSamples);
}
