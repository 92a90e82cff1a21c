#include "isocrit/gallery.hpp"

#include <cmath>
#include <charconv>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

// Real-coordinate expansion of z -> z^k, built iteratively:
// (re, im) <- (re*x1 - im*x2, re*x2 + im*x1).
FieldAst complex_power_ast(int k) {
  AstBuilder b(2, 2);
  int re = b.var(1);
  int im = b.var(2);
  for (int j = 1; j < k; ++j) {
    const int nre = b.sub(b.mul(re, b.var(1)), b.mul(im, b.var(2)));
    const int nim = b.add(b.mul(re, b.var(2)), b.mul(im, b.var(1)));
    re = nre;
    im = nim;
  }
  b.set_root(0, re);
  b.set_root(1, im);
  return b.take();
}

VectorField parsed(const char* src, int in, int out, double box_half) {
  Box domain;
  domain.side.assign(in, {-box_half, box_half});
  return VectorField::from_ast(parse_field(src, in, out), std::move(domain));
}

void check_scalar(const FieldAst& g) {
  if (g.output_dim != 1)
    throw ArityError("bump function must be scalar-valued");
}

// Sampled non-negativity check over the given points.
void check_nonnegative(const FieldAst& g, const std::vector<Vec>& pts) {
  for (const Vec& p : pts) {
    const double v = eval_ast(g, p)[0];
    if (v < -1e-12)
      throw NegativeBumpError("sampled g = " + std::to_string(v) + " < 0");
  }
}

std::vector<Vec> default_bump_samples(int dim) {
  Box b;
  b.side.assign(dim, {-3.0, 3.0});
  return box_cell_centers(b, dim == 1 ? 2048 : (dim == 2 ? 48 : 12));
}

}  // namespace

std::vector<std::string> gallery_ids() {
  return {"belitskii_kerner", "circle_poly", "hadamard_demo",
          "z2_minus_w4", "z_abs2", "z_pow_n:<k>"};
}

GalleryEntry builtin(const std::string& id) {
  if (id.rfind("z_pow_n:", 0) == 0) {
    int k = 0;
    const char* first = id.data() + 8;
    const char* last = id.data() + id.size();
    const auto res = std::from_chars(first, last, k);
    if (res.ec != std::errc{} || res.ptr != last || k < 1 || k > 12)
      throw UnknownGalleryId(id + " (exponent must be in 1..12)");
    GalleryEntry e;
    e.id = id;
    Box domain;
    domain.side.assign(2, {-10.0, 10.0});
    e.field = VectorField::from_ast(complex_power_ast(k), std::move(domain));
    e.known_facts.push_back({"local_index_at_origin", static_cast<double>(k)});
    return e;
  }
  if (id == "z_abs2") {
    GalleryEntry e;
    e.id = id;
    e.field = parsed("x1*(x1^2 + x2^2) ; x2*(x1^2 + x2^2)", 2, 2, 10.0);
    e.known_facts.push_back({"local_index_at_origin", 1.0});
    return e;
  }
  if (id == "circle_poly") {
    GalleryEntry e;
    e.id = id;
    e.field = parsed("(x1 - 1)^2 + x2^2 - 1", 2, 1, 10.0);
    e.known_facts.push_back({"value_at_origin", 0.0});
    return e;
  }
  if (id == "z2_minus_w4") {
    GalleryEntry e;
    e.id = id;
    e.field = parsed(
        "x1^2 - x2^2 - ((x3^2 - x4^2)^2 - (2*x3*x4)^2) ; "
        "2*x1*x2 - 2*(x3^2 - x4^2)*(2*x3*x4)",
        4, 2, 10.0);
    e.known_facts.push_back({"anchor_slice_index_magnitude", 4.0});
    return e;
  }
  if (id == "belitskii_kerner") {
    GalleryEntry e;
    e.id = id;
    e.field = parsed("x2^2 + x1*x2 - x1^3 ; x3^2 + x1*x3 - x1^3", 3, 2, 10.0);
    e.known_facts.push_back({"slice_winding_magnitude_at_0p05", 1.0});
    return e;
  }
  if (id == "hadamard_demo") {
    GalleryEntry e;
    e.id = id;
    e.field = parsed("2*x1 + 0.5*sin(x2) ; 2*x2 + 0.5*sin(x1)", 2, 2, 50.0);
    e.known_facts.push_back({"min_abs_det_lower_bound", 3.75});
    return e;
  }
  throw UnknownGalleryId(id);
}

VectorField planar_critical_line(const FieldAst& g) {
  check_scalar(g);
  const int zdim = g.input_dim;
  check_nonnegative(g, default_bump_samples(zdim));

  const int n = zdim + 1;
  AstBuilder b(n, n);
  const int gz = b.import(g, g.roots[0], 1);  // z lives in x2..xn
  const int x = b.var(1);
  b.set_root(0, b.add(b.pow(x, 3), b.mul(gz, x)));
  for (int i = 1; i < n; ++i) b.set_root(i, b.var(i + 1));

  AstBuilder db(n, 1);
  const int dgz = db.import(g, g.roots[0], 1);
  db.set_root(0, db.add(db.mul(db.constant(3.0), db.pow(db.var(1), 2)), dgz));
  const FieldAst det_ast = db.take();

  Box domain;
  domain.side.assign(n, {-10.0, 10.0});
  VectorField field = VectorField::from_ast(b.take(), std::move(domain));
  field.attach_analytic_det([det_ast](std::span<const double> x_full) {
    return eval_ast(det_ast, x_full)[0];
  });
  return field;
}

VectorField spherical_critical_set(const FieldAst& g, int n) {
  if (n < 2) throw ArityError("spherical construction needs n >= 2");
  check_scalar(g);
  if (g.input_dim != n)
    throw ArityError("g must be defined on R^n with n = " + std::to_string(n));
  check_nonnegative(g, sphere_points(Vec(n, 0.0), 1.0, n == 2 ? 512 : 48));

  auto g_ast = std::make_shared<const FieldAst>(g);

  auto eval_fn = [g_ast, n](std::span<const double> x) {
    const double r = norm(x);
    if (r == 0.0) return Vec(n, 0.0);
    Vec e(n);
    for (int i = 0; i < n; ++i) e[i] = x[i] / r;
    const double ge = eval_ast(*g_ast, e)[0];
    const double phi = r * r - 3.0 * r + 3.0 + ge * r;  // p(r)/r, polynomial in r
    Vec out(n);
    for (int i = 0; i < n; ++i) out[i] = phi * x[i];
    return out;
  };

  auto jac_fn = [g_ast, n](std::span<const double> x) {
    const double r = norm(x);
    Mat jac(n, n);
    if (r < 1e-300) {
      for (int i = 0; i < n; ++i) jac(i, i) = 3.0;
      return jac;
    }
    Vec e(n);
    for (int i = 0; i < n; ++i) e[i] = x[i] / r;
    const double ge = eval_ast(*g_ast, e)[0];
    const double phi = r * r - 3.0 * r + 3.0 + ge * r;
    const double p_r = 3.0 * r * r - 6.0 * r + 3.0 + 2.0 * ge * r;
    const Mat dg = jacobian_ast(*g_ast, e);
    // Tangential gradient of g on the sphere: (I - ee^T) applied to grad g.
    Vec gt(n);
    double ge_dot = 0.0;
    for (int i = 0; i < n; ++i) ge_dot += dg(0, i) * e[i];
    for (int i = 0; i < n; ++i) gt[i] = dg(0, i) - ge_dot * e[i];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        jac(i, j) = phi * ((i == j ? 1.0 : 0.0) - e[i] * e[j]) +
                    p_r * e[i] * e[j] + r * e[i] * gt[j];
    return jac;
  };

  Box domain;
  domain.side.assign(n, {-10.0, 10.0});
  VectorField field = VectorField::from_callable(n, n, eval_fn, std::move(domain), jac_fn);
  field.attach_analytic_det([g_ast, n](std::span<const double> x) {
    const double r = norm(x);
    double ge = 0.0;
    if (r > 0.0) {
      Vec e(n);
      for (int i = 0; i < n; ++i) e[i] = x[i] / r;
      ge = eval_ast(*g_ast, e)[0];
    }
    const double radial = 3.0 * r * r - 6.0 * r + 3.0 + 2.0 * ge * r;
    const double tangential = r * r - 3.0 * r + 3.0 + ge * r;
    return radial * std::pow(tangential, n - 1);
  });
  return field;
}

FieldAst finite_zero_bump(const std::vector<Vec>& points, int dim) {
  if (dim < 1) throw ArityError("bump dimension must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != dim)
      throw ArityError("bump point has wrong dimension");
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (dist(points[i], points[j]) < 1e-12)
        throw DuplicatePointError("bump points must be pairwise distinct");
  }
  AstBuilder b(dim, 1);
  if (points.empty()) {
    b.set_root(0, b.constant(1.0));
    return b.take();
  }
  int product = -1;
  for (const Vec& p : points) {
    int term = -1;
    for (int j = 0; j < dim; ++j) {
      const int d = b.pow(b.sub(b.var(j + 1), b.constant(p[j])), 2);
      term = term < 0 ? d : b.add(term, d);
    }
    product = product < 0 ? term : b.mul(product, term);
  }
  b.set_root(0, product);
  return b.take();
}

HomotopyFamily belitskii_kerner_family(double x) {
  HomotopyFamily fam;
  fam.dim = 2;
  fam.description = "(t y1^2 + x y1 - t x^3, t y2^2 + x y2 - t x^3), x = " +
                    std::to_string(x);
  fam.at = [x](double t, std::span<const double> y) {
    const double x3 = x * x * x;
    return Vec{t * y[0] * y[0] + x * y[0] - t * x3,
               t * y[1] * y[1] + x * y[1] - t * x3};
  };
  return fam;
}

}  // namespace isocrit
