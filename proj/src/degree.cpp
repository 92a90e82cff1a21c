#include "isocrit/degree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

constexpr double kBoundaryZeroTol = 1e-14;
constexpr double kDedupRadius = 1e-6;
constexpr double kRegularDetTol = 1e-8;

double boundary_min_modulus(const VectorField& field, const Vec& y, const Box& box,
                            int res) {
  const std::vector<Vec> pts = box_boundary_points(box, res);
  std::vector<double> mods(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Vec h = field.eval(pts[i]);
    double s = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double d = h[j] - y[j];
      s += d * d;
    }
    mods[i] = std::sqrt(s);
  });
  double m = std::numeric_limits<double>::infinity();
  for (double v : mods) m = std::min(m, v);
  return m;
}

}  // namespace

std::optional<NewtonResult> newton_refine(const VectorField& field, const Vec& y,
                                          Vec seed, const NewtonOptions& opts) {
  const int m = field.output_dim();
  Vec x = std::move(seed);
  Vec step;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (!field.domain_box().contains(x)) return std::nullopt;
    Vec r = field.eval(x);
    for (int j = 0; j < m; ++j) r[j] -= y[j];
    Mat jac;
    try {
      jac = field.jacobian(x);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (!lu_solve(jac, r, step)) return std::nullopt;
    double step_norm = 0.0;
    for (int j = 0; j < m; ++j) {
      x[j] -= step[j];
      step_norm += step[j] * step[j];
    }
    step_norm = std::sqrt(step_norm);
    if (step_norm < opts.step_tol) {
      if (!field.domain_box().contains(x)) return std::nullopt;
      Vec rr = field.eval(x);
      double res = 0.0;
      for (int j = 0; j < m; ++j) {
        const double d = rr[j] - y[j];
        res += d * d;
      }
      res = std::sqrt(res);
      if (res < opts.residual_tol) return NewtonResult{std::move(x), res, it + 1};
      return std::nullopt;
    }
  }
  return std::nullopt;
}

DegreeCertificate preimage_degree(const VectorField& field, const Vec& y,
                                  const Box& box, int grid_res) {
  if (!field.is_square())
    throw ArityError("degree needs a square field (input_dim == output_dim)");
  if (static_cast<int>(y.size()) != field.output_dim())
    throw ArityError("target has wrong dimension");
  if (box.dim() != field.input_dim())
    throw ArityError("box has wrong dimension");
  if (!box.contained_in(field.domain_box()))
    throw DomainError("box not contained in the field's domain box");
  if (grid_res < 2) throw ArityError("grid resolution must be at least 2");

  DegreeCertificate cert;
  cert.target = y;
  cert.box = box;
  cert.grid_res = grid_res;
  cert.boundary_margin =
      boundary_min_modulus(field, y, box, std::max(grid_res, 64));
  if (cert.boundary_margin < kBoundaryZeroTol)
    throw BoundaryZero("H - y vanishes on the sampled box boundary");

  const std::vector<Vec> seeds = box_cell_centers(box, grid_res);
  std::vector<Vec> converged(seeds.size());
  std::vector<char> ok(seeds.size(), 0);
  parallel_for(seeds.size(), [&](std::size_t i) {
    if (auto r = newton_refine(field, y, seeds[i])) {
      if (box.strictly_inside(r->x)) {
        converged[i] = std::move(r->x);
        ok[i] = 1;
      }
    }
  });

  std::vector<Vec> roots;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    if (ok[i]) roots.push_back(std::move(converged[i]));
  std::sort(roots.begin(), roots.end());

  for (const Vec& r : roots) {
    bool fresh = true;
    for (const Preimage& p : cert.preimages)
      if (dist(r, p.x) < kDedupRadius) {
        fresh = false;
        break;
      }
    if (!fresh) continue;
    const DetResult det = field.jacobian_det(r);
    if (std::abs(det.value) <= kRegularDetTol)
      throw SingularPreimage(
          "preimage with |det J| <= 1e-8; the target is not a regular value");
    Vec h = field.eval(r);
    double res = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double d = h[j] - y[j];
      res += d * d;
    }
    cert.preimages.push_back({r, det.value > 0.0 ? 1 : -1, std::sqrt(res)});
  }

  cert.degree = 0;
  for (const Preimage& p : cert.preimages) cert.degree += p.sign;
  return cert;
}

std::optional<DegreeCertificate> certify_zero(const VectorField& field,
                                              const Box& box, int grid_res) {
  DegreeCertificate cert =
      preimage_degree(field, Vec(field.output_dim(), 0.0), box, grid_res);
  if (cert.degree == 0) return std::nullopt;
  return cert;
}

double covered_ball_radius(const VectorField& field, const Box& box) {
  if (!box.contained_in(field.domain_box()))
    throw DomainError("box not contained in the field's domain box");
  const Vec center = box.center();
  const Vec h0 = field.eval(center);
  const int res = box.dim() == 2 ? 512 : (box.dim() == 3 ? 96 : 24);
  const double r = boundary_min_modulus(field, h0, box, res);
  if (r < kBoundaryZeroTol)
    throw BoundaryZero("H - H(center) vanishes on the sampled box boundary");
  return r;
}

HomotopyScan homotopy_boundary_scan(const HomotopyFamily& family,
                                    const std::vector<Vec>& boundary,
                                    int t_count) {
  if (t_count < 16) throw ArityError("need at least 16 homotopy samples");
  if (boundary.empty()) throw ArityError("empty boundary sample set");

  HomotopyScan scan;
  scan.description = family.description;
  scan.t_samples = linspace(0.0, 1.0, t_count);
  double min_mod = std::numeric_limits<double>::infinity();
  for (double t : scan.t_samples) {
    for (const Vec& p : boundary) {
      const Vec v = family.at(t, p);
      min_mod = std::min(min_mod, norm(v));
    }
  }
  scan.min_modulus = min_mod;
  scan.vanished = min_mod <= kBoundaryZeroTol;
  return scan;
}

}  // namespace isocrit
