#include "isocrit/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "isocrit/degree.hpp"
#include "isocrit/errors.hpp"
#include "isocrit/winding.hpp"

namespace isocrit {

namespace {

constexpr int kMaxHalvings = 40;
constexpr double kPositiveFloor = 1e-14;

Vec concat(std::span<const double> a, std::span<const double> b) {
  Vec out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// F(x, y) - offset as a field of y alone; AST-backed slices keep automatic
// differentiation through the substitution.
VectorField shifted_slice(const VectorField& F, std::span<const double> x,
                          const Vec& offset) {
  VectorField slice = F.bind_prefix(x);
  if (const FieldAst* ast = slice.ast()) {
    AstBuilder b(ast->input_dim, ast->output_dim);
    for (int k = 0; k < ast->output_dim; ++k)
      b.set_root(k, b.sub(b.import(*ast, ast->roots[k], 0), b.constant(offset[k])));
    return VectorField::from_ast(b.take(), slice.domain_box());
  }
  auto base = slice;
  auto off = offset;
  return VectorField::from_callable(
      slice.input_dim(), slice.output_dim(),
      [base, off](std::span<const double> y) {
        Vec v = base.eval(y);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= off[j];
        return v;
      },
      slice.domain_box());
}

double min_modulus_at(const VectorField& F, const Vec& offset,
                      std::span<const double> x, const std::vector<Vec>& ys) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec& y : ys) {
    const Vec v = F.eval(concat(x, y));
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const double d = v[j] - offset[j];
      s += d * d;
    }
    m = std::min(m, std::sqrt(s));
  }
  return m;
}

struct Extremes {
  double min = std::numeric_limits<double>::infinity();
  double max = 0.0;
};

Extremes modulus_extremes(const VectorField& F, const Vec& offset,
                          const std::vector<Vec>& xs, const std::vector<Vec>& ys) {
  Extremes e;
  for (const Vec& x : xs) {
    for (const Vec& y : ys) {
      const Vec v = F.eval(concat(x, y));
      double s = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) {
        const double d = v[j] - offset[j];
        s += d * d;
      }
      s = std::sqrt(s);
      e.min = std::min(e.min, s);
      e.max = std::max(e.max, s);
    }
  }
  return e;
}

// Pairwise injectivity spot check of y -> F(x0, y) on the closed s-ball.
bool injectivity_spot_check(const VectorField& F, const Vec& x0, const Vec& y0,
                            double s, int ball_res) {
  const std::vector<Vec> pts = ball_points(y0, s, std::min(ball_res, 8));
  std::vector<Vec> images;
  images.reserve(pts.size());
  double scale = 1.0;
  for (const Vec& y : pts) {
    images.push_back(F.eval(concat(x0, y)));
    scale = std::max(scale, norm(images.back()));
  }
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (dist(pts[i], pts[j]) > 1e-6 * s &&
          dist(images[i], images[j]) < 1e-11 * scale)
        return false;
  return true;
}

// Winding of y -> F(x,.) - offset on the circle |y - y0| = R, refining on
// unwrap ambiguity; nullopt when no clean lift was obtained.
std::optional<int> circle_winding(const VectorField& shifted, const Vec& y0,
                                  double R) {
  constexpr double kTau = 6.283185307179586476925286766559;
  for (int M = 256; M <= (1 << 16); M *= 2) {
    LoopSample loop;
    loop.closed = true;
    bool zero_on_loop = false;
    for (int k = 0; k < M; ++k) {
      const double th = kTau * k / M;
      const Vec v = shifted.eval(Vec{y0[0] + R * std::cos(th), y0[1] + R * std::sin(th)});
      if (std::hypot(v[0], v[1]) < kPositiveFloor) {
        zero_on_loop = true;
        break;
      }
      loop.params.push_back(static_cast<double>(k) / M);
      loop.values.push_back({v[0], v[1]});
    }
    if (zero_on_loop) return std::nullopt;
    loop.params.push_back(1.0);
    loop.values.push_back(loop.values.front());
    try {
      return angle_lift(loop).winding;
    } catch (const UnwrapAmbiguity&) {
      continue;
    }
  }
  return std::nullopt;
}

struct LocateResult {
  std::vector<Vec> roots;                // residual < tol, inside the ball
  std::vector<Vec> scan_points;          // the full ball grid
  std::vector<double> scan_values;       // |shifted| at the grid points
};

LocateResult locate_roots(const VectorField& shifted, const Vec& y0, double R,
                          int scan_res, double tol) {
  LocateResult out;
  out.scan_points = ball_points(y0, R, scan_res);
  out.scan_values.resize(out.scan_points.size());
  for (std::size_t i = 0; i < out.scan_points.size(); ++i)
    out.scan_values[i] = norm(shifted.eval(out.scan_points[i]));

  std::vector<std::size_t> order(out.scan_points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.scan_values[a] < out.scan_values[b];
  });

  const Vec zero(shifted.output_dim(), 0.0);
  const std::size_t tries = std::min<std::size_t>(order.size(), 64);
  for (std::size_t i = 0; i < tries; ++i) {
    NewtonOptions nopts;
    nopts.residual_tol = tol;
    auto refined = newton_refine(shifted, zero, out.scan_points[order[i]], nopts);
    if (!refined) continue;
    if (dist(refined->x, y0) > R * (1.0 + 1e-9)) continue;
    bool fresh = true;
    for (const Vec& r : out.roots)
      if (dist(r, refined->x) < 1e-6) {
        fresh = false;
        break;
      }
    if (fresh) out.roots.push_back(std::move(refined->x));
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

}  // namespace

int ImplicitReport::solved_count() const {
  int n = 0;
  for (const auto& s : samples) n += s.solved ? 1 : 0;
  return n;
}

CalibrationConstants calibrate(const VectorField& F, const Vec& x0, const Vec& y0,
                               const ImplicitOptions& opts) {
  const int m = F.output_dim();
  const int n = F.input_dim() - m;
  if (m < 2) throw ArityError("topological calibration requires m >= 2");
  if (n < 1) throw ArityError("F must have at least one x variable");
  if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != m)
    throw ArityError("anchor has wrong dimensions");

  const Vec offset = F.eval(concat(x0, y0));
  CalibrationConstants c;

  // s1: halve until the slice looks injective and the sphere wall is positive.
  double s = opts.initial_s;
  double wall = 0.0;
  bool found = false;
  for (int step = 0; step < kMaxHalvings; ++step, s *= 0.5) {
    try {
      if (!injectivity_spot_check(F, x0, y0, s, opts.ball_res)) continue;
      wall = min_modulus_at(F, offset, x0, sphere_points(y0, s, opts.sphere_res));
      if (wall > kPositiveFloor) {
        found = true;
        break;
      }
    } catch (const Error&) {
      // outside the domain or non-finite; shrink and retry
    }
  }
  if (!found) throw CalibrationFailure("no injectivity radius s1 with positive wall");
  c.s1 = s;
  c.wall = wall;

  // r1: halve until the wall stays above N/2 for all |x - x0| <= r1.
  const std::vector<Vec> s1_sphere = sphere_points(y0, c.s1, opts.sphere_res);
  double r = opts.initial_r;
  found = false;
  for (int step = 0; step < kMaxHalvings; ++step, r *= 0.5) {
    try {
      const std::vector<Vec> xs = ball_points(x0, r, opts.ball_res);
      double worst = std::numeric_limits<double>::infinity();
      for (const Vec& x : xs)
        worst = std::min(worst, min_modulus_at(F, offset, x, s1_sphere));
      if (worst >= c.wall / 2.0) {
        found = true;
        break;
      }
    } catch (const Error&) {
    }
  }
  if (!found) throw CalibrationFailure("no x-radius r1 keeps the wall above N/2");
  c.r1 = r;

  // k: double until |F| is uniformly small on the shrunken box. (The
  // uniqueness argument needs the max, which also gives the stated min.)
  found = false;
  for (int k = 2; k <= (1 << 24); k *= 2) {
    const Extremes e =
        modulus_extremes(F, offset, ball_points(x0, c.r1 / k, opts.ball_res),
                         ball_points(y0, c.s1 / k, opts.ball_res));
    if (e.max <= c.wall / 4.0) {
      c.k = k;
      found = true;
      break;
    }
  }
  if (!found) throw CalibrationFailure("no shrink factor k makes |F| <= N/4");
  c.s2 = c.s1 / c.k;

  // r2: halve from r1/k until the s2-sphere wall stays positive. As with
  // r1, positivity is kept by a half-wall margin relative to the x0 slice;
  // a bare "sampled > 0" can miss a zero sliding through the sphere between
  // sample points.
  r = c.r1 / c.k;
  const std::vector<Vec> s2_sphere = sphere_points(y0, c.s2, opts.sphere_res);
  const double s2_wall = min_modulus_at(F, offset, x0, s2_sphere);
  if (s2_wall <= kPositiveFloor)
    throw CalibrationFailure("the x0 slice has no wall on the s2 sphere");
  found = false;
  for (int step = 0; step < kMaxHalvings; ++step, r *= 0.5) {
    const std::vector<Vec> xs = ball_points(x0, r, opts.ball_res);
    double worst = std::numeric_limits<double>::infinity();
    for (const Vec& x : xs)
      worst = std::min(worst, min_modulus_at(F, offset, x, s2_sphere));
    if (worst >= s2_wall / 2.0) {
      found = true;
      break;
    }
  }
  if (!found) throw CalibrationFailure("no x-radius r2 keeps the s2 wall positive");
  c.r2 = r;
  return c;
}

ImplicitReport solve_implicit(const VectorField& F, const Vec& x0, const Vec& y0,
                              const std::vector<Vec>& x_samples, SolveMode mode,
                              const ImplicitOptions& opts) {
  const int m = F.output_dim();
  const int n = F.input_dim() - m;
  if (n < 1) throw ArityError("F must have at least one x variable");
  if (static_cast<int>(x0.size()) != n || static_cast<int>(y0.size()) != m)
    throw ArityError("anchor has wrong dimensions");
  for (const Vec& x : x_samples)
    if (static_cast<int>(x.size()) != n)
      throw ArityError("x sample has wrong dimension");

  ImplicitReport report;
  report.x0 = x0;
  report.y0 = y0;
  report.mode = mode;
  report.tol = opts.tol;

  const Vec offset = F.eval(concat(x0, y0));
  auto radius_for = [&](std::span<const double> x) {
    return opts.search_radius ? opts.search_radius(x) : opts.default_radius;
  };

  // m = 1 sits outside the topological machinery: classical bisection on a
  // sign change, existence mode only.
  if (m == 1) {
    if (mode == SolveMode::unique)
      throw ArityError("unique mode requires m >= 2");
    for (const Vec& x : x_samples) {
      SampleSolution s;
      s.x = x;
      const double R = radius_for(x);
      const auto root = solve_slice_1d(F, x, y0[0] - R, y0[0] + R, offset[0]);
      if (root) {
        s.solved = true;
        s.y = {*root};
        s.residual = std::abs(F.eval(concat(x, s.y))[0] - offset[0]);
        s.certificate = CertKind::bisection;
      }
      report.samples.push_back(std::move(s));
    }
    return report;
  }

  if (mode == SolveMode::unique) {
    report.calibration = calibrate(F, x0, y0, opts);
    const CalibrationConstants& c = *report.calibration;
    for (const Vec& x : x_samples) {
      SampleSolution s;
      s.x = x;
      if (dist(x, x0) > c.r2 * (1.0 + 1e-12)) {
        report.samples.push_back(std::move(s));  // outside the certified radius
        continue;
      }
      const VectorField slice = shifted_slice(F, x, offset);
      const LocateResult loc = locate_roots(slice, y0, c.s2, opts.scan_res, opts.tol);
      if (loc.roots.size() > 1)
        throw MultipleSolutions("two roots inside B(y0, s2); calibration is unsound");
      if (loc.roots.empty()) {
        report.samples.push_back(std::move(s));
        continue;
      }
      const Vec& g = loc.roots.front();
      // Full-ball scan: nothing else in the ball may look like a solution.
      for (std::size_t i = 0; i < loc.scan_points.size(); ++i)
        if (loc.scan_values[i] < 0.5 * opts.tol && dist(loc.scan_points[i], g) > 1e-6)
          throw MultipleSolutions("grid scan found a second near-solution");
      s.solved = true;
      s.y = g;
      s.residual = norm(slice.eval(g));
      if (m == 2) {
        const auto w = circle_winding(slice, y0, c.s2);
        s.certificate = (w && *w != 0) ? CertKind::winding : CertKind::none;
      } else {
        try {
          const Box cube = Box::cube(y0, c.s2);
          const auto cert = certify_zero(slice, cube, std::max(8, opts.scan_res / 2));
          s.certificate = cert ? CertKind::degree : CertKind::none;
        } catch (const Error&) {
          s.certificate = CertKind::none;
        }
      }
      if (s.certificate == CertKind::none) s.solved = false;
      report.samples.push_back(std::move(s));
    }
    return report;
  }

  // Existence-only: certify and solve each sample slice on its own ball.
  for (const Vec& x : x_samples) {
    SampleSolution s;
    s.x = x;
    const double R = radius_for(x);
    const VectorField slice = shifted_slice(F, x, offset);

    CertKind cert = CertKind::none;
    if (m == 2) {
      const auto w = circle_winding(slice, y0, R);
      if (w && *w != 0) cert = CertKind::winding;
    } else {
      try {
        const Box cube = Box::cube(y0, R / std::sqrt(static_cast<double>(m)));
        if (certify_zero(slice, cube, std::max(8, opts.scan_res / 2)))
          cert = CertKind::degree;
      } catch (const Error&) {
      }
    }

    LocateResult loc = locate_roots(slice, y0, R, opts.scan_res, opts.tol);
    if (opts.y_box) {
      std::erase_if(loc.roots,
                    [&](const Vec& r) { return !opts.y_box->contains(r, 1e-12); });
    }
    if (!loc.roots.empty()) {
      s.solved = true;
      s.y = loc.roots.front();  // lexicographically smallest: no branch choice
      s.residual = norm(slice.eval(s.y));
      s.certificate = cert;
    }
    report.samples.push_back(std::move(s));
  }
  return report;
}

std::vector<std::pair<double, double>> continuity_profile(
    const ImplicitReport& report, const std::vector<double>& deltas) {
  std::vector<std::pair<double, double>> profile;
  profile.reserve(deltas.size());
  for (double d : deltas) {
    int count = 0;
    double sup = 0.0;
    for (const auto& s : report.samples) {
      if (!s.solved || dist(s.x, report.x0) > d) continue;
      ++count;
      sup = std::max(sup, dist(s.y, report.y0));
    }
    if (count < 3)
      throw InsufficientSamples("need at least 3 solved samples within delta = " +
                                std::to_string(d));
    profile.push_back({d, sup});
  }
  return profile;
}

std::optional<double> solve_slice_1d(const VectorField& F, const Vec& x,
                                     double y_lo, double y_hi, double target) {
  if (F.output_dim() != 1) throw ArityError("1-d slice solve needs a scalar field");
  if (!(y_lo < y_hi)) throw ArityError("invalid bracket");
  const VectorField slice =
      static_cast<int>(x.size()) > 0 ? F.bind_prefix(x) : F;

  auto f = [&](double y) { return slice.eval(Vec{y})[0] - target; };
  double lo = y_lo, hi = y_hi;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) return std::nullopt;

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating resolution
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

}  // namespace isocrit
