#ifndef ISOCRIT_IMPLICIT_HPP
#define ISOCRIT_IMPLICIT_HPP

#include <functional>
#include <optional>
#include <vector>

#include "isocrit/field.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

// The radius/height chain that localizes and uniquifies the implicit
// solution: an injectivity radius s1 in y with wall height N on its sphere,
// an x-radius r1 keeping the wall above N/2, a shrink factor k making |F|
// small on the inner box, and the final radii s2 = s1/k and r2.
struct CalibrationConstants {
  double s1 = 0.0;
  double wall = 0.0;  // N = min |F(x0, y) - F(x0, y0)| on |y - y0| = s1
  double r1 = 0.0;
  int k = 0;
  double s2 = 0.0;
  double r2 = 0.0;
};

enum class SolveMode { unique, existence_only };
enum class CertKind { winding, degree, bisection, none };

struct SampleSolution {
  Vec x;
  bool solved = false;
  Vec y;                // g(x), when solved
  double residual = 0.0;  // |F(x, g(x)) - F(x0, y0)|
  CertKind certificate = CertKind::none;
};

struct ImplicitReport {
  Vec x0, y0;
  SolveMode mode = SolveMode::existence_only;
  double tol = 0.0;
  std::optional<CalibrationConstants> calibration;
  std::vector<SampleSolution> samples;

  int solved_count() const;
};

struct ImplicitOptions {
  int sphere_res = 64;   // samples per sphere scan
  int ball_res = 12;     // axis resolution of calibration ball grids
  int scan_res = 33;     // axis resolution of the y-locate / uniqueness grid
  double tol = 1e-10;
  double initial_s = 0.5;  // first guess for the injectivity radius s1
  double initial_r = 0.5;  // first guess for the x-radius r1
  // Per-sample y-search radius in existence mode (default: default_radius).
  std::function<double(std::span<const double> x)> search_radius;
  double default_radius = 0.5;
  // Restrict existence-mode root picking to this sub-box of the y-slice.
  std::optional<Box> y_box;
};

// Sampled construction of the calibration constants for F near (x0, y0),
// working on the shifted map F - F(x0, y0). Each radius search halves (or
// doubles, for k) at most 40 times; running out means the hypotheses could
// not be confirmed numerically and raises CalibrationFailure.
CalibrationConstants calibrate(const VectorField& F, const Vec& x0, const Vec& y0,
                               const ImplicitOptions& opts = {});

// Solve F(x, y) = F(x0, y0) for y = g(x) per sample. Unique mode runs the
// full calibration, solves inside B(y0, s2) for |x - x0| <= r2, and
// cross-checks uniqueness with a full-ball grid scan (a second solution
// raises MultipleSolutions). Existence mode certifies each sample slice by
// winding (m = 2) or degree (m >= 3) on its own search ball and returns
// whichever root the search region isolates; unsolved samples are recorded,
// not thrown. m = 1 falls back to classical sign-change bisection.
ImplicitReport solve_implicit(const VectorField& F, const Vec& x0, const Vec& y0,
                              const std::vector<Vec>& x_samples, SolveMode mode,
                              const ImplicitOptions& opts = {});

// (delta, sup |g(x) - y0| over solved samples with |x - x0| <= delta); at
// least 3 solved samples are required within each delta.
std::vector<std::pair<double, double>> continuity_profile(
    const ImplicitReport& report, const std::vector<double>& deltas);

// Bisection on the scalar slice y -> F(x, y) - target over [y_lo, y_hi];
// empty when the endpoint signs agree.
std::optional<double> solve_slice_1d(const VectorField& F, const Vec& x,
                                     double y_lo, double y_hi,
                                     double target = 0.0);

}  // namespace isocrit

#endif
