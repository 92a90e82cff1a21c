#ifndef ISOCRIT_NUMERICS_HPP
#define ISOCRIT_NUMERICS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace isocrit {

using Vec = std::vector<double>;
using Vec2 = std::array<double, 2>;

double norm(std::span<const double> v);
double dist(std::span<const double> a, std::span<const double> b);

// Axis-aligned box given by one [lo, hi] interval per axis.
struct Box {
  std::vector<std::array<double, 2>> side;

  Box() = default;
  explicit Box(std::vector<std::array<double, 2>> s) : side(std::move(s)) {}

  // Cube [c-h, c+h]^dim around a center point.
  static Box cube(std::span<const double> center, double half_side);
  // Effectively unbounded domain for parsed expression fields.
  static Box unbounded(int dim);

  int dim() const { return static_cast<int>(side.size()); }
  double lo(int i) const { return side[i][0]; }
  double hi(int i) const { return side[i][1]; }
  double length(int i) const { return side[i][1] - side[i][0]; }
  Vec center() const;
  bool contains(std::span<const double> x, double tol = 0.0) const;
  bool strictly_inside(std::span<const double> x, double margin = 0.0) const;
  bool contained_in(const Box& outer) const;
};

// Dense row-major matrix; only the small sizes used by the solvers.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

struct DetResult {
  double value = 0.0;
  bool near_zero = false;  // |det| below 1e-12 times the row-scale bound
};

// Determinant by LU with partial pivoting.
DetResult lu_det(const Mat& m);

// Solve m * x = b in place; returns false when a pivot degenerates.
bool lu_solve(Mat m, Vec b, Vec& x);

// Evenly spaced values including both endpoints.
std::vector<double> linspace(double lo, double hi, int n);

// Points on the sphere |y - center| = radius. Structured grids for
// dim 2 and 3, seeded unit directions beyond that.
std::vector<Vec> sphere_points(std::span<const double> center, double radius,
                               int res);

// Axis-grid points of the closed ball |y - center| <= radius (always
// includes the center itself).
std::vector<Vec> ball_points(std::span<const double> center, double radius,
                             int res);

// Nodes of a res-per-axis grid over every face of the box boundary.
std::vector<Vec> box_boundary_points(const Box& box, int res);

// Cell centers of a res-per-axis grid over the box interior.
std::vector<Vec> box_cell_centers(const Box& box, int res);

// Worker count from ISOCRIT_THREADS (0 or unset = auto).
unsigned thread_count();

// Index-parallel loop with deterministic result placement; the callable
// must only write to its own slot. Exceptions are rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace isocrit

#endif
