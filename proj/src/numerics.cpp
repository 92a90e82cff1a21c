#include "isocrit/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "isocrit/errors.hpp"

namespace isocrit {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Box Box::cube(std::span<const double> center, double half_side) {
  Box b;
  b.side.reserve(center.size());
  for (double c : center) b.side.push_back({c - half_side, c + half_side});
  return b;
}

Box Box::unbounded(int dim) {
  Box b;
  b.side.assign(static_cast<std::size_t>(dim), {-1e12, 1e12});
  return b;
}

Vec Box::center() const {
  Vec c(side.size());
  for (std::size_t i = 0; i < side.size(); ++i) c[i] = 0.5 * (side[i][0] + side[i][1]);
  return c;
}

bool Box::contains(std::span<const double> x, double tol) const {
  if (x.size() != side.size()) return false;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (x[i] < side[i][0] - tol || x[i] > side[i][1] + tol) return false;
  return true;
}

bool Box::strictly_inside(std::span<const double> x, double margin) const {
  if (x.size() != side.size()) return false;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (x[i] <= side[i][0] + margin || x[i] >= side[i][1] - margin) return false;
  return true;
}

bool Box::contained_in(const Box& outer) const {
  if (outer.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (lo(i) < outer.lo(i) || hi(i) > outer.hi(i)) return false;
  return true;
}

DetResult lu_det(const Mat& m) {
  const int n = m.rows;
  Mat u = m;
  double det = 1.0;
  double scale = 1.0;
  for (int i = 0; i < n; ++i) {
    double row_max = 0.0;
    for (int j = 0; j < n; ++j) row_max = std::max(row_max, std::abs(m(i, j)));
    scale *= row_max;
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(u(i, k)) > std::abs(u(piv, k))) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(u(k, j), u(piv, j));
      det = -det;
    }
    const double p = u(k, k);
    det *= p;
    if (p == 0.0) break;
    for (int i = k + 1; i < n; ++i) {
      const double f = u(i, k) / p;
      for (int j = k; j < n; ++j) u(i, j) -= f * u(k, j);
    }
  }
  DetResult r;
  r.value = det;
  r.near_zero = (scale == 0.0) || (std::abs(det) < 1e-12 * scale);
  return r;
}

bool lu_solve(Mat m, Vec b, Vec& x) {
  const int n = m.rows;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (std::abs(m(piv, k)) < 1e-300) return false;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      m(i, k) = 0.0;
      for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      b[i] -= f * b[k];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[j];
    x[i] = s / m(i, i);
  }
  return true;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return out;
}

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

// Deterministic unit directions for dims > 3 (splitmix-style hash into
// gaussians would be heavier than needed; a lagged trig sequence spreads
// well enough for min-modulus scans).
Vec direction_for(int dim, std::size_t i) {
  Vec d(dim);
  double s = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double t = std::sin(0.7548776662 * static_cast<double>(i + 1) * (j + 1) +
                              1.1327472340 * (j + 1));
    d[j] = t;
    s += t * t;
  }
  const double inv = 1.0 / std::max(std::sqrt(s), 1e-12);
  for (double& v : d) v *= inv;
  return d;
}

}  // namespace

std::vector<Vec> sphere_points(std::span<const double> center, double radius,
                               int res) {
  const int dim = static_cast<int>(center.size());
  std::vector<Vec> pts;
  if (dim == 1) {
    pts.push_back({center[0] - radius});
    pts.push_back({center[0] + radius});
    return pts;
  }
  if (dim == 2) {
    pts.reserve(res);
    for (int k = 0; k < res; ++k) {
      const double th = kTau * k / res;
      pts.push_back({center[0] + radius * std::cos(th),
                     center[1] + radius * std::sin(th)});
    }
    return pts;
  }
  if (dim == 3) {
    // Poles plus a latitude/longitude grid.
    pts.push_back({center[0], center[1], center[2] + radius});
    pts.push_back({center[0], center[1], center[2] - radius});
    for (int i = 1; i < res; ++i) {
      const double phi = M_PI * i / res;
      for (int j = 0; j < res; ++j) {
        const double th = kTau * j / res;
        pts.push_back({center[0] + radius * std::sin(phi) * std::cos(th),
                       center[1] + radius * std::sin(phi) * std::sin(th),
                       center[2] + radius * std::cos(phi)});
      }
    }
    return pts;
  }
  const std::size_t count = static_cast<std::size_t>(res) * res;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Vec d = direction_for(dim, i);
    for (int j = 0; j < dim; ++j) d[j] = center[j] + radius * d[j];
    pts.push_back(std::move(d));
  }
  return pts;
}

std::vector<Vec> ball_points(std::span<const double> center, double radius,
                             int res) {
  const int dim = static_cast<int>(center.size());
  std::vector<Vec> pts;
  pts.emplace_back(center.begin(), center.end());
  std::vector<int> idx(dim, 0);
  const double h = 2.0 * radius / res;
  while (true) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j)
      p[j] = center[j] - radius + h * (idx[j] + 0.5);
    if (dist(p, center) <= radius) pts.push_back(std::move(p));
    int j = 0;
    while (j < dim && ++idx[j] == res) idx[j++] = 0;
    if (j == dim) break;
  }
  return pts;
}

std::vector<Vec> box_boundary_points(const Box& box, int res) {
  const int dim = box.dim();
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  // res+1 nodes per axis on each face so edges and corners are included.
  for (int axis = 0; axis < dim; ++axis) {
    for (int side = 0; side < 2; ++side) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        Vec p(dim);
        for (int j = 0; j < dim; ++j) {
          if (j == axis) {
            p[j] = side == 0 ? box.lo(j) : box.hi(j);
          } else {
            p[j] = box.lo(j) + box.length(j) * idx[j] / res;
          }
        }
        pts.push_back(std::move(p));
        int j = 0;
        while (j < dim) {
          if (j == axis) {
            ++j;
            continue;
          }
          if (++idx[j] <= res) break;
          idx[j++] = 0;
        }
        if (j == dim) break;
      }
    }
  }
  return pts;
}

std::vector<Vec> box_cell_centers(const Box& box, int res) {
  const int dim = box.dim();
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  while (true) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j)
      p[j] = box.lo(j) + box.length(j) * (idx[j] + 0.5) / res;
    pts.push_back(std::move(p));
    int j = 0;
    while (j < dim && ++idx[j] == res) idx[j++] = 0;
    if (j == dim) break;
  }
  return pts;
}

unsigned thread_count() {
  static const unsigned cached = [] {
    const char* env = std::getenv("ISOCRIT_THREADS");
    if (env != nullptr) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<unsigned>(std::min<long>(v, 64));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::clamp(hw, 1u, 16u);
  }();
  return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = thread_count();
  if (workers <= 1 || n < 512) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace isocrit
