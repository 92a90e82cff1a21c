#include "isocrit/components.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

Vec center_of(const Box& box, int res, int dim, std::size_t flat) {
  Vec p(dim);
  std::size_t rest = flat;
  for (int j = 0; j < dim; ++j) {
    const std::size_t idx = rest % res;
    rest /= res;
    p[j] = box.lo(j) + box.length(j) * (idx + 0.5) / res;
  }
  return p;
}

std::size_t flat_of(const Box& box, int res, int dim, std::span<const double> p) {
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (int j = 0; j < dim; ++j) {
    const double t = (p[j] - box.lo(j)) / box.length(j);
    long idx = static_cast<long>(std::floor(t * res));
    idx = std::clamp<long>(idx, 0, res - 1);
    flat += stride * static_cast<std::size_t>(idx);
    stride *= res;
  }
  return flat;
}

}  // namespace

Vec ModulusGrid::cell_center(std::size_t flat) const {
  return center_of(box, res, dim, flat);
}

std::size_t ModulusGrid::cell_of(std::span<const double> p) const {
  if (!box.contains(p)) throw SeedOutsideBox("seed point outside the grid box");
  return flat_of(box, res, dim, p);
}

Vec ComponentLabeling::cell_center(std::size_t flat) const {
  return center_of(box, res, dim, flat);
}

ModulusGrid rasterize(const VectorField& field, const Vec& y0, const Box& box,
                      int res) {
  const int dim = field.input_dim();
  if (dim != 2 && dim != 3)
    throw DimensionTooHigh("grids support dimension 2 or 3 only");
  if (box.dim() != dim) throw ArityError("box has wrong dimension");
  if (static_cast<int>(y0.size()) != field.output_dim())
    throw ArityError("target value has wrong dimension");
  if (!box.contained_in(field.domain_box()))
    throw DomainError("box not contained in the field's domain box");
  if (res < 16) throw ArityError("grid resolution must be at least 16");

  ModulusGrid grid;
  grid.box = box;
  grid.res = res;
  grid.dim = dim;
  grid.y0 = y0;
  std::size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= res;
  grid.values.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const Vec h = field.eval(center_of(box, res, dim, i));
    double s = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) {
      const double d = h[j] - y0[j];
      s += d * d;
    }
    grid.values[i] = std::sqrt(s);
  });
  return grid;
}

ComponentLabeling sublevel_components(const ModulusGrid& grid, double r,
                                      const std::vector<Vec>& seeds) {
  if (r <= 0.0) throw ArityError("sublevel radius must be positive");

  ComponentLabeling lab;
  lab.r = r;
  lab.box = grid.box;
  lab.res = grid.res;
  lab.dim = grid.dim;
  lab.labels.assign(grid.cell_count(), 0);

  const int res = grid.res;
  const int dim = grid.dim;
  std::size_t strides[3] = {1, static_cast<std::size_t>(res),
                            static_cast<std::size_t>(res) * res};

  // Row-major scan; BFS flood fill over face neighbours below the threshold.
  std::vector<std::size_t> queue;
  int next_label = 0;
  for (std::size_t start = 0; start < grid.cell_count(); ++start) {
    if (lab.labels[start] != 0 || grid.values[start] >= r) continue;
    ++next_label;
    lab.labels[start] = next_label;
    queue.clear();
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t cell = queue.back();
      queue.pop_back();
      std::size_t rest = cell;
      for (int j = 0; j < dim; ++j) {
        const std::size_t idx = rest % res;
        rest /= res;
        if (idx > 0) {
          const std::size_t nb = cell - strides[j];
          if (lab.labels[nb] == 0 && grid.values[nb] < r) {
            lab.labels[nb] = next_label;
            queue.push_back(nb);
          }
        }
        if (idx + 1 < static_cast<std::size_t>(res)) {
          const std::size_t nb = cell + strides[j];
          if (lab.labels[nb] == 0 && grid.values[nb] < r) {
            lab.labels[nb] = next_label;
            queue.push_back(nb);
          }
        }
      }
    }
  }
  lab.count = next_label;

  lab.seed_map.reserve(seeds.size());
  for (const Vec& s : seeds) {
    const std::size_t cell = grid.cell_of(s);
    lab.seed_map.push_back({s, lab.labels[cell]});
  }
  return lab;
}

CountingCurve counting_curve(const VectorField& field, const Vec& y0,
                             const std::vector<Vec>& seeds, const Box& box,
                             int res, const std::vector<double>& r_list) {
  for (std::size_t i = 1; i < r_list.size(); ++i)
    if (r_list[i] <= r_list[i - 1])
      throw ArityError("r_list must be strictly increasing");
  if (!r_list.empty() && r_list.front() <= 0.0)
    throw ArityError("r values must be positive");

  const ModulusGrid grid = rasterize(field, y0, box, res);
  CountingCurve curve;
  curve.seeds = seeds;
  curve.r_values = r_list;
  curve.x_values.reserve(r_list.size());
  for (double r : r_list) {
    const ComponentLabeling lab = sublevel_components(grid, r, seeds);
    std::vector<int> hit;
    for (const auto& [seed, label] : lab.seed_map)
      if (label > 0) hit.push_back(label);
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    curve.x_values.push_back(static_cast<int>(hit.size()));
  }
  return curve;
}

double min_component_distance(const ComponentLabeling& labeling) {
  if (labeling.count < 2)
    throw SingleComponent("need at least two components");

  // Boundary cells suffice: the closest pair of distinct components is
  // realized between cells that have an off-component face neighbour.
  const int res = labeling.res;
  const int dim = labeling.dim;
  std::size_t strides[3] = {1, static_cast<std::size_t>(res),
                            static_cast<std::size_t>(res) * res};
  std::vector<std::pair<Vec, int>> boundary;
  for (std::size_t cell = 0; cell < labeling.labels.size(); ++cell) {
    const int lbl = labeling.labels[cell];
    if (lbl == 0) continue;
    bool edge = false;
    std::size_t rest = cell;
    for (int j = 0; j < dim && !edge; ++j) {
      const std::size_t idx = rest % res;
      rest /= res;
      if (idx == 0 || labeling.labels[cell - strides[j]] != lbl) edge = true;
      else if (idx + 1 == static_cast<std::size_t>(res) ||
               labeling.labels[cell + strides[j]] != lbl)
        edge = true;
    }
    if (edge) boundary.push_back({labeling.cell_center(cell), lbl});
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < boundary.size(); ++i)
    for (std::size_t j = i + 1; j < boundary.size(); ++j)
      if (boundary[i].second != boundary[j].second)
        best = std::min(best, dist(boundary[i].first, boundary[j].first));
  return best;
}

DiscretenessCertificate discreteness_certificate(const VectorField& field,
                                                 const Vec& x0,
                                                 const std::vector<double>& rho_list,
                                                 int res) {
  if (!field.is_square()) throw ArityError("needs a square field");
  const Vec h0 = field.eval(x0);

  for (std::size_t i = 1; i < rho_list.size(); ++i)
    if (rho_list[i] >= rho_list[i - 1])
      throw ArityError("rho_list must be strictly decreasing");

  for (double rho : rho_list) {
    if (rho <= 0.0) continue;
    const Box ball_box = Box::cube(x0, rho);
    if (!ball_box.contained_in(field.domain_box())) continue;

    double margin = std::numeric_limits<double>::infinity();
    for (const Vec& p : sphere_points(x0, rho, field.input_dim() == 2 ? 512 : 64)) {
      const Vec h = field.eval(p);
      double s = 0.0;
      for (std::size_t j = 0; j < h.size(); ++j) {
        const double d = h[j] - h0[j];
        s += d * d;
      }
      margin = std::min(margin, std::sqrt(s));
    }
    if (margin <= 1e-14) continue;

    // The sublevel set {|H - H(x0)| < margin/2} restricted to the ball must
    // be one component hugging x0; a detached piece in the annulus could
    // harbor another preimage of H(x0).
    const ModulusGrid grid = rasterize(field, h0, ball_box, res);
    const ComponentLabeling lab = sublevel_components(grid, margin / 2.0, {x0});
    const int home = lab.seed_map.front().second;
    if (home == 0) continue;
    bool detached = false;
    for (std::size_t cell = 0; cell < lab.labels.size() && !detached; ++cell) {
      if (lab.labels[cell] == 0 || lab.labels[cell] == home) continue;
      const Vec c = lab.cell_center(cell);
      if (dist(c, x0) > 1e-3 * rho && dist(c, x0) <= rho) detached = true;
    }
    if (!detached) return {rho, margin};
  }
  throw NoRadiusFound("no radius in the list yields a discreteness certificate");
}

WallCheck high_wall_check(const VectorField& field, const Box& box,
                          const std::vector<Vec>& curve, const Vec& x0,
                          const Vec& x1) {
  if (!field.is_square()) throw ArityError("needs a square field");
  if (curve.size() < 2) throw ArityError("curve needs at least two points");
  if (dist(curve.front(), x0) > 1e-12 || dist(curve.back(), x1) > 1e-12)
    throw ArityError("curve endpoints must be x0 and x1");
  if (dist(x0, x1) < 1e-12) throw ArityError("endpoints must be distinct");
  for (const Vec& p : curve)
    if (!box.contains(p)) throw DomainError("curve leaves the box");
  if (!box.contained_in(field.domain_box()))
    throw DomainError("box not contained in the field's domain box");

  WallCheck check;
  check.wall = std::numeric_limits<double>::infinity();
  const int bres = box.dim() == 2 ? 256 : 48;
  for (const Vec& p : box_boundary_points(box, bres))
    check.wall = std::min(check.wall, norm(field.eval(p)));

  constexpr int kSamplesPerEdge = 256;
  check.curve_max = 0.0;
  check.local_homeo_spot_check = true;
  for (std::size_t e = 0; e + 1 < curve.size(); ++e) {
    for (int s = 0; s <= kSamplesPerEdge; ++s) {
      const double t = static_cast<double>(s) / kSamplesPerEdge;
      Vec p(curve[e].size());
      for (std::size_t j = 0; j < p.size(); ++j)
        p[j] = (1.0 - t) * curve[e][j] + t * curve[e + 1][j];
      check.curve_max = std::max(check.curve_max, norm(field.eval(p)));
      if (std::abs(field.jacobian_det(p).value) <= 0.0)
        check.local_homeo_spot_check = false;
    }
  }

  const Vec he0 = field.eval(x0);
  const Vec he1 = field.eval(x1);
  check.endpoint_gap = dist(he0, he1);

  const bool equal_values = check.endpoint_gap < 1e-10;
  const bool below_wall = check.curve_max < check.wall;
  check.verdict = (equal_values && below_wall && check.local_homeo_spot_check)
                      ? WallVerdict::violation
                      : WallVerdict::consistent;
  return check;
}

}  // namespace isocrit
