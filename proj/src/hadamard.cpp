#include "isocrit/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

std::vector<Vec> grid_nodes(const Box& box, int res) {
  const int dim = box.dim();
  std::vector<Vec> pts;
  std::vector<int> idx(dim, 0);
  while (true) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j)
      p[j] = box.lo(j) + box.length(j) * idx[j] / res;
    pts.push_back(std::move(p));
    int j = 0;
    while (j < dim && ++idx[j] > res) idx[j++] = 0;
    if (j == dim) break;
  }
  return pts;
}

}  // namespace

HadamardReport hadamard_check(const VectorField& field, const Box& box,
                              int grid_res, const std::vector<double>& radii,
                              int pair_samples, const HadamardOptions& opts) {
  if (!field.is_square()) throw ArityError("needs a square field");
  if (box.dim() != field.input_dim()) throw ArityError("box has wrong dimension");
  if (!box.contained_in(field.domain_box()))
    throw DomainError("box not contained in the field's domain box");
  const Vec center = box.center();
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw ArityError("radii must be increasing");
  for (double R : radii) {
    if (R <= 0.0) throw ArityError("radii must be positive");
    for (int j = 0; j < box.dim(); ++j)
      if (center[j] - R < box.lo(j) || center[j] + R > box.hi(j))
        throw DomainError("sphere radius does not fit in the box");
  }

  HadamardReport report;

  // (1) critical point scan over grid nodes
  const std::vector<Vec> nodes = grid_nodes(box, grid_res);
  std::vector<double> dets(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    dets[i] = std::abs(field.jacobian_det(nodes[i]).value);
  });
  report.min_abs_det = *std::min_element(dets.begin(), dets.end());
  if (report.min_abs_det < opts.det_tol) {
    report.verdict = HadamardVerdict::critical_point_found;
    return report;
  }

  // (2) properness proxy: sphere minima must grow strictly and double overall
  const int sphere_res = field.input_dim() == 2 ? 512 : 64;
  for (double R : radii) {
    double min_mod = std::numeric_limits<double>::infinity();
    for (const Vec& p : sphere_points(center, R, sphere_res))
      min_mod = std::min(min_mod, norm(field.eval(p)));
    report.properness_samples.push_back({R, min_mod});
  }
  bool growing = report.properness_samples.size() >= 2;
  for (std::size_t i = 1; i < report.properness_samples.size(); ++i)
    if (report.properness_samples[i].second <=
        report.properness_samples[i - 1].second)
      growing = false;
  if (growing && report.properness_samples.back().second <
                     2.0 * report.properness_samples.front().second)
    growing = false;
  if (!growing) {
    report.verdict = HadamardVerdict::properness_doubtful;
    return report;
  }

  // (3) seeded random pair scan: spatial hashing of images, cell size 4*tol
  std::mt19937_64 rng(opts.seed);
  const double cell = 4.0 * opts.collision_tol;
  std::map<std::vector<long long>, std::vector<std::size_t>> buckets;
  std::vector<Vec> xs;
  std::vector<Vec> images;
  xs.reserve(pair_samples);
  images.reserve(pair_samples);
  for (int i = 0; i < pair_samples; ++i) {
    Vec x(box.dim());
    for (int j = 0; j < box.dim(); ++j) {
      std::uniform_real_distribution<double> u(box.lo(j), box.hi(j));
      x[j] = u(rng);
    }
    images.push_back(field.eval(x));
    xs.push_back(std::move(x));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<long long> key(box.dim());
    for (int j = 0; j < box.dim(); ++j)
      key[j] = static_cast<long long>(std::floor(images[i][j] / cell));
    // compare against occupants of this and all touching cells
    std::vector<int> delta(box.dim(), -1);
    while (true) {
      std::vector<long long> probe = key;
      for (int j = 0; j < box.dim(); ++j) probe[j] += delta[j];
      if (auto it = buckets.find(probe); it != buckets.end()) {
        for (std::size_t other : it->second) {
          if (dist(images[i], images[other]) < opts.collision_tol &&
              dist(xs[i], xs[other]) > opts.separation) {
            report.collision = {xs[other], xs[i]};
            report.verdict = HadamardVerdict::injectivity_violated;
            return report;
          }
        }
      }
      int j = 0;
      while (j < box.dim() && ++delta[j] > 1) delta[j++] = -1;
      if (j == box.dim()) break;
    }
    buckets[key].push_back(i);
  }

  report.verdict = HadamardVerdict::consistent_with_diffeo;
  return report;
}

}  // namespace isocrit
