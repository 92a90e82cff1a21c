#ifndef ISOCRIT_HADAMARD_HPP
#define ISOCRIT_HADAMARD_HPP

#include <optional>
#include <utility>
#include <vector>

#include "isocrit/field.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

enum class HadamardVerdict {
  consistent_with_diffeo,
  critical_point_found,
  properness_doubtful,
  injectivity_violated,
};

struct HadamardReport {
  double min_abs_det = 0.0;  // over the sampled grid nodes
  std::vector<std::pair<double, double>> properness_samples;  // (R, min |H| on sphere R)
  std::optional<std::pair<Vec, Vec>> collision;  // distant points with close images
  HadamardVerdict verdict = HadamardVerdict::consistent_with_diffeo;
};

struct HadamardOptions {
  double det_tol = 1e-8;        // |det J| below this is a critical point
  double collision_tol = 1e-9;  // image distance counting as a collision
  double separation = 1e-4;     // minimum source distance for a collision
  unsigned long long seed = 0;
};

// Desk-scale screen of the global-diffeomorphism criterion: (1) |det J| at
// the grid nodes of the box (res+1 per axis, so corners and the center of a
// symmetric box are hit); (2) min |H| on spheres of the given radii, which
// must grow strictly and at least double overall; (3) a seeded random pair
// scan for image collisions via spatial hashing. The first failing check
// decides the verdict.
HadamardReport hadamard_check(const VectorField& field, const Box& box,
                              int grid_res, const std::vector<double>& radii,
                              int pair_samples,
                              const HadamardOptions& opts = {});

}  // namespace isocrit

#endif
