#ifndef ISOCRIT_DEGREE_HPP
#define ISOCRIT_DEGREE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isocrit/field.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

struct Preimage {
  Vec x;
  int sign = 0;           // sign of det J at the root
  double residual = 0.0;  // |H(x) - y|
};

// Computational witness for zero existence: nonvanishing boundary plus a
// nonzero signed preimage count of a regular value.
struct DegreeCertificate {
  Vec target;
  Box box;
  std::vector<Preimage> preimages;
  int degree = 0;
  double boundary_margin = 0.0;
  int grid_res = 0;
};

struct NewtonOptions {
  int max_iterations = 50;
  double step_tol = 1e-12;
  double residual_tol = 1e-10;
};

struct NewtonResult {
  Vec x;
  double residual = 0.0;
  int iterations = 0;
};

// Newton iteration for H(x) = y from one seed; empty when it fails to meet
// both the step and residual tolerances.
std::optional<NewtonResult> newton_refine(const VectorField& field, const Vec& y,
                                          Vec seed, const NewtonOptions& opts = {});

// Degree by regular-value preimage counting: Newton from every grid cell
// center, deduplicate at radius 1e-6 (roots sorted lexicographically first,
// so the result is independent of seed order), sum Jacobian determinant
// signs. Throws BoundaryZero when H - y vanishes on the sampled boundary and
// SingularPreimage when a located root has |det J| <= 1e-8.
DegreeCertificate preimage_degree(const VectorField& field, const Vec& y,
                                  const Box& box, int grid_res);

// Prop-5.1 style certificate for H = 0 on the box: nonzero degree proves a
// zero in the interior; degree zero returns nothing (existence undetermined).
std::optional<DegreeCertificate> certify_zero(const VectorField& field,
                                              const Box& box, int grid_res);

// Radius r such that every target within r of H(center) is expected to have
// a preimage in the box: the minimum of |H - H(center)| over the sampled
// boundary.
double covered_ball_radius(const VectorField& field, const Box& box);

// A continuously parametrized field F_t, t in [0,1].
struct HomotopyFamily {
  int dim = 0;
  std::string description;
  std::function<Vec(double t, std::span<const double> x)> at;
};

struct HomotopyScan {
  std::vector<double> t_samples;
  double min_modulus = 0.0;
  bool vanished = false;  // min fell to (numerical) zero at some sample
  std::string description;
};

// Minimum of |F_t| over all (t, boundary point) pairs. A positive minimum
// certifies, at sample resolution, that the endpoint maps share their
// degree / winding.
HomotopyScan homotopy_boundary_scan(const HomotopyFamily& family,
                                    const std::vector<Vec>& boundary,
                                    int t_count);

}  // namespace isocrit

#endif
