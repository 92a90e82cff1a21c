#ifndef ISOCRIT_COMPONENTS_HPP
#define ISOCRIT_COMPONENTS_HPP

#include <string>
#include <vector>

#include "isocrit/field.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

// Per-cell |H(center) - y0| over a res^dim grid; dimension is capped at 3
// because memory scales as res^dim.
struct ModulusGrid {
  Box box;
  int res = 0;
  int dim = 0;
  Vec y0;
  std::vector<double> values;  // row-major, axis 0 fastest

  std::size_t cell_count() const { return values.size(); }
  Vec cell_center(std::size_t flat) const;
  // Flat index of the cell containing p; throws SeedOutsideBox.
  std::size_t cell_of(std::span<const double> p) const;
};

// Face-connected components of the strict sublevel set {value < r}, labeled
// 1..count in row-major first visit order; 0 marks cells at or above r.
struct ComponentLabeling {
  double r = 0.0;
  Box box;
  int res = 0;
  int dim = 0;
  std::vector<int> labels;
  int count = 0;
  std::vector<std::pair<Vec, int>> seed_map;  // seed point -> label (0 = uncovered)

  Vec cell_center(std::size_t flat) const;
};

// The counting function r -> X(r): number of distinct sublevel components
// holding at least one seed.
struct CountingCurve {
  std::vector<double> r_values;
  std::vector<int> x_values;
  std::vector<Vec> seeds;
};

ModulusGrid rasterize(const VectorField& field, const Vec& y0, const Box& box,
                      int res);

ComponentLabeling sublevel_components(const ModulusGrid& grid, double r,
                                      const std::vector<Vec>& seeds);

CountingCurve counting_curve(const VectorField& field, const Vec& y0,
                             const std::vector<Vec>& seeds, const Box& box,
                             int res, const std::vector<double>& r_list);

// Minimum distance between cell centers of distinct components; positive
// whenever there are at least two components.
double min_component_distance(const ComponentLabeling& labeling);

struct DiscretenessCertificate {
  double rho = 0.0;
  double margin = 0.0;  // min |H - H(x0)| over the sampled sphere of radius rho
};

// Heuristic certificate that H attains H(x0) near x0 only at x0: the first
// rho whose sphere margin is positive and whose sublevel set
// {|H - H(x0)| < margin/2} inside the ball is a single component around x0.
DiscretenessCertificate discreteness_certificate(const VectorField& field,
                                                 const Vec& x0,
                                                 const std::vector<double>& rho_list,
                                                 int res);

enum class WallVerdict { consistent, violation };

struct WallCheck {
  WallVerdict verdict = WallVerdict::consistent;
  double wall = 0.0;        // N: min |H| over the sampled box boundary
  double curve_max = 0.0;   // W: max |H| along the sampled curve
  double endpoint_gap = 0.0;
  bool local_homeo_spot_check = false;  // sampled |det J| > 0 along the curve
};

// Checks the forbidden configuration: equal endpoint values joined by a
// curve staying strictly below the boundary wall while the field looks like
// a local homeomorphism along the curve. A violation flags a numerical or
// hypothesis failure somewhere off the curve.
WallCheck high_wall_check(const VectorField& field, const Box& box,
                          const std::vector<Vec>& curve, const Vec& x0,
                          const Vec& x1);

}  // namespace isocrit

#endif
