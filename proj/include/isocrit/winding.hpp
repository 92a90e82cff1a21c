#ifndef ISOCRIT_WINDING_HPP
#define ISOCRIT_WINDING_HPP

#include <vector>

#include "isocrit/field.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

// A sampled closed loop in R^2 \ {0}: the restriction of H - H(x0) to a
// circle (or box boundary), normalized implicitly to the unit circle when
// lifted. Angles are kept in turns throughout, so winding numbers come out
// as exact small integers.
struct LoopSample {
  std::vector<double> params;  // strictly increasing, 0 = first, 1 = last
  std::vector<Vec2> values;    // one 2-vector per parameter
  bool closed = false;
};

struct AngleLift {
  std::vector<double> lift_values;  // turns
  double base = 0.0;                // lift at t=0, in [0,1)
  int winding = 0;
};

struct IndexResult {
  Vec2 center{0.0, 0.0};
  double radius = 0.0;
  int sign = 1;
  int magnitude = 0;
  int samples_used = 0;
  double min_modulus = 0.0;
  bool valid = false;
};

// Values H(x0 + rho e(t)) - H(x0) at t_k = k/M around the circle; the last
// sample reuses the first so the loop closes exactly.
LoopSample sample_circle_map(const VectorField& field, Vec2 x0, double rho,
                             int M);

// Same construction along the boundary of a planar box (counterclockwise
// from the lower-left corner), with values H - y. Feeds the degree/winding
// cross-check.
LoopSample sample_box_loop(const VectorField& field, const Vec& y,
                           const Box& box, int M);

// The unique discrete lift with base in [0,1) and per-step wrapped
// differences in (-1/2, 1/2]. Steps within 1e-9 of a half turn are
// ambiguous and raise UnwrapAmbiguity (refine M and retry).
AngleLift angle_lift(const LoopSample& loop);

int winding_number(const AngleLift& lift);

// Index of the isolated preimage x0: winding of H - H(x0) on the circle of
// radius rho, refined by doubling M from 64 until two consecutive levels
// agree. Sign and magnitude are reported separately.
IndexResult local_index(const VectorField& field, Vec2 x0, double rho);

// True when the map is a local homeomorphism near the center, i.e. the
// index magnitude is exactly 1.
bool homeomorphism_verdict(const IndexResult& result);

}  // namespace isocrit

#endif
