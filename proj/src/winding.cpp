#include "isocrit/winding.hpp"

#include <cmath>
#include <limits>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;
constexpr double kZeroOnLoopTol = 1e-14;
constexpr double kHalfTurnGuard = 1e-9;

void check_planar(const VectorField& field) {
  if (field.input_dim() != 2 || field.output_dim() != 2)
    throw ArityError("winding computations need a planar (2 -> 2) field");
}

Vec2 shifted_value(const VectorField& field, const Vec& point, const Vec& offset) {
  const Vec h = field.eval(point);
  return {h[0] - offset[0], h[1] - offset[1]};
}

void check_loop_value(const Vec2& v) {
  if (std::hypot(v[0], v[1]) < kZeroOnLoopTol)
    throw ZeroOnLoop("the map attains the reference value on the loop");
}

}  // namespace

LoopSample sample_circle_map(const VectorField& field, Vec2 x0, double rho, int M) {
  check_planar(field);
  if (M < 8) throw ArityError("need at least 8 loop samples");
  if (rho <= 0.0) throw DomainError("radius must be positive");
  const Vec center{x0[0], x0[1]};
  // The whole closed disk must be evaluable.
  if (!field.domain_box().contains(Vec{x0[0] - rho, x0[1] - rho}) ||
      !field.domain_box().contains(Vec{x0[0] + rho, x0[1] + rho}))
    throw DomainError("closed disk not contained in the field's domain box");
  const Vec h0 = field.eval(center);

  LoopSample loop;
  loop.params.reserve(M + 1);
  loop.values.reserve(M + 1);
  for (int k = 0; k < M; ++k) {
    const double t = static_cast<double>(k) / M;
    const double th = kTau * t;
    const Vec p{x0[0] + rho * std::cos(th), x0[1] + rho * std::sin(th)};
    const Vec2 v = shifted_value(field, p, h0);
    check_loop_value(v);
    loop.params.push_back(t);
    loop.values.push_back(v);
  }
  loop.params.push_back(1.0);
  loop.values.push_back(loop.values.front());  // closes the loop exactly
  loop.closed = true;
  return loop;
}

LoopSample sample_box_loop(const VectorField& field, const Vec& y, const Box& box,
                           int M) {
  check_planar(field);
  if (box.dim() != 2) throw ArityError("box loop needs a planar box");
  if (M < 8) throw ArityError("need at least 8 loop samples");

  // Counterclockwise perimeter parametrization starting at (lo1, lo2).
  const double w = box.length(0), h = box.length(1);
  const double per = 2.0 * (w + h);
  auto point_at = [&](double t) -> Vec {
    double s = t * per;
    if (s <= w) return {box.lo(0) + s, box.lo(1)};
    s -= w;
    if (s <= h) return {box.hi(0), box.lo(1) + s};
    s -= h;
    if (s <= w) return {box.hi(0) - s, box.hi(1)};
    s -= w;
    return {box.lo(0), box.hi(1) - std::min(s, h)};
  };

  LoopSample loop;
  loop.params.reserve(M + 1);
  loop.values.reserve(M + 1);
  for (int k = 0; k < M; ++k) {
    const double t = static_cast<double>(k) / M;
    const Vec2 v = shifted_value(field, point_at(t), y);
    check_loop_value(v);
    loop.params.push_back(t);
    loop.values.push_back(v);
  }
  loop.params.push_back(1.0);
  loop.values.push_back(loop.values.front());
  loop.closed = true;
  return loop;
}

AngleLift angle_lift(const LoopSample& loop) {
  if (!loop.closed) throw ArityError("lift is defined for closed loops only");
  if (loop.values.size() < 2) throw ArityError("loop has too few samples");
  const Vec2& first = loop.values.front();
  const Vec2& last = loop.values.back();
  if (std::hypot(first[0] - last[0], first[1] - last[1]) > 1e-12)
    throw ArityError("loop endpoints disagree; not closed");

  auto angle_in_turns = [](const Vec2& v) {
    check_loop_value(v);
    double a = std::atan2(v[1], v[0]) / kTau;  // [-1/2, 1/2]
    if (a < 0.0) a += 1.0;
    if (a >= 1.0) a -= 1.0;
    return a;
  };

  AngleLift lift;
  lift.base = angle_in_turns(loop.values[0]);
  lift.lift_values.reserve(loop.values.size());
  lift.lift_values.push_back(lift.base);
  double prev_angle = lift.base;
  for (std::size_t k = 1; k < loop.values.size(); ++k) {
    const double a = angle_in_turns(loop.values[k]);
    double d = a - prev_angle;
    // Wrap into (-1/2, 1/2].
    d -= std::floor(d + 0.5);
    if (std::abs(std::abs(d) - 0.5) < kHalfTurnGuard)
      throw UnwrapAmbiguity("consecutive samples nearly half a turn apart");
    lift.lift_values.push_back(lift.lift_values.back() + d);
    prev_angle = a;
  }
  const double total = lift.lift_values.back() - lift.lift_values.front();
  lift.winding = static_cast<int>(std::lround(total));
  if (std::abs(total - lift.winding) > 1e-9)
    throw NumericError("lift of a closed loop did not end on an integer turn");
  return lift;
}

int winding_number(const AngleLift& lift) { return lift.winding; }

IndexResult local_index(const VectorField& field, Vec2 x0, double rho) {
  check_planar(field);
  constexpr int kMaxSamples = 1 << 20;

  IndexResult result;
  result.center = x0;
  result.radius = rho;

  bool have_prev = false;
  int prev_winding = 0;
  for (int M = 64; M <= kMaxSamples; M *= 2) {
    LoopSample loop = sample_circle_map(field, x0, rho, M);
    AngleLift lift;
    try {
      lift = angle_lift(loop);
    } catch (const UnwrapAmbiguity&) {
      have_prev = false;  // refine and start the stability count over
      continue;
    }
    if (have_prev && lift.winding == prev_winding) {
      double min_mod = std::numeric_limits<double>::infinity();
      for (const Vec2& v : loop.values)
        min_mod = std::min(min_mod, std::hypot(v[0], v[1]));
      result.sign = lift.winding < 0 ? -1 : 1;
      result.magnitude = std::abs(lift.winding);
      result.samples_used = M;
      result.min_modulus = min_mod;
      result.valid = true;
      return result;
    }
    prev_winding = lift.winding;
    have_prev = true;
  }
  throw NoConvergence("winding did not stabilize before the sample cap");
}

bool homeomorphism_verdict(const IndexResult& result) {
  if (!result.valid) throw InvalidResult("index result is not valid");
  return result.magnitude == 1;
}

}  // namespace isocrit
