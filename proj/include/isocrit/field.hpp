#ifndef ISOCRIT_FIELD_HPP
#define ISOCRIT_FIELD_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "isocrit/expr.hpp"
#include "isocrit/numerics.hpp"

namespace isocrit {

enum class JacobianMode { automatic, analytic, finite_difference };

// An evaluable map R^input_dim -> R^m with an optional Jacobian. Fields are
// immutable after construction; every operation is a pure function of the
// arguments, so concurrent use needs no synchronization.
class VectorField {
public:
  using EvalFn = std::function<Vec(std::span<const double>)>;
  using JacFn = std::function<Mat(std::span<const double>)>;
  using DetFn = std::function<double(std::span<const double>)>;

  VectorField() = default;  // empty; assign a real field before use

  static VectorField from_ast(FieldAst ast, Box domain = {});
  static VectorField from_callable(int input_dim, int output_dim, EvalFn fn,
                                   Box domain, JacFn analytic_jacobian = {});

  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  bool is_square() const { return input_dim_ == output_dim_; }
  const Box& domain_box() const { return domain_; }
  JacobianMode jacobian_mode() const { return mode_; }
  const FieldAst* ast() const { return ast_ ? ast_.get() : nullptr; }

  // H(x). Throws DomainError outside the domain box, NumericError on a
  // non-finite result.
  Vec eval(std::span<const double> x) const;

  // m x input_dim derivative matrix at an interior point, computed per the
  // field's jacobian mode (dual numbers through the AST, an attached
  // analytic formula, or scale-aware central differences).
  Mat jacobian(std::span<const double> x) const;

  // Determinant of the square Jacobian via LU with partial pivoting;
  // near_zero flags |det| below 1e-12 times the row-scale bound.
  DetResult jacobian_det(std::span<const double> x) const;

  // Closed-form determinant attached by a gallery factory, when present.
  bool has_analytic_det() const { return static_cast<bool>(analytic_det_); }
  double analytic_det(std::span<const double> x) const { return analytic_det_(x); }
  void attach_analytic_det(DetFn fn) { analytic_det_ = std::move(fn); }

  void set_jacobian_mode(JacobianMode m);

  // The slice y -> H(x_prefix, y): substitutes the leading coordinates and
  // keeps automatic differentiation when the field is AST-backed.
  VectorField bind_prefix(std::span<const double> x_prefix) const;

  // Single output component as a scalar field (used by 1-d slicing).
  VectorField component(int k) const;

private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  Box domain_;
  JacobianMode mode_ = JacobianMode::automatic;
  std::shared_ptr<const FieldAst> ast_;
  EvalFn eval_;
  JacFn analytic_jac_;
  DetFn analytic_det_;
};

}  // namespace isocrit

#endif
