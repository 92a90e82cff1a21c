#include "isocrit/field.hpp"

#include <cmath>

#include "isocrit/errors.hpp"

namespace isocrit {

VectorField VectorField::from_ast(FieldAst ast, Box domain) {
  VectorField f;
  f.input_dim_ = ast.input_dim;
  f.output_dim_ = ast.output_dim;
  f.domain_ = domain.dim() == ast.input_dim ? std::move(domain)
                                            : Box::unbounded(ast.input_dim);
  f.mode_ = JacobianMode::automatic;
  f.ast_ = std::make_shared<const FieldAst>(std::move(ast));
  return f;
}

VectorField VectorField::from_callable(int input_dim, int output_dim, EvalFn fn,
                                       Box domain, JacFn analytic_jacobian) {
  VectorField f;
  f.input_dim_ = input_dim;
  f.output_dim_ = output_dim;
  f.domain_ = domain.dim() == input_dim ? std::move(domain) : Box::unbounded(input_dim);
  f.eval_ = std::move(fn);
  f.analytic_jac_ = std::move(analytic_jacobian);
  f.mode_ = f.analytic_jac_ ? JacobianMode::analytic : JacobianMode::finite_difference;
  return f;
}

void VectorField::set_jacobian_mode(JacobianMode m) {
  if (m == JacobianMode::automatic && !ast_)
    throw ArityError("automatic differentiation needs an AST-backed field");
  if (m == JacobianMode::analytic && !analytic_jac_)
    throw ArityError("no analytic Jacobian attached");
  mode_ = m;
}

Vec VectorField::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim_)
    throw ArityError("point has dimension " + std::to_string(x.size()) +
                     ", field expects " + std::to_string(input_dim_));
  if (!domain_.contains(x))
    throw DomainError("point outside the field's domain box");
  Vec out = ast_ ? eval_ast(*ast_, x) : eval_(x);
  for (double v : out)
    if (!std::isfinite(v)) throw NumericError("non-finite field value");
  return out;
}

Mat VectorField::jacobian(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != input_dim_)
    throw ArityError("point has dimension " + std::to_string(x.size()) +
                     ", field expects " + std::to_string(input_dim_));
  if (!domain_.contains(x))
    throw DomainError("point outside the field's domain box");
  switch (mode_) {
    case JacobianMode::automatic:
      return jacobian_ast(*ast_, x);
    case JacobianMode::analytic:
      return analytic_jac_(x);
    case JacobianMode::finite_difference: {
      const double h = 1e-6 * (1.0 + norm(x));
      Mat jac(output_dim_, input_dim_);
      Vec xp(x.begin(), x.end()), xm(x.begin(), x.end());
      for (int j = 0; j < input_dim_; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Vec fp = eval(xp);
        const Vec fm = eval(xm);
        for (int k = 0; k < output_dim_; ++k) jac(k, j) = (fp[k] - fm[k]) / (2.0 * h);
        xp[j] = x[j];
        xm[j] = x[j];
      }
      return jac;
    }
  }
  return Mat(output_dim_, input_dim_);
}

DetResult VectorField::jacobian_det(std::span<const double> x) const {
  if (!is_square())
    throw ArityError("jacobian determinant needs a square field");
  return lu_det(jacobian(x));
}

VectorField VectorField::bind_prefix(std::span<const double> x_prefix) const {
  const int n = static_cast<int>(x_prefix.size());
  const int m = input_dim_ - n;
  if (m < 1) throw ArityError("prefix leaves no free variables");
  Box sliced;
  for (int i = n; i < input_dim_; ++i) sliced.side.push_back(domain_.side[i]);

  if (ast_) {
    // Substitute constants for x1..xn and shift the remaining indices down.
    AstBuilder b(m, output_dim_);
    const FieldAst& src = *ast_;
    std::function<int(int)> copy = [&](int node) -> int {
      const ExprNode& nd = src.nodes[node];
      switch (nd.kind) {
        case ExprKind::constant:
          return b.constant(nd.value);
        case ExprKind::variable:
          return nd.ivalue <= n ? b.constant(x_prefix[nd.ivalue - 1])
                                : b.var(nd.ivalue - n);
        case ExprKind::neg:
          return b.neg(copy(nd.a));
        case ExprKind::pow:
          return b.pow(copy(nd.a), nd.ivalue);
        case ExprKind::call:
          return b.call(nd.fn, copy(nd.a));
        case ExprKind::add:
          return b.add(copy(nd.a), copy(nd.b));
        case ExprKind::sub:
          return b.sub(copy(nd.a), copy(nd.b));
        case ExprKind::mul:
          return b.mul(copy(nd.a), copy(nd.b));
        case ExprKind::div:
          return b.div(copy(nd.a), copy(nd.b));
      }
      return -1;
    };
    for (int k = 0; k < output_dim_; ++k) b.set_root(k, copy(src.roots[k]));
    return from_ast(b.take(), std::move(sliced));
  }

  Vec prefix(x_prefix.begin(), x_prefix.end());
  auto base = *this;
  auto fn = [base, prefix](std::span<const double> y) {
    Vec full(prefix);
    full.insert(full.end(), y.begin(), y.end());
    return base.eval(full);
  };
  return from_callable(m, output_dim_, std::move(fn), std::move(sliced));
}

VectorField VectorField::component(int k) const {
  if (k < 0 || k >= output_dim_) throw ArityError("component index out of range");
  if (ast_) {
    AstBuilder b(input_dim_, 1);
    b.set_root(0, b.import(*ast_, ast_->roots[k], 0));
    return from_ast(b.take(), domain_);
  }
  auto base = *this;
  auto fn = [base, k](std::span<const double> x) { return Vec{base.eval(x)[k]}; };
  return from_callable(input_dim_, 1, std::move(fn), domain_);
}

}  // namespace isocrit
