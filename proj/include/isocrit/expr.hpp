#ifndef ISOCRIT_EXPR_HPP
#define ISOCRIT_EXPR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isocrit/numerics.hpp"

namespace isocrit {

// Expression trees over variables x1..xk, constants, arithmetic, integer
// powers and a small fixed function set. Nodes live in a flat arena; children
// are created before parents, so a parse always yields a post-ordered arena.
enum class ExprKind : std::uint8_t {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  neg,
  pow,
  call,
};

enum class FnId : std::uint8_t { abs, sqrt, sin, cos, exp };

struct ExprNode {
  ExprKind kind = ExprKind::constant;
  FnId fn = FnId::abs;
  int a = -1;          // left / only child
  int b = -1;          // right child
  int ivalue = 0;      // variable index (1-based) or integer exponent
  double value = 0.0;  // constant payload

  bool operator==(const ExprNode&) const = default;
};

struct FieldAst {
  int input_dim = 0;
  int output_dim = 0;
  std::vector<ExprNode> nodes;
  std::vector<int> roots;  // one per output component
};

// Tree-shape equality (node indices may differ between arenas).
bool structurally_equal(const FieldAst& a, const FieldAst& b);

// Grammar:
//   field  := expr (";" expr)*
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := "-" factor | base ("^" int)?
//   base   := number | var | fn "(" expr ")" | "(" expr ")"
//   var    := "x" int     fn := abs|sqrt|sin|cos|exp
// Whitespace-insensitive; power binds tighter than unary minus, which binds
// tighter than "*"/"/", which bind tighter than "+"/"-".
FieldAst parse_field(std::string_view src, int input_dim, int output_dim);

// Inverse of parse_field up to tree shape: parse(print(ast)) is
// structurally equal to ast.
std::string print_field(const FieldAst& ast);

// Plain evaluation of every component at x (length input_dim).
Vec eval_ast(const FieldAst& ast, std::span<const double> x);

// Forward-mode dual-number Jacobian, exact for polynomial trees.
Mat jacobian_ast(const FieldAst& ast, std::span<const double> x);

// Incremental construction of an arena; used by the gallery factories.
class AstBuilder {
public:
  AstBuilder(int input_dim, int output_dim) {
    ast_.input_dim = input_dim;
    ast_.output_dim = output_dim;
  }

  int constant(double v);
  int var(int index_1_based);
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int div(int a, int b);
  int neg(int a);
  int pow(int a, int exponent);
  int call(FnId fn, int a);

  // Copy a whole expression (given by its root) from another arena,
  // shifting every variable index by var_offset.
  int import(const FieldAst& other, int root, int var_offset);

  void set_root(int component, int node);
  FieldAst take();

private:
  int push(ExprNode n);
  FieldAst ast_;
};

struct Dual {
  double v = 0.0;
  double d = 0.0;
};

}  // namespace isocrit

#endif
