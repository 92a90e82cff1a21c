#include "isocrit/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "isocrit/errors.hpp"

namespace isocrit {

namespace {

bool equal_rec(const FieldAst& x, int i, const FieldAst& y, int j) {
  const ExprNode& a = x.nodes[i];
  const ExprNode& b = y.nodes[j];
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::constant:
      return a.value == b.value;
    case ExprKind::variable:
      return a.ivalue == b.ivalue;
    case ExprKind::neg:
      return equal_rec(x, a.a, y, b.a);
    case ExprKind::pow:
      return a.ivalue == b.ivalue && equal_rec(x, a.a, y, b.a);
    case ExprKind::call:
      return a.fn == b.fn && equal_rec(x, a.a, y, b.a);
    default:
      return equal_rec(x, a.a, y, b.a) && equal_rec(x, a.b, y, b.b);
  }
}

}  // namespace

bool structurally_equal(const FieldAst& a, const FieldAst& b) {
  if (a.input_dim != b.input_dim || a.output_dim != b.output_dim) return false;
  if (a.roots.size() != b.roots.size()) return false;
  for (std::size_t k = 0; k < a.roots.size(); ++k)
    if (!equal_rec(a, a.roots[k], b, b.roots[k])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  FieldAst* out;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(pos, msg); }

  int push(ExprNode n) {
    out->nodes.push_back(n);
    return static_cast<int>(out->nodes.size()) - 1;
  }

  int parse_int() {
    skip_ws();
    const std::size_t start = pos;
    if (pos < src.size() && src[pos] == '-') ++pos;
    const std::size_t digits = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == digits) fail("expected integer");
    int value = 0;
    const auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{}) fail("integer out of range");
    return value;
  }

  int parse_number() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      } else {
        pos = mark;  // "2e" is the number 2 followed by an identifier
      }
    }
    double value = 0.0;
    const auto res = std::from_chars(src.data() + start, src.data() + pos, value);
    if (res.ec != std::errc{}) fail("bad numeric literal");
    return push({.kind = ExprKind::constant, .value = value});
  }

  int parse_ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    const std::string_view name = src.substr(start, pos - start);
    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int index = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (res.ec == std::errc{} && res.ptr == name.data() + name.size()) {
        if (index < 1 || index > out->input_dim)
          throw UnknownIdentifier(start, std::string(name) + " (input_dim is " +
                                             std::to_string(out->input_dim) + ")");
        return push({.kind = ExprKind::variable, .ivalue = index});
      }
    }
    FnId fn;
    if (name == "abs") fn = FnId::abs;
    else if (name == "sqrt") fn = FnId::sqrt;
    else if (name == "sin") fn = FnId::sin;
    else if (name == "cos") fn = FnId::cos;
    else if (name == "exp") fn = FnId::exp;
    else throw UnknownIdentifier(start, std::string(name));
    if (!eat('(')) fail("expected '(' after function name");
    const int arg = parse_expr();
    if (!eat(')')) fail("expected ')'");
    return push({.kind = ExprKind::call, .fn = fn, .a = arg});
  }

  int parse_base() {
    const char c = peek();
    if (c == '(') {
      ++pos;
      const int e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("expected number, variable, function or '('");
  }

  int parse_factor() {
    if (eat('-')) return push({.kind = ExprKind::neg, .a = parse_factor()});
    const int b = parse_base();
    if (eat('^')) {
      const int e = parse_int();
      return push({.kind = ExprKind::pow, .a = b, .ivalue = e});
    }
    return b;
  }

  int parse_term() {
    int lhs = parse_factor();
    while (true) {
      if (eat('*')) {
        lhs = push({.kind = ExprKind::mul, .a = lhs, .b = parse_factor()});
      } else if (eat('/')) {
        lhs = push({.kind = ExprKind::div, .a = lhs, .b = parse_factor()});
      } else {
        return lhs;
      }
    }
  }

  int parse_expr() {
    int lhs = parse_term();
    while (true) {
      if (eat('+')) {
        lhs = push({.kind = ExprKind::add, .a = lhs, .b = parse_term()});
      } else if (eat('-')) {
        lhs = push({.kind = ExprKind::sub, .a = lhs, .b = parse_term()});
      } else {
        return lhs;
      }
    }
  }
};

}  // namespace

FieldAst parse_field(std::string_view src, int input_dim, int output_dim) {
  if (input_dim < 1 || output_dim < 1)
    throw ArityError("dimensions must be positive");
  FieldAst ast;
  ast.input_dim = input_dim;
  ast.output_dim = output_dim;
  Parser p{src, 0, &ast};
  ast.roots.push_back(p.parse_expr());
  while (p.eat(';')) ast.roots.push_back(p.parse_expr());
  p.skip_ws();
  if (p.pos != src.size()) p.fail("unexpected trailing input");
  if (static_cast<int>(ast.roots.size()) != output_dim)
    throw ArityError("field has " + std::to_string(ast.roots.size()) +
                     " component(s), expected " + std::to_string(output_dim));
  return ast;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Precedence levels: add/sub 1, mul/div 2, neg 3, pow 4, atoms 5.
int node_prec(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::add:
    case ExprKind::sub:
      return 1;
    case ExprKind::mul:
    case ExprKind::div:
      return 2;
    case ExprKind::neg:
      return 3;
    case ExprKind::pow:
      return 4;
    default:
      return 5;
  }
}

void print_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void print_rec(const FieldAst& ast, int i, int min_prec, std::string& out) {
  const ExprNode& n = ast.nodes[i];
  const int prec = node_prec(n);
  const bool wrap = prec < min_prec;
  if (wrap) out += '(';
  switch (n.kind) {
    case ExprKind::constant:
      if (n.value < 0.0) {  // negative literal would reparse as a negation
        out += "-";
        print_number(out, -n.value);
      } else {
        print_number(out, n.value);
      }
      break;
    case ExprKind::variable:
      out += 'x';
      out += std::to_string(n.ivalue);
      break;
    case ExprKind::add:
      print_rec(ast, n.a, 1, out);
      out += " + ";
      print_rec(ast, n.b, 2, out);
      break;
    case ExprKind::sub:
      print_rec(ast, n.a, 1, out);
      out += " - ";
      print_rec(ast, n.b, 2, out);
      break;
    case ExprKind::mul:
      print_rec(ast, n.a, 2, out);
      out += "*";
      print_rec(ast, n.b, 3, out);
      break;
    case ExprKind::div:
      print_rec(ast, n.a, 2, out);
      out += "/";
      print_rec(ast, n.b, 3, out);
      break;
    case ExprKind::neg:
      out += '-';
      print_rec(ast, n.a, 3, out);
      break;
    case ExprKind::pow: {
      const ExprKind ck = ast.nodes[n.a].kind;
      const bool bare = (ck == ExprKind::variable || ck == ExprKind::call ||
                         (ck == ExprKind::constant && ast.nodes[n.a].value >= 0.0));
      if (bare) {
        print_rec(ast, n.a, 5, out);
      } else {
        out += '(';
        print_rec(ast, n.a, 0, out);
        out += ')';
      }
      out += '^';
      out += std::to_string(n.ivalue);
      break;
    }
    case ExprKind::call:
      switch (n.fn) {
        case FnId::abs: out += "abs"; break;
        case FnId::sqrt: out += "sqrt"; break;
        case FnId::sin: out += "sin"; break;
        case FnId::cos: out += "cos"; break;
        case FnId::exp: out += "exp"; break;
      }
      out += '(';
      print_rec(ast, n.a, 0, out);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace

std::string print_field(const FieldAst& ast) {
  std::string out;
  for (std::size_t k = 0; k < ast.roots.size(); ++k) {
    if (k > 0) out += " ; ";
    print_rec(ast, ast.roots[k], 0, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) {
  const double q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

struct DoubleOps {
  using S = double;
  static S from_const(double v) { return v; }
  static double value(S s) { return s; }
  static S apply(FnId fn, S x) {
    switch (fn) {
      case FnId::abs:
        return std::abs(x);
      case FnId::sqrt:
        if (x < 0.0) throw NumericError("sqrt of negative value");
        return std::sqrt(x);
      case FnId::sin:
        return std::sin(x);
      case FnId::cos:
        return std::cos(x);
      case FnId::exp: {
        const double r = std::exp(x);
        if (!std::isfinite(r)) throw NumericError("exp overflow");
        return r;
      }
    }
    return 0.0;
  }
};

struct DualOps {
  using S = Dual;
  static S from_const(double v) { return {v, 0.0}; }
  static double value(S s) { return s.v; }
  static S apply(FnId fn, S x) {
    switch (fn) {
      case FnId::abs:
        if (x.v == 0.0) throw NumericError("abs is not differentiable at 0");
        return {std::abs(x.v), x.v > 0.0 ? x.d : -x.d};
      case FnId::sqrt: {
        if (x.v < 0.0) throw NumericError("sqrt of negative value");
        if (x.v == 0.0) throw NumericError("sqrt is not differentiable at 0");
        const double r = std::sqrt(x.v);
        return {r, 0.5 * x.d / r};
      }
      case FnId::sin:
        return {std::sin(x.v), x.d * std::cos(x.v)};
      case FnId::cos:
        return {std::cos(x.v), -x.d * std::sin(x.v)};
      case FnId::exp: {
        const double r = std::exp(x.v);
        if (!std::isfinite(r)) throw NumericError("exp overflow");
        return {r, x.d * r};
      }
    }
    return {};
  }
};

template <typename Ops, typename S = typename Ops::S>
S pow_int(S base, int e) {
  if (e < 0) return Ops::from_const(1.0) / pow_int<Ops>(base, -e);
  S acc = Ops::from_const(1.0);
  S b = base;
  int k = e;
  while (k > 0) {
    if (k & 1) acc = acc * b;
    b = b * b;
    k >>= 1;
  }
  return acc;
}

template <typename Ops, typename S = typename Ops::S>
S eval_rec(const FieldAst& ast, int i, std::span<const S> vars) {
  const ExprNode& n = ast.nodes[i];
  switch (n.kind) {
    case ExprKind::constant:
      return Ops::from_const(n.value);
    case ExprKind::variable:
      return vars[n.ivalue - 1];
    case ExprKind::add:
      return eval_rec<Ops>(ast, n.a, vars) + eval_rec<Ops>(ast, n.b, vars);
    case ExprKind::sub:
      return eval_rec<Ops>(ast, n.a, vars) - eval_rec<Ops>(ast, n.b, vars);
    case ExprKind::mul:
      return eval_rec<Ops>(ast, n.a, vars) * eval_rec<Ops>(ast, n.b, vars);
    case ExprKind::div: {
      const S r = eval_rec<Ops>(ast, n.a, vars) / eval_rec<Ops>(ast, n.b, vars);
      if (!std::isfinite(Ops::value(r))) throw NumericError("division produced a non-finite value");
      return r;
    }
    case ExprKind::neg:
      return -eval_rec<Ops>(ast, n.a, vars);
    case ExprKind::pow: {
      const S r = pow_int<Ops>(eval_rec<Ops>(ast, n.a, vars), n.ivalue);
      if (!std::isfinite(Ops::value(r))) throw NumericError("power produced a non-finite value");
      return r;
    }
    case ExprKind::call:
      return Ops::apply(n.fn, eval_rec<Ops>(ast, n.a, vars));
  }
  return Ops::from_const(0.0);
}

}  // namespace

Vec eval_ast(const FieldAst& ast, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ast.input_dim)
    throw ArityError("point has wrong dimension");
  Vec out(ast.output_dim);
  for (int k = 0; k < ast.output_dim; ++k) {
    out[k] = eval_rec<DoubleOps>(ast, ast.roots[k], x);
    if (!std::isfinite(out[k])) throw NumericError("non-finite field value");
  }
  return out;
}

Mat jacobian_ast(const FieldAst& ast, std::span<const double> x) {
  if (static_cast<int>(x.size()) != ast.input_dim)
    throw ArityError("point has wrong dimension");
  Mat jac(ast.output_dim, ast.input_dim);
  std::vector<Dual> vars(ast.input_dim);
  for (int j = 0; j < ast.input_dim; ++j) {
    for (int i = 0; i < ast.input_dim; ++i) vars[i] = {x[i], i == j ? 1.0 : 0.0};
    for (int k = 0; k < ast.output_dim; ++k) {
      const Dual r = eval_rec<DualOps>(ast, ast.roots[k], std::span<const Dual>(vars));
      if (!std::isfinite(r.v) || !std::isfinite(r.d))
        throw NumericError("non-finite Jacobian entry");
      jac(k, j) = r.d;
    }
  }
  return jac;
}

// ---------------------------------------------------------------------------
// Builder

int AstBuilder::push(ExprNode n) {
  ast_.nodes.push_back(n);
  return static_cast<int>(ast_.nodes.size()) - 1;
}

int AstBuilder::constant(double v) {
  // Negative literals would reparse as negations; keep the arena in the
  // parser's shape so print/parse round-trips are structurally identical.
  if (v == 0.0) v = 0.0;  // normalize -0.0
  if (v < 0.0) return neg(push({.kind = ExprKind::constant, .value = -v}));
  return push({.kind = ExprKind::constant, .value = v});
}
int AstBuilder::var(int index) { return push({.kind = ExprKind::variable, .ivalue = index}); }
int AstBuilder::add(int a, int b) { return push({.kind = ExprKind::add, .a = a, .b = b}); }
int AstBuilder::sub(int a, int b) { return push({.kind = ExprKind::sub, .a = a, .b = b}); }
int AstBuilder::mul(int a, int b) { return push({.kind = ExprKind::mul, .a = a, .b = b}); }
int AstBuilder::div(int a, int b) { return push({.kind = ExprKind::div, .a = a, .b = b}); }
int AstBuilder::neg(int a) { return push({.kind = ExprKind::neg, .a = a}); }
int AstBuilder::pow(int a, int exponent) {
  return push({.kind = ExprKind::pow, .a = a, .ivalue = exponent});
}
int AstBuilder::call(FnId fn, int a) { return push({.kind = ExprKind::call, .fn = fn, .a = a}); }

int AstBuilder::import(const FieldAst& other, int root, int var_offset) {
  const ExprNode& n = other.nodes[root];
  switch (n.kind) {
    case ExprKind::constant:
      return constant(n.value);
    case ExprKind::variable:
      return var(n.ivalue + var_offset);
    case ExprKind::neg:
      return neg(import(other, n.a, var_offset));
    case ExprKind::pow:
      return pow(import(other, n.a, var_offset), n.ivalue);
    case ExprKind::call:
      return call(n.fn, import(other, n.a, var_offset));
    default: {
      const int a = import(other, n.a, var_offset);
      const int b = import(other, n.b, var_offset);
      ExprNode copy = n;
      copy.a = a;
      copy.b = b;
      return push(copy);
    }
  }
}

void AstBuilder::set_root(int component, int node) {
  if (static_cast<int>(ast_.roots.size()) <= component)
    ast_.roots.resize(component + 1, -1);
  ast_.roots[component] = node;
}

FieldAst AstBuilder::take() { return std::move(ast_); }

}  // namespace isocrit
