#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace xconvex {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
using ParamMap = std::map<std::string, double>;

enum class ExprKind { Number, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Call, Piecewise };
enum class CallKind { Floor, Ceil, Abs, Min, Max, Exp, Log, Sqrt };
enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

// One guarded arm of a piecewise expression: "value when lhs relop rhs".
struct PiecewiseArm {
  ExprPtr lhs;
  RelOp rel;
  ExprPtr rhs;
  ExprPtr value;
};

// Immutable expression tree. Pow keeps an integer exponent rather than a
// child so x^k is evaluated by repeated squaring on both evaluation routes.
struct Expr {
  ExprKind kind;
  double number = 0.0;               // Number
  int var = 0;                       // Var, 0-based axis
  std::string param;                 // Param
  int pow_exp = 0;                   // Pow
  CallKind call = CallKind::Floor;   // Call
  std::vector<ExprPtr> kids;         // operands / call args / piecewise default
  std::vector<PiecewiseArm> arms;    // Piecewise arms, tried in order
};

ExprPtr make_number(double v);
ExprPtr make_var(int axis);
ExprPtr make_param(std::string name);
ExprPtr make_unary(ExprKind kind, ExprPtr a);                 // Neg
ExprPtr make_binary(ExprKind kind, ExprPtr a, ExprPtr b);     // Add..Div
ExprPtr make_pow(ExprPtr base, int exponent);
ExprPtr make_call(CallKind fn, std::vector<ExprPtr> args);
ExprPtr make_piecewise(std::vector<PiecewiseArm> arms, ExprPtr otherwise);

// Parses the textual grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('-'|'+')? power
//   power  := atom ('^' ('-'? integer))?
//   atom   := number | variable | parameter | call | '(' expr ')' | piecewise
//   call   := name '(' expr (',' expr)* ')'   for floor ceil abs min max exp log sqrt
//   piecewise := 'piecewise' '(' ('(' cond ',' expr ')' ',')+ expr ')'
//   cond   := expr relop expr    with relop in { < <= > >= == != }
// Variables are "r" in dimension 1 and "x1".."xn" in dimension n. Any other
// identifier must appear in `params`, otherwise ParseError points at it.
ExprPtr parse_expr(const std::string& text, int dim,
                   const std::vector<std::string>& params);

// Evaluates with guard laziness: only the selected piecewise branch runs.
// Division by zero, log of a non-positive value, sqrt of a negative value,
// 0 raised to a negative power, and any non-finite intermediate raise
// EvalError carrying the offending point.
double eval_expr(const Expr& e, std::span<const double> x, const ParamMap& params);

// Precedence-aware round-trippable rendering.
std::string to_string(const Expr& e);

// Static features used to enrich sample plans: whether floor/ceil appears
// anywhere, and per-axis constants that appear as piecewise guard thresholds
// against a bare variable. Bound parameters count as constants.
struct ExprFeatures {
  bool has_floor_or_ceil = false;
  std::vector<std::vector<double>> guard_values;  // indexed by axis
};
ExprFeatures scan_features(const Expr& e, int dim, const ParamMap& params);

// Helpers shared by the tree evaluator and the compiled program so both
// routes produce bit-identical doubles.
inline double x_min(double a, double b) { return b < a ? b : a; }
inline double x_max(double a, double b) { return b > a ? b : a; }
inline double pow_int_exact(double x, int k) {
  unsigned long long n = k < 0 ? -static_cast<long long>(k) : k;
  double base = x, acc = 1.0;
  while (n != 0) {
    if (n & 1ull) acc *= base;
    n >>= 1;
    if (n != 0) base *= base;
  }
  return k < 0 ? 1.0 / acc : acc;
}
inline bool rel_holds(RelOp r, double a, double b) {
  switch (r) {
    case RelOp::Lt: return a < b;
    case RelOp::Le: return a <= b;
    case RelOp::Gt: return a > b;
    case RelOp::Ge: return a >= b;
    case RelOp::Eq: return a == b;
    case RelOp::Ne: return a != b;
  }
  return false;
}

}  // namespace xconvex
