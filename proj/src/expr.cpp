#include "xconvex/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "xconvex/errors.hpp"
#include "xconvex/numerics.hpp"

namespace xconvex {

ExprPtr make_number(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Number;
  e->number = v;
  return e;
}

ExprPtr make_var(int axis) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->var = axis;
  return e;
}

ExprPtr make_param(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Param;
  e->param = std::move(name);
  return e;
}

ExprPtr make_unary(ExprKind kind, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->kids = {std::move(a)};
  return e;
}

ExprPtr make_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr make_pow(ExprPtr base, int exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Pow;
  e->pow_exp = exponent;
  e->kids = {std::move(base)};
  return e;
}

ExprPtr make_call(CallKind fn, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Call;
  e->call = fn;
  e->kids = std::move(args);
  return e;
}

ExprPtr make_piecewise(std::vector<PiecewiseArm> arms, ExprPtr otherwise) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Piecewise;
  e->arms = std::move(arms);
  e->kids = {std::move(otherwise)};
  return e;
}

namespace {

struct CallSpec {
  const char* name;
  CallKind kind;
  int arity;
};
constexpr CallSpec call_table[] = {
    {"floor", CallKind::Floor, 1}, {"ceil", CallKind::Ceil, 1},
    {"abs", CallKind::Abs, 1},     {"min", CallKind::Min, 2},
    {"max", CallKind::Max, 2},     {"exp", CallKind::Exp, 1},
    {"log", CallKind::Log, 1},     {"sqrt", CallKind::Sqrt, 1},
};

struct Parser {
  const std::string& text;
  int dim;
  const std::vector<std::string>& params;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) fail(std::string("expected '") + c + "' " + what, pos);
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  ExprPtr number() {
    skip_ws();
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number", pos);
    if (!std::isfinite(v)) fail("numeric literal out of range", pos);
    pos += static_cast<std::size_t>(end - begin);
    return make_number(v);
  }

  std::optional<RelOp> relop() {
    skip_ws();
    auto two = [&](char a, char b) {
      return pos + 1 < text.size() && text[pos] == a && text[pos + 1] == b;
    };
    if (two('<', '=')) return pos += 2, RelOp::Le;
    if (two('>', '=')) return pos += 2, RelOp::Ge;
    if (two('=', '=')) return pos += 2, RelOp::Eq;
    if (two('!', '=')) return pos += 2, RelOp::Ne;
    if (peek() == '<') return ++pos, RelOp::Lt;
    if (peek() == '>') return ++pos, RelOp::Gt;
    return std::nullopt;
  }

  ExprPtr piecewise(std::size_t kw_at) {
    expect('(', "after piecewise");
    std::vector<PiecewiseArm> arms;
    while (true) {
      if (peek() != '(') break;
      std::size_t save = pos;
      ++pos;
      PiecewiseArm arm;
      arm.lhs = expr();
      auto rel = relop();
      if (!rel) {
        // A parenthesized default value, not a guarded arm.
        pos = save;
        break;
      }
      arm.rel = *rel;
      arm.rhs = expr();
      expect(',', "between condition and arm value");
      arm.value = expr();
      expect(')', "to close piecewise arm");
      arms.push_back(std::move(arm));
      expect(',', "after piecewise arm");
    }
    if (arms.empty()) fail("piecewise needs at least one (condition, value) arm", kw_at);
    ExprPtr otherwise = expr();
    expect(')', "to close piecewise");
    return make_piecewise(std::move(arms), std::move(otherwise));
  }

  ExprPtr atom() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression", pos);
    char c = text[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      expect(')', "to close group");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t at = pos;
      std::string name = ident();
      if (name == "piecewise") return piecewise(at);
      for (const CallSpec& cs : call_table)
        if (name == cs.name) {
          expect('(', "after function name");
          std::vector<ExprPtr> args;
          args.push_back(expr());
          while (eat(',')) args.push_back(expr());
          expect(')', "to close call");
          if (static_cast<int>(args.size()) != cs.arity)
            fail(std::string(cs.name) + " takes " + std::to_string(cs.arity) +
                     " argument(s)",
                 at);
          return make_call(cs.kind, std::move(args));
        }
      if (dim == 1 && name == "r") return make_var(0);
      if (name.size() >= 2 && name[0] == 'x') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
          if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits) {
          long idx = std::strtol(name.c_str() + 1, nullptr, 10);
          if (idx < 1 || idx > dim)
            fail("variable " + name + " out of range for dimension " +
                     std::to_string(dim),
                 at);
          return make_var(static_cast<int>(idx - 1));
        }
      }
      for (const std::string& p : params)
        if (name == p) return make_param(name);
      fail("unknown identifier '" + name + "'", at);
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      std::size_t at = pos;
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
        fail("exponent must be an integer", at);
      long k = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        k = k * 10 + (text[pos] - '0');
        if (k > 64) fail("exponent magnitude limited to 64", at);
        ++pos;
      }
      return make_pow(std::move(base), static_cast<int>(neg ? -k : k));
    }
    return base;
  }

  ExprPtr factor() {
    if (eat('-')) return make_unary(ExprKind::Neg, power());
    eat('+');
    return power();
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      if (eat('*'))
        e = make_binary(ExprKind::Mul, std::move(e), factor());
      else if (eat('/'))
        e = make_binary(ExprKind::Div, std::move(e), factor());
      else
        return e;
    }
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      skip_ws();
      // '-' directly followed by relational context still belongs to cond
      // parsing; here only plain +/- continue the sum.
      if (eat('+'))
        e = make_binary(ExprKind::Add, std::move(e), term());
      else if (eat('-'))
        e = make_binary(ExprKind::Sub, std::move(e), term());
      else
        return e;
    }
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, int dim,
                   const std::vector<std::string>& params) {
  if (dim < 1) throw InputError("expression dimension must be at least 1");
  Parser p{text, dim, params};
  ExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after expression", p.pos);
  return e;
}

namespace {

[[noreturn]] void eval_fail(const char* msg, std::span<const double> x) {
  throw EvalError(msg, std::vector<double>(x.begin(), x.end()));
}

double checked(double v, std::span<const double> x) {
  if (!std::isfinite(v)) eval_fail("non-finite value during evaluation", x);
  return v;
}

}  // namespace

double eval_expr(const Expr& e, std::span<const double> x, const ParamMap& params) {
  switch (e.kind) {
    case ExprKind::Number:
      return e.number;
    case ExprKind::Var:
      if (e.var < 0 || static_cast<std::size_t>(e.var) >= x.size())
        eval_fail("variable index out of range", x);
      return x[static_cast<std::size_t>(e.var)];
    case ExprKind::Param: {
      auto it = params.find(e.param);
      if (it == params.end()) eval_fail("unbound parameter", x);
      return it->second;
    }
    case ExprKind::Neg:
      return -eval_expr(*e.kids[0], x, params);
    case ExprKind::Add: {
      double a = eval_expr(*e.kids[0], x, params);
      double b = eval_expr(*e.kids[1], x, params);
      return checked(a + b, x);
    }
    case ExprKind::Sub: {
      double a = eval_expr(*e.kids[0], x, params);
      double b = eval_expr(*e.kids[1], x, params);
      return checked(a - b, x);
    }
    case ExprKind::Mul: {
      double a = eval_expr(*e.kids[0], x, params);
      double b = eval_expr(*e.kids[1], x, params);
      return checked(a * b, x);
    }
    case ExprKind::Div: {
      double a = eval_expr(*e.kids[0], x, params);
      double b = eval_expr(*e.kids[1], x, params);
      if (b == 0.0) eval_fail("division by zero", x);
      return checked(a / b, x);
    }
    case ExprKind::Pow: {
      double a = eval_expr(*e.kids[0], x, params);
      if (a == 0.0 && e.pow_exp < 0) eval_fail("zero raised to a negative power", x);
      return checked(pow_int_exact(a, e.pow_exp), x);
    }
    case ExprKind::Call: {
      double a = eval_expr(*e.kids[0], x, params);
      switch (e.call) {
        case CallKind::Floor: return std::floor(a);
        case CallKind::Ceil: return std::ceil(a);
        case CallKind::Abs: return std::fabs(a);
        case CallKind::Min: return x_min(a, eval_expr(*e.kids[1], x, params));
        case CallKind::Max: return x_max(a, eval_expr(*e.kids[1], x, params));
        case CallKind::Exp: return checked(std::exp(a), x);
        case CallKind::Log:
          if (a <= 0.0) eval_fail("log of a non-positive value", x);
          return checked(std::log(a), x);
        case CallKind::Sqrt:
          if (a < 0.0) eval_fail("sqrt of a negative value", x);
          return std::sqrt(a);
      }
      eval_fail("unknown call", x);
    }
    case ExprKind::Piecewise: {
      for (const PiecewiseArm& arm : e.arms) {
        double l = eval_expr(*arm.lhs, x, params);
        double r = eval_expr(*arm.rhs, x, params);
        if (rel_holds(arm.rel, l, r)) return eval_expr(*arm.value, x, params);
      }
      return eval_expr(*e.kids[0], x, params);
    }
  }
  eval_fail("unknown expression node", x);
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

const char* rel_text(RelOp r) {
  switch (r) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
  }
  return "?";
}

void render(const Expr& e, int parent_prec, std::string& out) {
  int prec = precedence(e);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::Number:
      out += format_double(e.number);
      break;
    case ExprKind::Var:
      out += "x" + std::to_string(e.var + 1);
      break;
    case ExprKind::Param:
      out += e.param;
      break;
    case ExprKind::Neg:
      out += '-';
      render(*e.kids[0], 3, out);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
      render(*e.kids[0], 1, out);
      out += e.kind == ExprKind::Add ? " + " : " - ";
      render(*e.kids[1], 2, out);
      break;
    case ExprKind::Mul:
    case ExprKind::Div:
      render(*e.kids[0], 2, out);
      out += e.kind == ExprKind::Mul ? "*" : "/";
      render(*e.kids[1], 3, out);
      break;
    case ExprKind::Pow:
      render(*e.kids[0], 5, out);
      out += '^';
      out += std::to_string(e.pow_exp);
      break;
    case ExprKind::Call: {
      static const char* names[] = {"floor", "ceil", "abs", "min",
                                    "max",   "exp",  "log", "sqrt"};
      out += names[static_cast<int>(e.call)];
      out += '(';
      for (std::size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ", ";
        render(*e.kids[i], 0, out);
      }
      out += ')';
      break;
    }
    case ExprKind::Piecewise:
      out += "piecewise(";
      for (const PiecewiseArm& arm : e.arms) {
        out += '(';
        render(*arm.lhs, 0, out);
        out += ' ';
        out += rel_text(arm.rel);
        out += ' ';
        render(*arm.rhs, 0, out);
        out += ", ";
        render(*arm.value, 0, out);
        out += "), ";
      }
      render(*e.kids[0], 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

std::optional<double> constant_of(const Expr& e, const ParamMap& params) {
  if (e.kind == ExprKind::Number) return e.number;
  if (e.kind == ExprKind::Param) {
    auto it = params.find(e.param);
    if (it != params.end()) return it->second;
  }
  if (e.kind == ExprKind::Neg) {
    auto v = constant_of(*e.kids[0], params);
    if (v) return -*v;
  }
  return std::nullopt;
}

void scan(const Expr& e, const ParamMap& params, ExprFeatures& f) {
  if (e.kind == ExprKind::Call &&
      (e.call == CallKind::Floor || e.call == CallKind::Ceil))
    f.has_floor_or_ceil = true;
  if (e.kind == ExprKind::Piecewise) {
    for (const PiecewiseArm& arm : e.arms) {
      const Expr* var_side = nullptr;
      const Expr* const_side = nullptr;
      if (arm.lhs->kind == ExprKind::Var)
        var_side = arm.lhs.get(), const_side = arm.rhs.get();
      else if (arm.rhs->kind == ExprKind::Var)
        var_side = arm.rhs.get(), const_side = arm.lhs.get();
      if (var_side && const_side) {
        auto v = constant_of(*const_side, params);
        if (v && var_side->var >= 0 &&
            static_cast<std::size_t>(var_side->var) < f.guard_values.size())
          f.guard_values[static_cast<std::size_t>(var_side->var)].push_back(*v);
      }
      scan(*arm.lhs, params, f);
      scan(*arm.rhs, params, f);
      scan(*arm.value, params, f);
    }
  }
  for (const ExprPtr& k : e.kids) scan(*k, params, f);
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  render(e, 0, out);
  return out;
}

ExprFeatures scan_features(const Expr& e, int dim, const ParamMap& params) {
  ExprFeatures f;
  f.guard_values.resize(static_cast<std::size_t>(dim));
  scan(e, params, f);
  return f;
}

}  // namespace xconvex
