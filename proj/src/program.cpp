#include "xconvex/program.hpp"

#include <cmath>

#include "xconvex/errors.hpp"

namespace xconvex {

namespace {

struct Compiler {
  const ParamMap& params;
  int dim;
  std::vector<Op> ops;
  int depth = 0;
  int peak = 0;

  void push_effect(int delta) {
    depth += delta;
    if (depth > peak) peak = depth;
  }
  void emit(OpCode c, std::int32_t a = 0, double imm = 0.0) {
    ops.push_back(Op{c, a, imm});
  }

  void compile(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Number:
        emit(OpCode::PushConst, 0, e.number);
        push_effect(1);
        return;
      case ExprKind::Var:
        if (e.var < 0 || e.var >= dim)
          throw InputError("variable index out of range in expression");
        emit(OpCode::PushVar, e.var);
        push_effect(1);
        return;
      case ExprKind::Param: {
        auto it = params.find(e.param);
        if (it == params.end())
          throw InputError("unbound parameter '" + e.param + "'");
        emit(OpCode::PushConst, 0, it->second);
        push_effect(1);
        return;
      }
      case ExprKind::Neg:
        compile(*e.kids[0]);
        emit(OpCode::Neg);
        return;
      case ExprKind::Add:
      case ExprKind::Sub:
      case ExprKind::Mul:
      case ExprKind::Div: {
        compile(*e.kids[0]);
        compile(*e.kids[1]);
        OpCode c = e.kind == ExprKind::Add   ? OpCode::Add
                   : e.kind == ExprKind::Sub ? OpCode::Sub
                   : e.kind == ExprKind::Mul ? OpCode::Mul
                                             : OpCode::Div;
        emit(c);
        push_effect(-1);
        return;
      }
      case ExprKind::Pow:
        compile(*e.kids[0]);
        emit(OpCode::PowInt, e.pow_exp);
        return;
      case ExprKind::Call: {
        compile(*e.kids[0]);
        switch (e.call) {
          case CallKind::Floor: emit(OpCode::Floor); return;
          case CallKind::Ceil: emit(OpCode::Ceil); return;
          case CallKind::Abs: emit(OpCode::Abs); return;
          case CallKind::Min:
            compile(*e.kids[1]);
            emit(OpCode::Min2);
            push_effect(-1);
            return;
          case CallKind::Max:
            compile(*e.kids[1]);
            emit(OpCode::Max2);
            push_effect(-1);
            return;
          case CallKind::Exp: emit(OpCode::Exp); return;
          case CallKind::Log: emit(OpCode::Log); return;
          case CallKind::Sqrt: emit(OpCode::Sqrt); return;
        }
        return;
      }
      case ExprKind::Piecewise: {
        std::vector<std::size_t> to_end;
        for (const PiecewiseArm& arm : e.arms) {
          compile(*arm.lhs);
          compile(*arm.rhs);
          OpCode cmp = OpCode::CmpLt;
          switch (arm.rel) {
            case RelOp::Lt: cmp = OpCode::CmpLt; break;
            case RelOp::Le: cmp = OpCode::CmpLe; break;
            case RelOp::Gt: cmp = OpCode::CmpGt; break;
            case RelOp::Ge: cmp = OpCode::CmpGe; break;
            case RelOp::Eq: cmp = OpCode::CmpEq; break;
            case RelOp::Ne: cmp = OpCode::CmpNe; break;
          }
          emit(cmp);
          push_effect(-1);
          std::size_t jz_at = ops.size();
          emit(OpCode::JumpIfZero);
          push_effect(-1);
          compile(*arm.value);
          to_end.push_back(ops.size());
          emit(OpCode::Jump);
          // The arm value occupies the same slot the next arm will fill.
          push_effect(-1);
          ops[jz_at].a = static_cast<std::int32_t>(ops.size());
        }
        compile(*e.kids[0]);
        for (std::size_t at : to_end)
          ops[at].a = static_cast<std::int32_t>(ops.size());
        return;
      }
    }
    throw InputError("unknown expression node");
  }
};

[[noreturn]] void run_fail(const char* msg, std::span<const double> x) {
  throw EvalError(msg, std::vector<double>(x.begin(), x.end()));
}

double run_checked(double v, std::span<const double> x) {
  if (!std::isfinite(v)) run_fail("non-finite value during evaluation", x);
  return v;
}

}  // namespace

Program compile_program(const Expr& e, int dim, const ParamMap& params) {
  Compiler c{params, dim, {}, 0, 0};
  c.compile(e);
  if (c.depth != 1) throw InputError("expression compiles to unbalanced stack");
  Program p;
  p.ops = std::move(c.ops);
  p.stack_need = c.peak;
  p.dim = dim;
  if (p.stack_need > 256) throw InputError("expression too deep");
  return p;
}

double Program::run(std::span<const double> x) const {
  double stack[256];
  int sp = 0;
  std::size_t ip = 0;
  const std::size_t n = ops.size();
  while (ip < n) {
    const Op& op = ops[ip];
    switch (op.code) {
      case OpCode::PushConst: stack[sp++] = op.imm; ++ip; break;
      case OpCode::PushVar: stack[sp++] = x[static_cast<std::size_t>(op.a)]; ++ip; break;
      case OpCode::Neg: stack[sp - 1] = -stack[sp - 1]; ++ip; break;
      case OpCode::Add:
        --sp;
        stack[sp - 1] = run_checked(stack[sp - 1] + stack[sp], x);
        ++ip;
        break;
      case OpCode::Sub:
        --sp;
        stack[sp - 1] = run_checked(stack[sp - 1] - stack[sp], x);
        ++ip;
        break;
      case OpCode::Mul:
        --sp;
        stack[sp - 1] = run_checked(stack[sp - 1] * stack[sp], x);
        ++ip;
        break;
      case OpCode::Div:
        --sp;
        if (stack[sp] == 0.0) run_fail("division by zero", x);
        stack[sp - 1] = run_checked(stack[sp - 1] / stack[sp], x);
        ++ip;
        break;
      case OpCode::PowInt:
        if (stack[sp - 1] == 0.0 && op.a < 0)
          run_fail("zero raised to a negative power", x);
        stack[sp - 1] = run_checked(pow_int_exact(stack[sp - 1], op.a), x);
        ++ip;
        break;
      case OpCode::Floor: stack[sp - 1] = std::floor(stack[sp - 1]); ++ip; break;
      case OpCode::Ceil: stack[sp - 1] = std::ceil(stack[sp - 1]); ++ip; break;
      case OpCode::Abs: stack[sp - 1] = std::fabs(stack[sp - 1]); ++ip; break;
      case OpCode::Min2:
        --sp;
        stack[sp - 1] = x_min(stack[sp - 1], stack[sp]);
        ++ip;
        break;
      case OpCode::Max2:
        --sp;
        stack[sp - 1] = x_max(stack[sp - 1], stack[sp]);
        ++ip;
        break;
      case OpCode::Exp:
        stack[sp - 1] = run_checked(std::exp(stack[sp - 1]), x);
        ++ip;
        break;
      case OpCode::Log:
        if (stack[sp - 1] <= 0.0) run_fail("log of a non-positive value", x);
        stack[sp - 1] = run_checked(std::log(stack[sp - 1]), x);
        ++ip;
        break;
      case OpCode::Sqrt:
        if (stack[sp - 1] < 0.0) run_fail("sqrt of a negative value", x);
        stack[sp - 1] = std::sqrt(stack[sp - 1]);
        ++ip;
        break;
      case OpCode::CmpLt:
        --sp;
        stack[sp - 1] = stack[sp - 1] < stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::CmpLe:
        --sp;
        stack[sp - 1] = stack[sp - 1] <= stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::CmpGt:
        --sp;
        stack[sp - 1] = stack[sp - 1] > stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::CmpGe:
        --sp;
        stack[sp - 1] = stack[sp - 1] >= stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::CmpEq:
        --sp;
        stack[sp - 1] = stack[sp - 1] == stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::CmpNe:
        --sp;
        stack[sp - 1] = stack[sp - 1] != stack[sp] ? 1.0 : 0.0;
        ++ip;
        break;
      case OpCode::JumpIfZero:
        --sp;
        ip = stack[sp] == 0.0 ? static_cast<std::size_t>(op.a) : ip + 1;
        break;
      case OpCode::Jump:
        ip = static_cast<std::size_t>(op.a);
        break;
    }
  }
  return stack[0];
}

}  // namespace xconvex
