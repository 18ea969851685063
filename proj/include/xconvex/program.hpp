#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xconvex/expr.hpp"

namespace xconvex {

// Straight-line stack code for one scalar expression. Compilation is pure
// linearization: operand order, rounding steps, and guard laziness match
// eval_expr exactly, so both routes return bit-identical doubles and raise
// errors at the same points. Bound parameters are baked in as constants.
enum class OpCode : std::uint8_t {
  PushConst,  // imm
  PushVar,    // a = axis
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  PowInt,     // a = exponent
  Floor,
  Ceil,
  Abs,
  Min2,
  Max2,
  Exp,
  Log,
  Sqrt,
  CmpLt,
  CmpLe,
  CmpGt,
  CmpGe,
  CmpEq,
  CmpNe,
  JumpIfZero,  // a = absolute target
  Jump,        // a = absolute target
};

struct Op {
  OpCode code;
  std::int32_t a = 0;
  double imm = 0.0;
};

struct Program {
  std::vector<Op> ops;
  int stack_need = 0;
  int dim = 1;

  // Throws EvalError on the same inputs eval_expr would.
  double run(std::span<const double> x) const;
};

Program compile_program(const Expr& e, int dim, const ParamMap& params);

}  // namespace xconvex
