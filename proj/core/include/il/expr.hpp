#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "il/symbols.hpp"

namespace il {

// Values are 64-bit signed integers. Arithmetic wraps; division by zero is
// expression failure.
using Value = int64_t;

enum class BinOp { Add, Sub, Mul, Div, Le, Lt, Eq, Ne };

std::string_view binop_symbol(BinOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  struct Lit {
    Value value;
  };
  struct Ref {
    Var var;
  };
  struct Bin {
    BinOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };

  std::variant<Lit, Ref, Bin> node;
};

ExprPtr lit(Value v);
ExprPtr ref(Var x);
ExprPtr bin(BinOp op, ExprPtr lhs, ExprPtr rhs);

VarSet free_vars(const Expr& e);
VarSet free_vars(std::span<const ExprPtr> es);

bool expr_equal(const Expr& a, const Expr& b);

// Either an expression or a system-call action; the right-hand side of a
// variable binding.
struct ExtExpr {
  std::variant<ExprPtr, Action> node;

  bool is_expr() const { return std::holds_alternative<ExprPtr>(node); }
  const ExprPtr& expr() const { return std::get<ExprPtr>(node); }
  Action act() const { return std::get<Action>(node); }
};

inline ExtExpr ext(ExprPtr e) { return ExtExpr{std::move(e)}; }
inline ExtExpr ext(Action a) { return ExtExpr{a}; }

VarSet free_vars(const ExtExpr& e);
bool ext_equal(const ExtExpr& a, const ExtExpr& b);

// Environments are total maps to optional values; unbound variables read as
// failure. Updates are functional.
class Env {
 public:
  Env() = default;

  std::optional<Value> get(Var x) const;

  [[nodiscard]] Env with(Var x, Value v) const;
  [[nodiscard]] Env with_all(std::span<const Var> xs,
                             std::span<const Value> vs) const;

  // V =_X V': agreement on every variable of X.
  bool agrees_on(const Env& other, const VarSet& xs) const;

  const std::vector<std::pair<Var, Value>>& entries() const {
    return entries_;
  }

  friend bool operator==(const Env&, const Env&) = default;

 private:
  std::vector<std::pair<Var, Value>> entries_;  // sorted by variable index
};

// Evaluation is strict and may fail; failure is an in-band result, never an
// exception. The result depends only on the environment restricted to the
// free variables of the expression.
std::optional<Value> eval_expr(const Expr& e, const Env& env);
std::optional<std::vector<Value>> eval_expr_list(std::span<const ExprPtr> es,
                                                 const Env& env);

// Truth-value conversion for conditionals: 1 iff the value is nonzero.
int beta(Value v);

std::optional<Value> apply_binop(BinOp op, Value a, Value b);

}  // namespace il
