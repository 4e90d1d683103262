#include "il/expr.hpp"

#include <algorithm>

#include "il/util.hpp"

namespace il {

std::string_view binop_symbol(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Le: return "<=";
    case BinOp::Lt: return "<";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
  }
  return "?";
}

ExprPtr lit(Value v) { return std::make_shared<Expr>(Expr{Expr::Lit{v}}); }
ExprPtr ref(Var x) { return std::make_shared<Expr>(Expr{Expr::Ref{x}}); }
ExprPtr bin(BinOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<Expr>(Expr{Expr::Bin{op, std::move(lhs), std::move(rhs)}});
}

namespace {

void collect_free(const Expr& e, VarSet& out) {
  std::visit(overloaded{
                 [](const Expr::Lit&) {},
                 [&](const Expr::Ref& r) { out.insert(r.var); },
                 [&](const Expr::Bin& b) {
                   collect_free(*b.lhs, out);
                   collect_free(*b.rhs, out);
                 },
             },
             e.node);
}

}  // namespace

VarSet free_vars(const Expr& e) {
  VarSet out;
  collect_free(e, out);
  return out;
}

VarSet free_vars(std::span<const ExprPtr> es) {
  VarSet out;
  for (const auto& e : es) collect_free(*e, out);
  return out;
}

VarSet free_vars(const ExtExpr& e) {
  if (e.is_expr()) return free_vars(*e.expr());
  return {};
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Expr::Lit& l) {
            return l.value == std::get<Expr::Lit>(b.node).value;
          },
          [&](const Expr::Ref& r) {
            return r.var == std::get<Expr::Ref>(b.node).var;
          },
          [&](const Expr::Bin& x) {
            const auto& y = std::get<Expr::Bin>(b.node);
            return x.op == y.op && expr_equal(*x.lhs, *y.lhs) &&
                   expr_equal(*x.rhs, *y.rhs);
          },
      },
      a.node);
}

bool ext_equal(const ExtExpr& a, const ExtExpr& b) {
  if (a.is_expr() != b.is_expr()) return false;
  if (a.is_expr()) return expr_equal(*a.expr(), *b.expr());
  return a.act() == b.act();
}

std::optional<Value> Env::get(Var x) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), x,
      [](const auto& entry, Var key) { return entry.first < key; });
  if (it != entries_.end() && it->first == x) return it->second;
  return std::nullopt;
}

Env Env::with(Var x, Value v) const {
  Env out = *this;
  auto it = std::lower_bound(
      out.entries_.begin(), out.entries_.end(), x,
      [](const auto& entry, Var key) { return entry.first < key; });
  if (it != out.entries_.end() && it->first == x)
    it->second = v;
  else
    out.entries_.insert(it, {x, v});
  return out;
}

Env Env::with_all(std::span<const Var> xs, std::span<const Value> vs) const {
  Env out = *this;
  for (size_t i = 0; i < xs.size() && i < vs.size(); ++i)
    out = out.with(xs[i], vs[i]);
  return out;
}

bool Env::agrees_on(const Env& other, const VarSet& xs) const {
  for (Var x : xs)
    if (get(x) != other.get(x)) return false;
  return true;
}

std::optional<Value> apply_binop(BinOp op, Value a, Value b) {
  auto ua = static_cast<uint64_t>(a);
  auto ub = static_cast<uint64_t>(b);
  switch (op) {
    case BinOp::Add: return static_cast<Value>(ua + ub);
    case BinOp::Sub: return static_cast<Value>(ua - ub);
    case BinOp::Mul: return static_cast<Value>(ua * ub);
    case BinOp::Div:
      if (b == 0) return std::nullopt;
      if (a == INT64_MIN && b == -1) return INT64_MIN;  // wraps
      return a / b;
    case BinOp::Le: return a <= b ? 1 : 0;
    case BinOp::Lt: return a < b ? 1 : 0;
    case BinOp::Eq: return a == b ? 1 : 0;
    case BinOp::Ne: return a != b ? 1 : 0;
  }
  return std::nullopt;
}

std::optional<Value> eval_expr(const Expr& e, const Env& env) {
  return std::visit(
      overloaded{
          [&](const Expr::Lit& l) -> std::optional<Value> { return l.value; },
          [&](const Expr::Ref& r) -> std::optional<Value> {
            return env.get(r.var);
          },
          [&](const Expr::Bin& b) -> std::optional<Value> {
            auto lhs = eval_expr(*b.lhs, env);
            if (!lhs) return std::nullopt;
            auto rhs = eval_expr(*b.rhs, env);
            if (!rhs) return std::nullopt;
            return apply_binop(b.op, *lhs, *rhs);
          },
      },
      e.node);
}

std::optional<std::vector<Value>> eval_expr_list(std::span<const ExprPtr> es,
                                                 const Env& env) {
  std::vector<Value> out;
  out.reserve(es.size());
  for (const auto& e : es) {
    auto v = eval_expr(*e, env);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  return out;
}

int beta(Value v) { return v != 0 ? 1 : 0; }

}  // namespace il
