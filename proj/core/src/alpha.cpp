#include "il/alpha.hpp"

#include <map>

#include "il/util.hpp"

namespace il {

namespace {

struct AlphaState {
  // Binder correspondences, innermost last.
  std::vector<std::pair<Var, Var>> bound;
  std::vector<std::pair<Label, Label>> bound_labels;
  // Accumulated free-occurrence maps, kept mutually inverse.
  std::map<Var, Var> free_fwd;
  std::map<Var, Var> free_bwd;
  std::map<Label, Label> flab_fwd;
  std::map<Label, Label> flab_bwd;
};

bool match_var(AlphaState& st, Var x, Var y) {
  for (auto it = st.bound.rbegin(); it != st.bound.rend(); ++it) {
    bool left_hit = it->first == x;
    bool right_hit = it->second == y;
    if (left_hit || right_hit) return left_hit && right_hit;
  }
  auto fwd = st.free_fwd.find(x);
  auto bwd = st.free_bwd.find(y);
  if (fwd != st.free_fwd.end()) return fwd->second == y && bwd != st.free_bwd.end() && bwd->second == x;
  if (bwd != st.free_bwd.end()) return false;  // y already paired elsewhere
  st.free_fwd.emplace(x, y);
  st.free_bwd.emplace(y, x);
  return true;
}

bool match_label(AlphaState& st, Label f, Label g) {
  for (auto it = st.bound_labels.rbegin(); it != st.bound_labels.rend(); ++it) {
    bool left_hit = it->first == f;
    bool right_hit = it->second == g;
    if (left_hit || right_hit) return left_hit && right_hit;
  }
  auto fwd = st.flab_fwd.find(f);
  auto bwd = st.flab_bwd.find(g);
  if (fwd != st.flab_fwd.end()) return fwd->second == g && bwd != st.flab_bwd.end() && bwd->second == f;
  if (bwd != st.flab_bwd.end()) return false;
  st.flab_fwd.emplace(f, g);
  st.flab_bwd.emplace(g, f);
  return true;
}

bool match_expr(AlphaState& st, const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Expr::Lit& l) {
            return l.value == std::get<Expr::Lit>(b.node).value;
          },
          [&](const Expr::Ref& r) {
            return match_var(st, r.var, std::get<Expr::Ref>(b.node).var);
          },
          [&](const Expr::Bin& x) {
            const auto& y = std::get<Expr::Bin>(b.node);
            return x.op == y.op && match_expr(st, *x.lhs, *y.lhs) &&
                   match_expr(st, *x.rhs, *y.rhs);
          },
      },
      a.node);
}

bool match_term(AlphaState& st, const Term& a, const Term& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Term::Ret& x) {
            return match_expr(st, *x.expr, *std::get<Term::Ret>(b.node).expr);
          },
          [&](const Term::LetVal& x) {
            const auto& y = std::get<Term::LetVal>(b.node);
            if (x.rhs.is_expr() != y.rhs.is_expr()) return false;
            if (x.rhs.is_expr()) {
              if (!match_expr(st, *x.rhs.expr(), *y.rhs.expr())) return false;
            } else if (x.rhs.act() != y.rhs.act()) {
              return false;
            }
            st.bound.emplace_back(x.var, y.var);
            bool ok = match_term(st, *x.body, *y.body);
            st.bound.pop_back();
            return ok;
          },
          [&](const Term::Cond& x) {
            const auto& y = std::get<Term::Cond>(b.node);
            return match_expr(st, *x.guard, *y.guard) &&
                   match_term(st, *x.then_branch, *y.then_branch) &&
                   match_term(st, *x.else_branch, *y.else_branch);
          },
          [&](const Term::LetFun& x) {
            const auto& y = std::get<Term::LetFun>(b.node);
            if (x.params.size() != y.params.size()) return false;
            st.bound_labels.emplace_back(x.fn, y.fn);
            for (size_t i = 0; i < x.params.size(); ++i)
              st.bound.emplace_back(x.params[i], y.params[i]);
            bool ok = match_term(st, *x.body, *y.body);
            for (size_t i = 0; i < x.params.size(); ++i) st.bound.pop_back();
            if (ok) ok = match_term(st, *x.cont, *y.cont);
            st.bound_labels.pop_back();
            return ok;
          },
          [&](const Term::App& x) {
            const auto& y = std::get<Term::App>(b.node);
            if (!match_label(st, x.fn, y.fn)) return false;
            if (x.args.size() != y.args.size()) return false;
            for (size_t i = 0; i < x.args.size(); ++i)
              if (!match_expr(st, *x.args[i], *y.args[i])) return false;
            return true;
          },
      },
      a.node);
}

}  // namespace

std::optional<AlphaMaps> alpha_check(const Term& left, const Term& right) {
  AlphaState st;
  if (!match_term(st, left, right)) return std::nullopt;
  AlphaMaps maps;
  for (const auto& [x, y] : st.free_fwd) maps.forward.set(x, y);
  for (const auto& [y, x] : st.free_bwd) maps.backward.set(y, x);
  maps.free_labels.assign(st.flab_fwd.begin(), st.flab_fwd.end());
  return maps;
}

}  // namespace il
