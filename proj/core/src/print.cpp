#include "il/print.hpp"

#include <cassert>

#include "il/util.hpp"

namespace il {

namespace {

// Precedence levels, loosest first: comparisons, additive, multiplicative.
int level(BinOp op) {
  switch (op) {
    case BinOp::Le:
    case BinOp::Lt:
    case BinOp::Eq:
    case BinOp::Ne:
      return 1;
    case BinOp::Add:
    case BinOp::Sub:
      return 2;
    case BinOp::Mul:
    case BinOp::Div:
      return 3;
  }
  return 3;
}

void render_expr(const Expr& e, int parent_level, std::string& out) {
  std::visit(overloaded{
                 [&](const Expr::Lit& l) { out += std::to_string(l.value); },
                 [&](const Expr::Ref& r) { out += name(r.var); },
                 [&](const Expr::Bin& b) {
                   int l = level(b.op);
                   bool parens = l < parent_level;
                   if (parens) out += "(";
                   render_expr(*b.lhs, l, out);
                   out += " ";
                   out += binop_symbol(b.op);
                   out += " ";
                   render_expr(*b.rhs, l + 1, out);
                   if (parens) out += ")";
                 },
             },
             e.node);
}

std::string varset_text(const VarSet& xs) {
  std::string out = "{";
  bool first = true;
  for (Var v : xs) {
    if (!first) out += ", ";
    out += name(v);
    first = false;
  }
  return out + "}";
}

void indent(int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
}

void render(const Term& s, const Ann* ann, int depth, std::string& out) {
  if (ann != nullptr) {
    out += "@";
    out += varset_text(ann->live);
    out += " ";
  }
  std::visit(
      overloaded{
          [&](const Term::Ret& r) { render_expr(*r.expr, 0, out); },
          [&](const Term::LetVal& l) {
            out += "let " + name(l.var) + " = ";
            if (l.rhs.is_expr())
              render_expr(*l.rhs.expr(), 0, out);
            else
              out += "extern " + name(l.rhs.act());
            out += " in\n";
            indent(depth, out);
            render(*l.body, ann ? ann->children[0].get() : nullptr, depth, out);
          },
          [&](const Term::Cond& c) {
            out += "if ";
            render_expr(*c.guard, 0, out);
            out += " then\n";
            indent(depth + 1, out);
            render(*c.then_branch, ann ? ann->children[0].get() : nullptr,
                   depth + 1, out);
            out += "\n";
            indent(depth, out);
            out += "else\n";
            indent(depth + 1, out);
            render(*c.else_branch, ann ? ann->children[1].get() : nullptr,
                   depth + 1, out);
          },
          [&](const Term::LetFun& f) {
            out += "fun " + name(f.fn) + " (";
            for (size_t i = 0; i < f.params.size(); ++i) {
              if (i > 0) out += ", ";
              out += name(f.params[i]);
            }
            out += ")";
            if (f.globals) out += " : " + varset_text(*f.globals);
            out += " =\n";
            indent(depth + 1, out);
            render(*f.body, ann ? ann->children[0].get() : nullptr, depth + 1,
                   out);
            out += "\n";
            indent(depth, out);
            out += "in\n";
            indent(depth, out);
            render(*f.cont, ann ? ann->children[1].get() : nullptr, depth, out);
          },
          [&](const Term::App& a) {
            out += name(a.fn) + " (";
            for (size_t i = 0; i < a.args.size(); ++i) {
              if (i > 0) out += ", ";
              render_expr(*a.args[i], 0, out);
            }
            out += ")";
          },
      },
      s.node);
}

}  // namespace

std::string print(const Term& s, const Ann* ann) {
  assert(ann == nullptr || ann_wellformed(s, *ann));
  std::string out;
  render(s, ann, 0, out);
  out += "\n";
  return out;
}

std::string print(const TermPtr& s, const AnnPtr& ann) {
  return print(*s, ann.get());
}

std::string print_expr(const Expr& e) {
  std::string out;
  render_expr(e, 0, out);
  return out;
}

}  // namespace il
