#include "il/parse.hpp"

#include <cctype>
#include <cstdint>
#include <utility>

namespace il {

namespace {

enum class Tok {
  Ident,
  Int,
  KwLet,
  KwIn,
  KwFun,
  KwIf,
  KwThen,
  KwElse,
  KwExtern,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Colon,
  At,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Le,
  Lt,
  EqEq,
  Ne,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t number = 0;
  SourcePos pos;
};

struct ParseError {
  Diagnostic diag;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({Tok::End, "", 0, pos});
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                             peek() == '_' || peek() == '\''))
          ident += take();
        out.push_back({keyword(ident), ident, 0, pos});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::Int, "", take_number(), pos});
        continue;
      }
      take();
      switch (c) {
        case '(': out.push_back({Tok::LParen, "(", 0, pos}); break;
        case ')': out.push_back({Tok::RParen, ")", 0, pos}); break;
        case '{': out.push_back({Tok::LBrace, "{", 0, pos}); break;
        case '}': out.push_back({Tok::RBrace, "}", 0, pos}); break;
        case ',': out.push_back({Tok::Comma, ",", 0, pos}); break;
        case ':': out.push_back({Tok::Colon, ":", 0, pos}); break;
        case '@': out.push_back({Tok::At, "@", 0, pos}); break;
        case '+': out.push_back({Tok::Plus, "+", 0, pos}); break;
        case '-': out.push_back({Tok::Minus, "-", 0, pos}); break;
        case '*': out.push_back({Tok::Star, "*", 0, pos}); break;
        case '/': out.push_back({Tok::Slash, "/", 0, pos}); break;
        case '<':
          if (!at_end() && peek() == '=') {
            take();
            out.push_back({Tok::Le, "<=", 0, pos});
          } else {
            out.push_back({Tok::Lt, "<", 0, pos});
          }
          break;
        case '=':
          if (!at_end() && peek() == '=') {
            take();
            out.push_back({Tok::EqEq, "==", 0, pos});
          } else {
            out.push_back({Tok::Assign, "=", 0, pos});
          }
          break;
        case '!':
          if (!at_end() && peek() == '=') {
            take();
            out.push_back({Tok::Ne, "!=", 0, pos});
            break;
          }
          throw ParseError{{pos, "unexpected character '!'"}};
        default:
          throw ParseError{{pos, std::string("unexpected character '") + c + "'"}};
      }
    }
  }

 private:
  static Tok keyword(const std::string& ident) {
    if (ident == "let") return Tok::KwLet;
    if (ident == "in") return Tok::KwIn;
    if (ident == "fun") return Tok::KwFun;
    if (ident == "if") return Tok::KwIf;
    if (ident == "then") return Tok::KwThen;
    if (ident == "else") return Tok::KwElse;
    if (ident == "extern") return Tok::KwExtern;
    return Tok::Ident;
  }

  bool at_end() const { return offset_ >= text_.size(); }
  char peek() const { return text_[offset_]; }

  char take() {
    char c = text_[offset_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  uint64_t take_number() {
    uint64_t value = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      value = value * 10 + static_cast<uint64_t>(take() - '0');
    return value;
  }

  void skip_trivia() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) take();
      if (!at_end() && peek() == '/' && offset_ + 1 < text_.size() &&
          text_[offset_ + 1] == '/') {
        while (!at_end() && peek() != '\n') take();
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  size_t offset_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens, ParseResult& result)
      : tokens_(std::move(tokens)), result_(result) {}

  std::pair<TermPtr, AnnPtr> run() {
    auto parsed = parse_term();
    expect(Tok::End, "expected end of input");
    return parsed;
  }

 private:
  const Token& cur() const { return tokens_[index_]; }
  const Token& next() const { return tokens_[index_ + 1 < tokens_.size() ? index_ + 1 : index_]; }
  void advance() { if (cur().kind != Tok::End) ++index_; }

  bool accept(Tok k) {
    if (cur().kind != k) return false;
    advance();
    return true;
  }

  Token expect(Tok k, const char* message) {
    if (cur().kind != k) throw ParseError{{cur().pos, message}};
    Token t = cur();
    advance();
    return t;
  }

  TermPtr record(TermPtr t, SourcePos pos) {
    result_.positions.emplace(t.get(), pos);
    return t;
  }

  std::pair<TermPtr, AnnPtr> parse_term() {
    if (++depth_ > kMaxNesting)
      throw ParseError{{cur().pos, "nesting too deep"}};
    auto parsed = parse_annotated_term();
    --depth_;
    return parsed;
  }

  std::pair<TermPtr, AnnPtr> parse_annotated_term() {
    SourcePos pos = cur().pos;
    AnnPtr here;
    bool annotated = false;
    VarSet live;
    if (accept(Tok::At)) {
      live = parse_varset();
      annotated = true;
    }

    auto [term, ann] = parse_bare_term();
    if (annotated) {
      if (!ann && !subterm_count_zero(*term))
        throw ParseError{{pos, "live annotation requires annotations on all subterms"}};
      std::vector<AnnPtr> children = ann ? ann->children : std::vector<AnnPtr>{};
      here = make_ann(std::move(live), std::move(children));
      return {term, here};
    }
    if (ann)
      throw ParseError{{pos, "missing live annotation on enclosing term"}};
    return {term, nullptr};
  }

  // Children of an annotated node must themselves be annotated; the parser
  // assembles a node whose children slots are filled by parse_term calls, so
  // parse_bare_term returns an annotation skeleton when children carried one.
  static bool subterm_count_zero(const Term& t) {
    return std::holds_alternative<Term::Ret>(t.node) ||
           std::holds_alternative<Term::App>(t.node);
  }

  std::pair<TermPtr, AnnPtr> parse_bare_term() {
    SourcePos pos = cur().pos;
    switch (cur().kind) {
      case Tok::KwLet: {
        advance();
        Token x = expect(Tok::Ident, "expected variable name after 'let'");
        Var bound = var(x.text);
        expect(Tok::Assign, "expected '=' in let binding");
        ExtExpr rhs = accept(Tok::KwExtern)
                          ? ext(action(expect(Tok::Ident, "expected action name after 'extern'").text))
                          : ext(parse_expr());
        expect(Tok::KwIn, "expected 'in' after let binding");
        auto [body, body_ann] = parse_term();
        TermPtr t = record(make_letv(bound, rhs, body), pos);
        AnnPtr a = body_ann ? make_ann({}, {body_ann}) : nullptr;
        return {t, a};
      }
      case Tok::KwIf: {
        advance();
        ExprPtr guard = parse_expr();
        expect(Tok::KwThen, "expected 'then'");
        auto [then_t, then_a] = parse_term();
        expect(Tok::KwElse, "expected 'else'");
        auto [else_t, else_a] = parse_term();
        if (static_cast<bool>(then_a) != static_cast<bool>(else_a))
          throw ParseError{{pos, "live annotation requires annotations on all subterms"}};
        TermPtr t = record(make_cond(guard, then_t, else_t), pos);
        AnnPtr a = then_a ? make_ann({}, {then_a, else_a}) : nullptr;
        return {t, a};
      }
      case Tok::KwFun: {
        advance();
        Token f = expect(Tok::Ident, "expected function name after 'fun'");
        expect(Tok::LParen, "expected '(' after function name");
        std::vector<Var> params;
        VarSet seen;
        if (cur().kind != Tok::RParen) {
          do {
            Token p = expect(Tok::Ident, "expected parameter name");
            Var pv = var(p.text);
            if (seen.contains(pv))
              throw ParseError{{p.pos, "duplicate parameter '" + p.text + "'"}};
            seen.insert(pv);
            params.push_back(pv);
          } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "expected ')' after parameters");
        std::optional<VarSet> globals;
        if (accept(Tok::Colon)) globals = parse_varset();
        expect(Tok::Assign, "expected '=' before function body");
        auto [body, body_ann] = parse_term();
        expect(Tok::KwIn, "expected 'in' after function body");
        auto [cont, cont_ann] = parse_term();
        if (static_cast<bool>(body_ann) != static_cast<bool>(cont_ann))
          throw ParseError{{pos, "live annotation requires annotations on all subterms"}};
        TermPtr t = record(
            make_letfun(label(f.text), std::move(params), std::move(globals), body, cont),
            pos);
        AnnPtr a = body_ann ? make_ann({}, {body_ann, cont_ann}) : nullptr;
        return {t, a};
      }
      case Tok::Ident:
        if (next().kind == Tok::LParen) {
          Token f = cur();
          advance();
          advance();
          std::vector<ExprPtr> args;
          if (cur().kind != Tok::RParen) {
            do {
              args.push_back(parse_expr());
            } while (accept(Tok::Comma));
          }
          expect(Tok::RParen, "expected ')' after arguments");
          return {record(make_app(label(f.text), std::move(args)), pos), nullptr};
        }
        [[fallthrough]];
      default:
        return {record(make_ret(parse_expr()), pos), nullptr};
    }
  }

  VarSet parse_varset() {
    expect(Tok::LBrace, "expected '{'");
    VarSet out;
    if (cur().kind != Tok::RBrace) {
      do {
        Token x = expect(Tok::Ident, "expected variable name in set");
        out.insert(var(x.text));
      } while (accept(Tok::Comma));
    }
    expect(Tok::RBrace, "expected '}'");
    return out;
  }

  ExprPtr parse_expr() { return parse_cmp(); }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    for (;;) {
      BinOp op;
      switch (cur().kind) {
        case Tok::Le: op = BinOp::Le; break;
        case Tok::Lt: op = BinOp::Lt; break;
        case Tok::EqEq: op = BinOp::Eq; break;
        case Tok::Ne: op = BinOp::Ne; break;
        default: return lhs;
      }
      advance();
      lhs = bin(op, lhs, parse_add());
    }
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      BinOp op;
      switch (cur().kind) {
        case Tok::Plus: op = BinOp::Add; break;
        case Tok::Minus: op = BinOp::Sub; break;
        default: return lhs;
      }
      advance();
      lhs = bin(op, lhs, parse_mul());
    }
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_primary();
    for (;;) {
      BinOp op;
      switch (cur().kind) {
        case Tok::Star: op = BinOp::Mul; break;
        case Tok::Slash: op = BinOp::Div; break;
        default: return lhs;
      }
      advance();
      lhs = bin(op, lhs, parse_primary());
    }
  }

  ExprPtr parse_primary() {
    switch (cur().kind) {
      case Tok::Int: {
        uint64_t raw = cur().number;
        advance();
        return lit(static_cast<Value>(raw));
      }
      case Tok::Minus: {
        advance();
        Token n = expect(Tok::Int, "expected integer after '-'");
        return lit(static_cast<Value>(~n.number + 1));
      }
      case Tok::Ident: {
        Token x = cur();
        advance();
        return ref(var(x.text));
      }
      case Tok::LParen: {
        if (++depth_ > kMaxNesting)
          throw ParseError{{cur().pos, "nesting too deep"}};
        advance();
        ExprPtr e = parse_expr();
        --depth_;
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      default:
        throw ParseError{{cur().pos, "expected expression"}};
    }
  }

  static constexpr size_t kMaxNesting = 400;

  std::vector<Token> tokens_;
  size_t index_ = 0;
  size_t depth_ = 0;
  ParseResult& result_;
};

}  // namespace

ParseResult parse(std::string_view text) {
  ParseResult result;
  try {
    Lexer lexer(text);
    Parser parser(lexer.run(), result);
    auto [term, ann] = parser.run();
    result.term = term;
    result.ann = ann;
  } catch (const ParseError& e) {
    result.term = nullptr;
    result.ann = nullptr;
    result.diagnostics.push_back(e.diag);
  }
  return result;
}

std::string format_diagnostic(std::string_view file, const Diagnostic& d) {
  return std::string(file) + ":" + std::to_string(d.pos.line) + ":" +
         std::to_string(d.pos.col) + ": " + d.message;
}

}  // namespace il
