#include <doctest.h>

#include "il/apart.hpp"
#include "il/context.hpp"
#include "il/expr.hpp"
#include "il/generator.hpp"
#include "il/parse.hpp"
#include "il/renaming.hpp"
#include "il/term.hpp"
#include "programs.hpp"

using namespace il;

namespace {

TermPtr parsed(const char* text) {
  ParseResult r = parse(text);
  REQUIRE(r.ok());
  return r.term;
}

Env env_of(std::initializer_list<std::pair<const char*, Value>> bindings) {
  Env env;
  for (const auto& [n, v] : bindings) env = env.with(var(n), v);
  return env;
}

}  // namespace

TEST_CASE("interning is bijective per alphabet") {
  CHECK(var("x") == var("x"));
  CHECK(var("x") != var("y"));
  CHECK(name(var("x")) == "x");
  // Same spelling in different alphabets stays distinct.
  CHECK(name(label("x")) == "x");
  CHECK(name(action("x")) == "x");
  Var v = var("zz_order_a");
  Var w = var("zz_order_b");
  CHECK(v.index < w.index);  // later interning, larger index
  CHECK(var_at(v.index) == v);
}

TEST_CASE("varset operations") {
  VarSet s{var("a"), var("b")};
  CHECK(s.to_string() == "{a, b}");
  CHECK(s.contains(var("a")));
  CHECK(!s.contains(var("c")));
  CHECK(s.unioned({var("c")}).size() == 3);
  CHECK(s.intersect({var("b"), var("c")}) == VarSet{var("b")});
  CHECK(s.minus(var("a")) == VarSet{var("b")});
  CHECK(VarSet{var("b")}.subset_of(s));
  CHECK(s.disjoint({var("c")}));
  CHECK(!s.disjoint({var("b")}));
}

TEST_CASE("expression evaluation") {
  CHECK(eval_expr(*bin(BinOp::Add, lit(1), lit(2)), {}) == 3);
  CHECK(eval_expr(*ref(var("x")), {}) == std::nullopt);
  CHECK(eval_expr(*bin(BinOp::Le, ref(var("p")), ref(var("m"))),
                  env_of({{"p", 2}, {"m", 4}})) == 1);
  CHECK(eval_expr(*bin(BinOp::Div, lit(7), lit(0)), {}) == std::nullopt);
  CHECK(eval_expr(*bin(BinOp::Div, lit(7), lit(2)), {}) == 3);
  // Wrapping arithmetic.
  CHECK(eval_expr(*bin(BinOp::Add, lit(INT64_MAX), lit(1)), {}) == INT64_MIN);
  CHECK(eval_expr(*bin(BinOp::Div, lit(INT64_MIN), lit(-1)), {}) == INT64_MIN);
  CHECK(eval_expr(*bin(BinOp::Ne, lit(3), lit(4)), {}) == 1);
}

TEST_CASE("list evaluation is all-or-nothing") {
  std::vector<ExprPtr> good = {lit(1), bin(BinOp::Add, lit(2), lit(3))};
  auto vals = eval_expr_list(good, {});
  REQUIRE(vals.has_value());
  CHECK(*vals == std::vector<Value>{1, 5});

  std::vector<ExprPtr> bad = {lit(1), ref(var("x"))};
  CHECK(eval_expr_list(bad, {}) == std::nullopt);

  std::vector<ExprPtr> empty;
  CHECK(eval_expr_list(empty, env_of({{"y", 9}}))->empty());
}

TEST_CASE("truth conversion") {
  CHECK(beta(0) == 0);
  CHECK(beta(7) == 1);
  CHECK(beta(-3) == 1);
}

TEST_CASE("evaluation depends only on the free variables") {
  SplitMix64 rng(2024);
  std::vector<ExprPtr> samples = {
      bin(BinOp::Add, ref(var("a")), bin(BinOp::Mul, ref(var("b")), lit(3))),
      bin(BinOp::Le, ref(var("a")), lit(0)),
      bin(BinOp::Div, lit(100), ref(var("b"))),
      lit(42),
  };
  for (const auto& e : samples) {
    VarSet fv = free_vars(*e);
    for (int trial = 0; trial < 50; ++trial) {
      Env base;
      for (Var v : fv)
        base = base.with(v, static_cast<Value>(rng.below(7)) - 3);
      Env noisy = base.with(var("noise_1"), static_cast<Value>(rng.below(100)))
                      .with(var("noise_2"), static_cast<Value>(rng.below(100)));
      CHECK(eval_expr(*e, base) == eval_expr(*e, noisy));
    }
  }
}

TEST_CASE("context lookup and rewind") {
  Label f = label("f");
  Label g = label("g");
  Ctx<int> empty;
  CHECK(empty.lookup(f) == std::nullopt);

  Ctx<int> one = empty.pushed(f, 1);
  CHECK(one.lookup(f) == 1);

  Ctx<int> shadowed = one.pushed(f, 2);
  CHECK(shadowed.lookup(f) == 2);

  Ctx<int> two = one.pushed(g, 2);
  auto rewound = two.rewind(f);
  REQUIRE(rewound.has_value());
  CHECK(rewound->size() == 1);
  CHECK(rewound->lookup(f) == 1);
  CHECK(one.rewind(f)->size() == 1);
  CHECK(!Ctx<int>{}.pushed(g, 2).rewind(f).has_value());

  // Placeholder entries behave as undefined.
  Ctx<int> undefined = one.pushed(f, std::nullopt);
  CHECK(undefined.lookup(f) == std::nullopt);
  CHECK(!undefined.rewind(f).has_value());
}

TEST_CASE("rewind preserves lookup") {
  SplitMix64 rng(7);
  std::vector<Label> names = {label("f"), label("g"), label("h")};
  for (int trial = 0; trial < 100; ++trial) {
    Ctx<int> ctx;
    for (int i = 0; i < 6; ++i)
      ctx.push(names[rng.below(names.size())], static_cast<int>(rng.below(50)));
    for (Label l : names) {
      auto rewound = ctx.rewind(l);
      if (rewound) CHECK(rewound->lookup(l) == ctx.lookup(l));
    }
  }
}

TEST_CASE("context restriction") {
  Label f = label("f");
  VarSet x{var("x")};
  VarSet xy{var("x"), var("y")};
  VarSet y{var("y")};

  CHECK(ctx_restrict({}, x) == Ctx<VarSet>{});

  Ctx<VarSet> lam;
  lam.push(f, x);
  CHECK(ctx_restrict(lam, xy) == lam);

  Ctx<VarSet> dropped = ctx_restrict(lam, y);
  REQUIRE(dropped.size() == 1);
  CHECK(dropped.lookup(f) == std::nullopt);

  // Length and positions always preserved; idempotent for a fixed keep set.
  Ctx<VarSet> mixed = lam.pushed(label("g"), xy).pushed(label("h"), std::nullopt);
  Ctx<VarSet> once = ctx_restrict(mixed, x);
  CHECK(once.size() == mixed.size());
  CHECK(ctx_restrict(once, x) == once);
}

TEST_CASE("free, bound, and occurring variables") {
  CHECK(free_vars(*make_ret(ref(var("x")))) == VarSet{var("x")});
  CHECK(free_vars(*make_letv(var("x"), ext(lit(7)), make_ret(ref(var("x"))))) ==
        VarSet{});
  CHECK(bound_vars(*make_ret(ref(var("x")))) == VarSet{});
  CHECK(bound_vars(*make_letv(var("x"), ext(lit(7)), make_ret(ref(var("x"))))) ==
        VarSet{var("x")});
  CHECK(occ_vars(*make_ret(lit(5))) == VarSet{});
  CHECK(occ_vars(*make_ret(ref(var("x")))) == VarSet{var("x")});

  TermPtr product = parsed(testprog::kProductRange);
  CHECK(free_vars(*product) == VarSet{var("n"), var("m")});
  CHECK(bound_vars(*product) == VarSet{var("i"), var("j"), var("p"), var("c"),
                                       var("k"), var("m")});
  CHECK(occ_vars(*product) == VarSet{var("i"), var("j"), var("p"), var("c"),
                                     var("k"), var("m"), var("n")});
}

TEST_CASE("renaming application") {
  TermPtr s = parsed(testprog::kProductRange);
  CHECK(term_equal(*rename_term({}, *s), *s));

  TermPtr let_x = make_letv(var("x"), ext(lit(7)), make_ret(ref(var("x"))));
  Renaming to_y;
  to_y.set(var("x"), var("y"));
  CHECK(term_equal(*rename_term(to_y, *let_x),
                   *make_letv(var("y"), ext(lit(7)), make_ret(ref(var("y"))))));

  // Per-occurrence substitution in an application.
  Renaming rho;
  rho.set(var("j"), var("i"));
  rho.set(var("p"), var("n"));
  rho.set(var("k"), var("i"));
  TermPtr call = make_app(label("f"), {ref(var("k")), ref(var("m"))});
  CHECK(term_equal(*rename_term(rho, *call),
                   *make_app(label("f"), {ref(var("i")), ref(var("m"))})));
}

TEST_CASE("renaming composition and free-variable image on renamed-apart terms") {
  SplitMix64 rng(99);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    GenConfig config;
    config.seed = seed;
    config.max_depth = 4;
    config.free_vars = 2;
    TermPtr program = gen_program(config);
    auto apart = rename_apart({}, free_vars(*program), *program);
    REQUIRE(apart.has_value());
    const TermPtr& s = apart->term;

    // Injective images keep the renaming consistent, as the assignment
    // algorithm's output would be.
    auto injective = [&](const VarSet& domain, uint32_t base) {
      Renaming rho;
      std::vector<uint32_t> offsets;
      for (Var v : domain) {
        uint32_t offset;
        do {
          offset = static_cast<uint32_t>(rng.below(64));
        } while (std::find(offsets.begin(), offsets.end(), offset) !=
                 offsets.end());
        offsets.push_back(offset);
        rho.set(v, var_at(base + offset));
      }
      return rho;
    };
    Renaming rho1 = injective(occ_vars(*s), 100);
    Renaming rho2 = injective(rho1(occ_vars(*s)), 200);
    CHECK(term_equal(*rename_term(rho2, *rename_term(rho1, *s)),
                     *rename_term(compose(rho2, rho1), *s)));
    CHECK(free_vars(*rename_term(rho1, *s)) == rho1(free_vars(*s)));
  }
}

TEST_CASE("annotation shape agreement") {
  TermPtr leaf = make_ret(ref(var("x")));
  CHECK(ann_wellformed(*leaf, *make_ann({var("x")})));
  CHECK(!ann_wellformed(*leaf, *make_ann({var("x")}, {make_ann({})})));

  TermPtr nested = make_letv(var("x"), ext(lit(1)), leaf);
  CHECK(ann_wellformed(*nested, *make_ann({}, {make_ann({var("x")})})));
  CHECK(!ann_wellformed(*nested, *make_ann({})));
}
