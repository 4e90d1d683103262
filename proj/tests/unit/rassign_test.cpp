#include <doctest.h>

#include "il/alpha.hpp"
#include "il/coherence.hpp"
#include "il/generator.hpp"
#include "il/parse.hpp"
#include "il/pipeline.hpp"
#include "il/rassign.hpp"
#include "programs.hpp"

using namespace il;

namespace {

TermPtr parsed(const char* text) {
  ParseResult r = parse(text);
  REQUIRE(r.ok());
  return r.term;
}

struct Prepared {
  TermPtr term;
  AnnPtr ann;
};

// Renamed apart with inferred liveness: the shape every assignment starts
// from.
Prepared prepared(const char* text) {
  TermPtr s = parsed(text);
  auto apart = rename_apart({}, free_vars(*s), *s);
  REQUIRE(apart.has_value());
  auto live = live_infer(apart->term);
  REQUIRE(live.has_value());
  return {live->term, live->ann};
}

Renaming compact(const VarSet& free) {
  Renaming rho;
  uint32_t next = 0;
  for (Var v : free) rho.set(v, var_at(next++));
  return rho;
}

}  // namespace

TEST_CASE("local injectivity") {
  Prepared p = prepared(testprog::kProductRange);
  CHECK(inj_check({}, *p.term, *p.ann));

  Renaming collide;
  collide.set(var("x"), var("z"));
  collide.set(var("y"), var("z"));
  TermPtr leaf = make_ret(bin(BinOp::Add, ref(var("x")), ref(var("y"))));
  CHECK(!inj_check(collide, *leaf, *make_ann({var("x"), var("y")})));
  CHECK(inj_check(collide, *leaf, *make_ann({var("x")})));
}

TEST_CASE("assignment of a bare value is the identity") {
  TermPtr leaf = make_ret(ref(var("x")));
  RassignOutcome outcome = rassign({}, *leaf, *make_ann({var("x")}));
  REQUIRE(outcome.ok());
  CHECK(outcome.assignment->entries().empty());
}

TEST_CASE("sequential bindings share a register when ranges do not overlap") {
  Prepared p = prepared("let x = 1 in let y = x in y");
  RassignOutcome outcome = rassign({}, *p.term, *p.ann);
  REQUIRE(outcome.ok());
  const Renaming& rho = *outcome.assignment;
  const auto& outer = std::get<Term::LetVal>(p.term->node);
  const auto& inner = std::get<Term::LetVal>(outer.body->node);
  CHECK(rho(outer.var) == rho(inner.var));
  CHECK(names_used(rho, *p.term).size() == 1);
  CHECK(inj_check(rho, *p.term, *p.ann));
}

TEST_CASE("named precondition diagnostics") {
  TermPtr duplicate = parsed("let x = 1 in let x = 2 in x");
  auto live = live_infer(duplicate);
  REQUIRE(live.has_value());
  RassignOutcome outcome = rassign({}, *live->term, *live->ann);
  REQUIRE(!outcome.ok());
  CHECK(outcome.error == "term is not renamed apart");

  Prepared dead = prepared("fun f () = 1 in 2");
  CHECK(rassign({}, *dead.term, *dead.ann).error ==
        "unreachable function definition");

  Prepared p = prepared(testprog::kProductRange);
  Renaming collapse;
  for (Var v : free_vars(*p.term)) collapse.set(v, var_at(0));
  CHECK(rassign(collapse, *p.term, *p.ann).error ==
        "initial renaming not injective on root live set");

  AnnPtr wrong_shape = make_ann({});
  CHECK(rassign({}, *p.term, *wrong_shape).error ==
        "annotation shape mismatch");

  AnnPtr too_small = shape_ann(*p.term);
  CHECK(rassign({}, *p.term, *too_small).error ==
        "invalid liveness annotation");
}

TEST_CASE("the product program compresses to four names") {
  Prepared p = prepared(testprog::kProductRange);
  Renaming initial = compact(free_vars(*p.term));
  RassignOutcome outcome = rassign(initial, *p.term, *p.ann);
  REQUIRE(outcome.ok());
  CHECK(max_live(*p.ann) == 4);
  VarSet names = names_used(*outcome.assignment, *p.term);
  CHECK(names.size() == 4);
  // Smallest-index freshness keeps every name among the four lowest.
  for (Var v : names) CHECK(v.index < 4);
  CHECK(inj_check(*outcome.assignment, *p.term, *p.ann));
}

TEST_CASE("assignment is injective on every live set for any freshness") {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    GenConfig config;
    config.seed = seed;
    config.max_depth = 5;
    config.free_vars = 2;
    TermPtr program = gen_program(config);
    auto apart = rename_apart({}, free_vars(*program), *program);
    REQUIRE(apart.has_value());
    auto live = live_infer(apart->term);
    REQUIRE(live.has_value());
    Renaming initial = compact(free_vars(*live->term));

    SmallestIndexFresh smallest;
    RassignOutcome compactified =
        rassign(initial, *live->term, *live->ann, &smallest);
    REQUIRE(compactified.ok());
    CHECK(inj_check(*compactified.assignment, *live->term, *live->ann));

    MintingFresh minting;
    RassignOutcome minted = rassign(initial, *live->term, *live->ann, &minting);
    REQUIRE(minted.ok());
    CHECK(inj_check(*minted.assignment, *live->term, *live->ann));
  }
}

TEST_CASE("the largest live set bounds the number of names") {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    GenConfig config;
    config.seed = seed;
    config.max_depth = 5;
    config.free_vars = 2;
    TermPtr program = gen_program(config);
    auto apart = rename_apart({}, free_vars(*program), *program);
    REQUIRE(apart.has_value());
    auto live = live_infer(apart->term);
    REQUIRE(live.has_value());

    VarSet free = free_vars(*live->term);
    Renaming initial = compact(free);
    RassignOutcome outcome = rassign(initial, *live->term, *live->ann);
    REQUIRE(outcome.ok());

    size_t bound = std::max(free.size(), max_live(*live->ann));
    VarSet names = names_used(*outcome.assignment, *live->term);
    CHECK(names.size() <= bound);
    for (Var v : names) CHECK(v.index < bound);
  }
}

TEST_CASE("renaming with the assignment yields a coherent alpha-variant") {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    GenConfig config;
    config.seed = seed;
    config.max_depth = 5;
    config.free_vars = 2;
    TermPtr program = gen_program(config);
    auto apart = rename_apart({}, free_vars(*program), *program);
    REQUIRE(apart.has_value());
    auto live = live_infer(apart->term);
    REQUIRE(live.has_value());
    Renaming initial = compact(free_vars(*live->term));
    RassignOutcome outcome = rassign(initial, *live->term, *live->ann);
    REQUIRE(outcome.ok());

    TermPtr renamed = rename_term(*outcome.assignment, *live->term);
    AnnPtr renamed_ann = rename_ann(*outcome.assignment, *live->ann);
    CHECK(coh_check({}, *renamed, *renamed_ann));
    auto maps = alpha_check(*renamed, *live->term);
    REQUIRE(maps.has_value());
    // The witness inverts the assignment on the free variables.
    for (Var v : free_vars(*live->term))
      CHECK(maps->forward((*outcome.assignment)(v)) == v);
  }
}
