#pragma once

#include <cstdint>

#include "il/term.hpp"

namespace il {

// Deterministic seeded random-program source. Generated programs are
// well-formed and closed up to the declared free-variable pool: binders come
// from a small pool, expressions mention only in-scope variables, argument
// lists match parameter lists, and every function definition is applied in
// its continuation.
struct GenConfig {
  uint64_t seed = 1;
  int max_depth = 6;
  int var_pool = 6;
  int label_pool = 4;
  int action_pool = 3;
  double extern_prob = 0.15;
  int free_vars = 0;  // usable unbound variables (program inputs)
};

TermPtr gen_program(const GenConfig& config);

// Free variables the generator may leave unbound for a config.
VarSet gen_free_pool(const GenConfig& config);

// Deterministic structural mutation exercising inequivalent variants:
// flips literals, operators, or branches somewhere in the term.
TermPtr mutate_program(const TermPtr& s, uint64_t seed);

// Stream of raw pseudo-random bits; stable across platforms.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

  bool chance(double p) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < p;
  }
};

}  // namespace il
