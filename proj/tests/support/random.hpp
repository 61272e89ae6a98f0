#pragma once

// Seeded generators for property tests.

#include <cstdint>
#include <random>

#include "fog/dpda.hpp"
#include "fog/grammar.hpp"

namespace fogtest {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);
bool chance(Rng& rng, double p);

struct GrammarShape {
    int min_nonterminals = 1;
    int max_nonterminals = 3;
    std::uint32_t max_arity = 2;
    int max_actions = 3;
    std::uint32_t rhs_depth = 2;
    double rule_density = 0.6;
    bool require_nullary = true;
};

fog::Grammar random_grammar(Rng& rng, const GrammarShape& shape = {});

/// Finite term of depth <= depth over the signature and x1..vars.
fog::TermGraph random_finite_term(Rng& rng, const fog::Signature& sig, std::uint32_t depth, fog::VarIndex vars,
                                  double var_prob = 0.3);

/// Ground regular term; leaves below `depth` close with a nullary symbol or
/// an edge back to an ancestor, so the result may be infinite.
fog::TermGraph random_ground_term(Rng& rng, const fog::Signature& sig, std::uint32_t depth,
                                  double back_edge_prob = 0.25);

fog::Word random_word(Rng& rng, std::size_t actions, std::size_t len);

struct DpdaShape {
    int max_states = 3;
    int max_stack = 3;
    int max_actions = 2;
    double eps_prob = 0.3;
    double rule_prob = 0.7;
    int max_push = 2;
};

fog::Dpda random_dpda(Rng& rng, const DpdaShape& shape = {});
fog::Config random_config(Rng& rng, const fog::Dpda& m, int max_stack);

}  // namespace fogtest
