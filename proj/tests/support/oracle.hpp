#pragma once

// Reference implementations that avoid the library's canonical forms and
// product searches; slow, but obviously correct on small inputs.

#include <optional>
#include <set>
#include <string>

#include "fog/dpda.hpp"
#include "fog/grammar.hpp"

namespace fogtest {

/// The term unfolded to the given depth, written as a string; nodes below
/// the cut are shown as '?'.
std::string unfold(const fog::TermGraph& t, std::uint32_t depth);

/// Comparison of unfoldings truncated at |t|*|u|+1.
bool unfold_equal(const fog::TermGraph& t, const fog::TermGraph& u);

/// Least word in (length, lexicographic) order enabled by exactly one side,
/// by comparing trace sets.
std::optional<fog::Word> brute_offending(const fog::Grammar& g, const fog::TermGraph& t, const fog::TermGraph& u,
                                         std::uint32_t k);

/// All words of length <= k over the actions, in (length, lex) order.
std::vector<fog::Word> all_words(std::size_t actions, std::uint32_t k);

/// X(x1, ..., xm) for X of arity m.
fog::TermGraph generic(const fog::Grammar& g, fog::NonterminalId x);

/// Shortest exposing word for (X, i) by exhaustive enumeration in
/// (length, lex) order, up to length k.
std::optional<fog::Word> brute_exposing(const fog::Grammar& g, fog::NonterminalId x, fog::VarIndex i,
                                        std::uint32_t k);

struct BruteConstants {
    std::uint64_t m0, m1, m2, m3;
};

/// M0..M3 from brute-force exposing words and rhs depths; nullopt when some
/// slot has no exposing word up to length k.
std::optional<BruteConstants> brute_constants(const fog::Grammar& g, std::uint32_t k);

/// Type-n by the definition: w = v u v with v of type n-1 and u nonempty.
bool is_type_n(const std::string& w, std::uint32_t n);
bool has_type_n_subword(const std::string& w, std::uint32_t n);

/// All words of the given length over {a, b}, in lex order.
std::vector<std::string> binary_words(std::size_t len);

/// Explicit configuration-graph simulation of a DPDA with a step bound on
/// silent moves; a configuration exceeding it is treated as divergent.
std::set<fog::Word> dpda_traces(const fog::Dpda& m, const fog::Config& c, std::uint32_t k);
std::set<fog::Word> dpda_language(const fog::Dpda& m, const fog::Config& c, std::uint32_t k);

/// Config is stuck in an infinite silent run.
bool dpda_diverges(const fog::Dpda& m, const fog::Config& c);

}  // namespace fogtest
