#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fog/term.hpp"
#include "fog/term_pool.hpp"

namespace fog {

using ActionId = std::uint32_t;
using Word = std::vector<ActionId>;

class GrammarError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Nonterminal {
    std::string name;
    std::uint32_t arity = 0;
};

class Signature {
public:
    NonterminalId add(std::string name, std::uint32_t arity);
    std::optional<NonterminalId> find(std::string_view name) const;

    const Nonterminal& at(NonterminalId id) const { return symbols_.at(id); }
    const std::string& name(NonterminalId id) const { return symbols_.at(id).name; }
    std::uint32_t arity(NonterminalId id) const { return symbols_.at(id).arity; }
    std::size_t size() const { return symbols_.size(); }
    std::uint32_t max_arity() const;

    const std::vector<Nonterminal>& symbols() const { return symbols_; }

private:
    std::vector<Nonterminal> symbols_;
    std::unordered_map<std::string, NonterminalId> by_name_;
};

/// X x1..xm -a-> rhs, rhs finite over x1..xm.
struct Rule {
    NonterminalId head = 0;
    ActionId action = 0;
    TermGraph rhs;
};

/// First-order grammar (N, A, R). Duplicate (X, a) rules are representable so
/// that validate() can report them; rule_for() answers with the first one.
class Grammar {
public:
    NonterminalId add_nonterminal(std::string name, std::uint32_t arity);
    ActionId add_action(std::string name);
    void add_rule(Rule rule);

    const Signature& signature() const { return signature_; }
    std::size_t action_count() const { return actions_.size(); }
    const std::string& action_name(ActionId a) const { return actions_.at(a); }
    const std::vector<std::string>& actions() const { return actions_; }
    std::optional<ActionId> find_action(std::string_view name) const;

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule* rule_for(NonterminalId x, ActionId a) const;
    /// Actions with a rule for x, in declaration order.
    const std::vector<ActionId>& enabled_actions(NonterminalId x) const { return enabled_.at(x); }

private:
    void reindex();

    Signature signature_;
    std::vector<std::string> actions_;
    std::unordered_map<std::string, ActionId> action_index_;
    std::vector<Rule> rules_;
    std::vector<std::int32_t> table_;  // [x * |A| + a] -> rule index or -1
    std::vector<std::vector<ActionId>> enabled_;
};

struct Diagnostic {
    enum class Kind { nondeterministic, arity_mismatch, variable_out_of_scope, infinite_rhs, unknown_symbol };
    Kind kind;
    std::string message;
};

/// Empty iff the grammar is a valid deterministic first-order grammar.
std::vector<Diagnostic> validate(const Grammar& g);
/// Throws GrammarError listing the diagnostics, if any.
void require_valid(const Grammar& g);
/// Arity and symbol checks of a term against the signature.
std::vector<std::string> check_term(const TermGraph& t, const Signature& sig);

std::optional<TermGraph> step(const Grammar& g, const TermGraph& t, ActionId a);
std::optional<TermGraph> run(const Grammar& g, const TermGraph& t, const Word& w);
bool enables(const Grammar& g, const TermGraph& t, const Word& w);

/// All enabled words of length <= k (exponential in k; oracle use).
std::set<Word> traces_upto(const Grammar& g, const TermGraph& t, std::uint32_t k);

struct ExposureEntry {
    bool exposable = false;
    Word word;  // shortest, lexicographically least; empty when not exposable
};

struct ExposureTable {
    std::vector<std::vector<ExposureEntry>> entries;  // [X][i - 1]
    std::uint64_t m0 = 1;

    const ExposureEntry& at(NonterminalId x, VarIndex i) const { return entries.at(x).at(i - 1); }
    bool normal_form() const;
};

ExposureTable exposing_table(const Grammar& g);

std::uint32_t max_rhs_depth(const Grammar& g);
/// depthsize(F') <= depthsize(F) + bound_inc(|u|) whenever F -u-> F'.
std::uint64_t bound_inc(const Grammar& g, std::uint64_t len);

/// Result of removing unexposable successor slots.
struct NormalForm {
    Grammar grammar;
    /// Per original nonterminal, its exposable successor indices (1-based, increasing).
    std::vector<std::vector<VarIndex>> kept;

    TermGraph transf(const TermGraph& t) const;
};

NormalForm normalize(const Grammar& g);

struct ExposedEquation {
    Word word;
    VarIndex variable = 0;
    TermGraph other;         // H, with H != x_variable
    bool variable_on_left = true;
};

/// Shortest (then lexicographically least) u with |u| <= max_len exposing an
/// equation x_i = H for the pair (E, F).
std::optional<ExposedEquation> expose_equation(const Grammar& g, const TermGraph& e, const TermGraph& f,
                                               std::uint32_t max_len);

/// Cached LTS view over interned terms, for the search procedures.
class Lts {
public:
    Lts(const Grammar& g, TermPool& pool);

    const Grammar& grammar() const { return *grammar_; }
    TermPool& pool() { return *pool_; }

    std::optional<TermId> step(TermId t, ActionId a);
    const std::vector<ActionId>& enabled(TermId t) const;
    /// Equal iff the two terms are ~1-equivalent.
    std::uint32_t enabled_class(TermId t) const;
    bool sim1(TermId t, TermId u) const { return enabled_class(t) == enabled_class(u); }

private:
    const Grammar* grammar_;
    TermPool* pool_;
    std::vector<std::uint32_t> class_of_;  // per nonterminal
    std::uint32_t variable_class_ = 0;
    std::vector<ActionId> none_;
    std::unordered_map<std::uint64_t, std::int64_t> steps_;
};

}  // namespace fog
