#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fog/grammar.hpp"

namespace fog {

using StateId = std::uint32_t;
using StackSymbol = std::uint32_t;

/// pA -a-> q alpha, or pA -eps-> q alpha when `action` is empty.
struct DpdaRule {
    StateId from = 0;
    StackSymbol top = 0;
    std::optional<ActionId> action;
    StateId to = 0;
    std::vector<StackSymbol> push;  // push[0] becomes the new top
};

/// Configuration q alpha; stack[0] is the top.
struct Config {
    StateId state = 0;
    std::vector<StackSymbol> stack;

    bool operator==(const Config&) const = default;
};

class DpdaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a configuration starts an infinite sequence of silent steps.
class EpsDivergence : public DpdaError {
public:
    using DpdaError::DpdaError;
};

class Dpda {
public:
    StateId add_state(std::string name);
    StackSymbol add_stack_symbol(std::string name);
    ActionId add_action(std::string name);
    void add_rule(DpdaRule rule);
    void set_accepting(StateId p, bool accepting = true);

    std::size_t state_count() const { return states_.size(); }
    std::size_t stack_count() const { return stack_.size(); }
    std::size_t action_count() const { return actions_.size(); }
    const std::string& state_name(StateId p) const { return states_.at(p); }
    const std::string& stack_name(StackSymbol a) const { return stack_.at(a); }
    const std::string& action_name(ActionId a) const { return actions_.at(a); }
    const std::vector<std::string>& actions() const { return actions_; }
    std::optional<StateId> find_state(std::string_view name) const;
    std::optional<StackSymbol> find_stack_symbol(std::string_view name) const;
    std::optional<ActionId> find_action(std::string_view name) const;
    bool accepting(StateId p) const { return accepting_.at(p); }

    const std::vector<DpdaRule>& rules() const { return rules_; }
    const DpdaRule* rule(StateId p, StackSymbol a, ActionId action) const;
    const DpdaRule* eps_rule(StateId p, StackSymbol a) const;
    /// No silent rule for (p, A).
    bool stable(StateId p, StackSymbol a) const { return eps_rule(p, a) == nullptr; }

private:
    std::vector<std::string> states_, stack_, actions_;
    std::vector<bool> accepting_;
    std::vector<DpdaRule> rules_;
};

/// Problems with determinism and the stable/unstable discipline.
std::vector<std::string> validate(const Dpda& m);
void require_valid(const Dpda& m);
bool is_eps_popping(const Dpda& m);

/// Every silent rule becomes popping; pairs whose silent run never ends lose their rules.
Dpda to_eps_popping(const Dpda& m);
/// Adds a dead state absorbing every missing visible move (only when some move is missing).
Dpda complete(const Dpda& m);

struct CompiledDpda {
    Dpda dpda;
    Grammar grammar;
    std::vector<std::int64_t> nonterminal;  // [p * |stack| + A] -> id, -1 for unstable pairs
    NonterminalId bottom = 0;

    std::optional<NonterminalId> nonterminal_of(StateId p, StackSymbol a) const;
};

/// Grammar with one nonterminal of arity |Q| per stable pair plus a nullary bottom.
CompiledDpda compile(const Dpda& m);
TermGraph translate_config(const CompiledDpda& c, const Config& config);

/// Words of length <= k enabled by the configuration; silent steps are taken eagerly.
std::set<Word> dpda_enabled_upto(const Dpda& m, const Config& c, std::uint32_t k);
/// Words of length <= k after which the stack can be emptied.
std::set<Word> dpda_accepted_upto(const Dpda& m, const Config& c, std::uint32_t k);
/// Eager silent closure; throws EpsDivergence.
Config eps_closure(const Dpda& m, Config c);

/// Final-state to empty-stack helper: adds the endmarker action and a
/// popping state, with pA -$-> f A for every accepting p and stable pA.
Dpda add_endmarker(const Dpda& m, const std::string& marker = "$");

Dpda parse_dpda(std::string_view text);
Dpda read_dpda(const std::string& path);
std::string format_dpda(const Dpda& m);
/// `p:ABA`, `p:A.B.A`, `p:` or `p:eps`.
Config parse_config(std::string_view text, const Dpda& m);
std::string format_config(const Config& c, const Dpda& m);

}  // namespace fog
