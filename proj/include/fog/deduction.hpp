#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fog/equiv.hpp"
#include "fog/grammar.hpp"
#include "fog/text.hpp"

namespace fog {

using JudgmentId = std::uint32_t;
using WordNodeId = std::uint32_t;

/// A rule application whose side conditions do not hold.
class DeductionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RuleKind { axiom, basic, symmetry, limit, basis, progress, reject };

const char* rule_name(RuleKind r);

struct Judgment {
    enum class Kind { pair, success, fail };

    Kind kind = Kind::pair;
    WordNodeId word = 0;
    TermId left = 0, right = 0;  // pair judgments only
    RuleKind rule = RuleKind::axiom;
    std::vector<JudgmentId> premises;
    TermId context = 0;      // limit: E(x1)
    TermId replacement = 0;  // limit: F(x1)
    std::uint32_t basis_pair = 0;
};

/// Finite list of pairs over x1..xn; (x1, x1) is always assumed.
using Basis = std::vector<TermPair>;

/// Prepends (x1, x1) unless present.
Basis with_identity(Basis b);

/// The derived relation u |= (T, U) / success / fail for one initial pair,
/// with provenance. Rule applications are checked; a violated side
/// condition throws DeductionError and leaves the store unchanged.
class JudgmentStore {
public:
    JudgmentStore(std::shared_ptr<const Grammar> g, Basis basis, const TermGraph& t0, const TermGraph& u0);
    JudgmentStore(const JudgmentStore&) = delete;
    JudgmentStore& operator=(const JudgmentStore&) = delete;

    const Grammar& grammar() const { return *grammar_; }
    std::shared_ptr<const Grammar> grammar_ptr() const { return grammar_; }
    const Basis& basis() const { return basis_; }
    TermPool& pool() { return *pool_; }
    const TermPool& pool() const { return *pool_; }
    Lts& lts() { return *lts_; }
    TermId t0() const { return t0_; }
    TermId u0() const { return u0_; }

    WordNodeId root() const { return 0; }
    WordNodeId child(WordNodeId n, ActionId a);
    std::optional<WordNodeId> find_child(WordNodeId n, ActionId a) const;
    WordNodeId node_of(const Word& w);
    Word word(WordNodeId n) const;
    std::uint32_t depth(WordNodeId n) const { return words_[n].depth; }
    std::size_t word_count() const { return words_.size(); }

    const std::vector<JudgmentId>& pairs_at(WordNodeId n) const { return words_[n].pairs; }
    std::optional<JudgmentId> find_pair(WordNodeId n, TermId l, TermId r) const;
    std::optional<JudgmentId> success_at(WordNodeId n) const { return words_[n].success; }
    std::optional<JudgmentId> fail() const { return fail_; }
    bool success() const { return words_[0].success.has_value(); }

    const Judgment& at(JudgmentId j) const { return judgments_.at(j); }
    std::size_t size() const { return judgments_.size(); }

    JudgmentId axiom();
    JudgmentId basic(JudgmentId premise, ActionId a);
    JudgmentId symmetry(JudgmentId premise);
    /// From u |= (E(T), U) and v |= (T, F(T)), |v| < |u|, F != x1: u |= (E(F limit x1), U).
    JudgmentId limit(JudgmentId target, JudgmentId source, const TermGraph& context, const TermGraph& replacement);
    JudgmentId basis_rule(JudgmentId premise, std::uint32_t basis_index);
    JudgmentId progress(JudgmentId premise, const std::vector<JudgmentId>& successes);
    JudgmentId reject(JudgmentId premise);

    /// True when the last rule call only found an existing judgment.
    bool last_was_duplicate() const { return last_duplicate_; }

private:
    struct WordNode {
        WordNodeId parent = 0;
        ActionId action = 0;
        std::uint32_t depth = 0;
        std::vector<std::pair<ActionId, WordNodeId>> children;
        std::vector<JudgmentId> pairs;
        std::unordered_map<std::uint64_t, JudgmentId> index;
        std::optional<JudgmentId> success;
    };

    const Judgment& pair_judgment(JudgmentId j, const char* rule) const;
    JudgmentId add_pair(Judgment j);

    std::shared_ptr<const Grammar> grammar_;
    Basis basis_;
    std::unique_ptr<TermPool> pool_;
    std::unique_ptr<Lts> lts_;
    TermId t0_ = 0, u0_ = 0;
    std::vector<WordNode> words_;
    std::vector<Judgment> judgments_;
    std::optional<JudgmentId> fail_;
    bool last_duplicate_ = false;
};

struct SaturateOptions {
    std::uint32_t word_budget = 6;
    /// Replacements are kept only if pressize(left) + pressize(right) stays within this.
    std::size_t size_budget = 24;
    std::size_t max_judgments = 100'000;
    /// Single-position replacement contexts are tried down to this depth
    /// (in addition to replacing every occurrence at once).
    std::uint32_t position_depth = 2;
    /// Do not expand words already labelled success by the Basis rule.
    bool prune_success = false;
    bool stop_on_fail = false;
    std::stop_token stop;
};

struct SaturateStatus {
    bool word_budget_hit = false;
    bool size_budget_hit = false;
    bool judgment_budget_hit = false;
    bool cancelled = false;

    bool exhausted() const { return word_budget_hit || size_budget_hit || judgment_budget_hit || cancelled; }
};

/// Forward closure by word length under Axiom, Basic transition, Symmetry and
/// Limit subterm replacement, within the budgets.
SaturateStatus saturate(JudgmentStore& store, const SaturateOptions& options);
std::unique_ptr<JudgmentStore> saturate(const Grammar& g, const Basis& basis, const TermGraph& t0,
                                        const TermGraph& u0, const SaturateOptions& options,
                                        SaturateStatus* status = nullptr);

/// Applies Basis, Bottom-up progression and Rejection to a fixpoint.
void label(JudgmentStore& store);

struct CriticalExtension {
    Grammar grammar;
    std::vector<NonterminalId> fresh;    // L1..Ln
    std::vector<ActionId> fresh_actions;  // l1..ln
    std::vector<TermPair> instances;     // one per basis pair
};

CriticalExtension critical_instances(const Grammar& g, const Basis& basis);
/// (E sigma, F sigma) with sigma = [L1/x1, ..., Ln/xn].
TermPair critical_instance(const CriticalExtension& ext, const TermPair& pair);

/// Everything needed to re-check a verdict: the grammar with the critical
/// extension, the basis, and one section per proved pair (main first).
struct Proof {
    struct Section {
        std::string name;  // "main" or "basis <k>"
        std::shared_ptr<JudgmentStore> store;
    };

    std::shared_ptr<const Grammar> grammar;
    std::vector<std::pair<NonterminalId, ActionId>> critical;
    Basis basis;
    std::vector<Section> sections;
};

enum class BasisVerdict { verified, refuted, unknown };

struct BasisCheck {
    BasisVerdict verdict = BasisVerdict::unknown;
    std::optional<std::size_t> refuted_pair;
    std::optional<OffendingWitness> witness;  // on the critical instance
    Proof proof;                              // basis sections, when verified
    SaturateStatus status;
};

BasisCheck verify_basis(const Grammar& g, const Basis& basis, const SaturateOptions& options);

enum class Verdict { equivalent, inequivalent, unknown };

struct DecideOptions {
    std::uint32_t rounds = 4;
    std::uint32_t initial_word_budget = 5;
    std::size_t size_budget = 24;
    std::size_t max_judgments = 100'000;
    std::uint32_t position_depth = 2;
    /// User basis, tried from round 2 on; otherwise bases are enumerated.
    std::optional<Basis> basis;
    std::size_t max_candidates = 48;
    std::stop_token stop;
};

struct DecideResult {
    Verdict verdict = Verdict::unknown;
    std::optional<OffendingWitness> witness;
    std::optional<Proof> proof;
    Basis basis;
    std::uint32_t rounds_used = 0;
    bool normalized = false;
};

/// Dovetails the offending-word search with basis-driven proof search,
/// one round each, with doubling word budgets.
DecideResult decide(const Grammar& g, const TermGraph& t0, const TermGraph& u0, const DecideOptions& options);

/// Derivation of eps |= fail along the witness.
Proof refutation_proof(const Grammar& g, const TermGraph& t0, const TermGraph& u0, const OffendingWitness& w);

/// Canonical terms with at most max_nodes nodes over the signature and x1..max_var.
std::vector<TermGraph> enumerate_terms(const Signature& sig, std::size_t max_nodes, VarIndex max_var);

// ------------------------------------------------------------ proof logs

/// Line-per-judgment log; only judgments needed for each section's verdict are written.
std::string write_proof(const Proof& proof);

struct ReplayReport {
    /// basis: no main section; every basis pair holds.
    enum class Claim { none, equivalent, inequivalent, basis };

    bool valid = false;
    std::string error;
    std::size_t line = 0;
    Claim claim = Claim::none;
    std::size_t judgments = 0;
    std::size_t sections = 0;
};

ReplayReport replay_proof(std::string_view text);

// ------------------------------------------------------------- balancing

class BalanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BalanceResult {
    TermGraph left, right;        // the bal-result (V, W), or (W, V) for side right
    TermGraph g_head;             // X x1..xm -v-> G
    TermGraph f_head;             // P -v-> F, P the M0-prefix of the pivot
    std::vector<TermGraph> f_i;   // P -w(X,i)-> F_i
    std::vector<TermGraph> tails; // W1..Wn
};

/// For side left the segment is (t, b, v) with pivot b; for side right it is
/// (b, t, v) with t still the non-sinking term.
BalanceResult balance_result(const Grammar& g, const ExposureTable& table, const TermGraph& t, const TermGraph& b,
                             const Word& v, Side side, bool check_equivalence = false);

/// Builds uv |= (V, W) from premise u |= (T, B) (or u |= (B, T) for side
/// right) by Basic transitions and Subterm replacements.
JudgmentId derive_balance(JudgmentStore& store, const ExposureTable& table, JudgmentId premise, const Word& v,
                          Side side);

}  // namespace fog
