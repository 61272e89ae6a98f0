#include "fog/deduction.hpp"

#include <algorithm>

namespace fog {

const char* rule_name(RuleKind r) {
    switch (r) {
        case RuleKind::axiom: return "axiom";
        case RuleKind::basic: return "basic";
        case RuleKind::symmetry: return "symmetry";
        case RuleKind::limit: return "limit";
        case RuleKind::basis: return "basis";
        case RuleKind::progress: return "progress";
        case RuleKind::reject: return "reject";
    }
    return "?";
}

Basis with_identity(Basis b) {
    const TermPair id{TermGraph::variable(1), TermGraph::variable(1)};
    if (std::find(b.begin(), b.end(), id) == b.end()) b.insert(b.begin(), id);
    return b;
}

namespace {

std::uint64_t pair_key(TermId l, TermId r) { return (static_cast<std::uint64_t>(l) << 32) | r; }

bool only_x1(const TermGraph& t) {
    auto vars = t.variables();
    return vars.empty() || (vars.size() == 1 && vars[0] == 1);
}

}  // namespace

JudgmentStore::JudgmentStore(std::shared_ptr<const Grammar> g, Basis basis, const TermGraph& t0, const TermGraph& u0)
    : grammar_(std::move(g)),
      basis_(std::move(basis)),
      pool_(std::make_unique<TermPool>()),
      lts_(std::make_unique<Lts>(*grammar_, *pool_)) {
    if (!t0.is_ground() || !u0.is_ground()) throw DeductionError("the initial pair must be ground");
    t0_ = pool_->intern(t0);
    u0_ = pool_->intern(u0);
    words_.emplace_back();
}

WordNodeId JudgmentStore::child(WordNodeId n, ActionId a) {
    if (auto c = find_child(n, a)) return *c;
    if (a >= grammar_->action_count()) throw DeductionError("unknown action");
    const auto id = static_cast<WordNodeId>(words_.size());
    WordNode node;
    node.parent = n;
    node.action = a;
    node.depth = words_[n].depth + 1;
    words_.push_back(std::move(node));
    words_[n].children.emplace_back(a, id);
    return id;
}

std::optional<WordNodeId> JudgmentStore::find_child(WordNodeId n, ActionId a) const {
    for (const auto& [act, id] : words_[n].children)
        if (act == a) return id;
    return std::nullopt;
}

WordNodeId JudgmentStore::node_of(const Word& w) {
    WordNodeId n = root();
    for (ActionId a : w) n = child(n, a);
    return n;
}

Word JudgmentStore::word(WordNodeId n) const {
    Word w;
    for (; n != 0; n = words_[n].parent) w.push_back(words_[n].action);
    std::reverse(w.begin(), w.end());
    return w;
}

std::optional<JudgmentId> JudgmentStore::find_pair(WordNodeId n, TermId l, TermId r) const {
    const auto& idx = words_[n].index;
    auto it = idx.find(pair_key(l, r));
    if (it == idx.end()) return std::nullopt;
    return it->second;
}

const Judgment& JudgmentStore::pair_judgment(JudgmentId j, const char* rule) const {
    if (j >= judgments_.size()) throw DeductionError(std::string(rule) + ": premise does not exist");
    const auto& p = judgments_[j];
    if (p.kind != Judgment::Kind::pair) throw DeductionError(std::string(rule) + ": premise is not a pair judgment");
    return p;
}

JudgmentId JudgmentStore::add_pair(Judgment j) {
    auto& node = words_[j.word];
    auto [it, inserted] = node.index.emplace(pair_key(j.left, j.right), static_cast<JudgmentId>(judgments_.size()));
    last_duplicate_ = !inserted;
    if (!inserted) return it->second;
    node.pairs.push_back(it->second);
    judgments_.push_back(std::move(j));
    return it->second;
}

JudgmentId JudgmentStore::axiom() {
    Judgment j;
    j.word = root();
    j.left = t0_;
    j.right = u0_;
    j.rule = RuleKind::axiom;
    return add_pair(std::move(j));
}

JudgmentId JudgmentStore::basic(JudgmentId premise, ActionId a) {
    const Judgment p = pair_judgment(premise, "basic");
    if (!lts_->sim1(p.left, p.right)) throw DeductionError("basic: the premise pair is not ~1-equivalent");
    auto l = lts_->step(p.left, a);
    auto r = lts_->step(p.right, a);
    if (!l || !r) throw DeductionError("basic: action is not enabled by the premise pair");
    Judgment j;
    j.word = child(p.word, a);
    j.left = *l;
    j.right = *r;
    j.rule = RuleKind::basic;
    j.premises = {premise};
    return add_pair(std::move(j));
}

JudgmentId JudgmentStore::symmetry(JudgmentId premise) {
    const Judgment p = pair_judgment(premise, "symmetry");
    Judgment j;
    j.word = p.word;
    j.left = p.right;
    j.right = p.left;
    j.rule = RuleKind::symmetry;
    j.premises = {premise};
    return add_pair(std::move(j));
}

JudgmentId JudgmentStore::limit(JudgmentId target, JudgmentId source, const TermGraph& context,
                                const TermGraph& replacement) {
    const Judgment t = pair_judgment(target, "limit");
    const Judgment s = pair_judgment(source, "limit");
    if (depth(s.word) >= depth(t.word)) throw DeductionError("limit: the source word must be strictly shorter");
    if (!only_x1(context) || !only_x1(replacement))
        throw DeductionError("limit: E and F may only contain the variable x1");
    if (replacement.is_variable()) throw DeductionError("limit: F must differ from x1");
    const Substitution by_t{{1, pool_->get(s.left)}};
    if (substitute(context, by_t) != pool_->get(t.left)) throw DeductionError("limit: E(T) differs from the target");
    if (substitute(replacement, by_t) != pool_->get(s.right))
        throw DeductionError("limit: F(T) differs from the source's right side");
    const TermGraph result = substitute(context, Substitution{{1, limit_substitute(replacement, 1)}});
    Judgment j;
    j.word = t.word;
    j.left = pool_->intern(result);
    j.right = t.right;
    j.rule = RuleKind::limit;
    j.premises = {target, source};
    j.context = pool_->intern(context);
    j.replacement = pool_->intern(replacement);
    return add_pair(std::move(j));
}

JudgmentId JudgmentStore::basis_rule(JudgmentId premise, std::uint32_t basis_index) {
    const Judgment p = pair_judgment(premise, "basis");
    if (p.word == root()) throw DeductionError("basis: not applicable to the empty word");
    if (basis_index >= basis_.size()) throw DeductionError("basis: no such basis pair");
    const auto& [e, f] = basis_[basis_index];
    const TermGraph pats[] = {e, f};
    const TermGraph terms[] = {pool_->get(p.left), pool_->get(p.right)};
    if (!match(pats, terms)) throw DeductionError("basis: the pair is not an instance of the basis pair");
    auto& node = words_[p.word];
    last_duplicate_ = node.success.has_value();
    if (node.success) return *node.success;
    Judgment j;
    j.kind = Judgment::Kind::success;
    j.word = p.word;
    j.rule = RuleKind::basis;
    j.premises = {premise};
    j.basis_pair = basis_index;
    node.success = static_cast<JudgmentId>(judgments_.size());
    judgments_.push_back(std::move(j));
    return *node.success;
}

JudgmentId JudgmentStore::progress(JudgmentId premise, const std::vector<JudgmentId>& successes) {
    const Judgment p = pair_judgment(premise, "progress");
    if (!lts_->sim1(p.left, p.right)) throw DeductionError("progress: the premise pair is not ~1-equivalent");
    const auto& enabled = lts_->enabled(p.left);
    if (successes.size() != enabled.size())
        throw DeductionError("progress: need one success premise per enabled action");
    for (std::size_t i = 0; i < enabled.size(); ++i) {
        const JudgmentId s = successes[i];
        if (s >= judgments_.size() || judgments_[s].kind != Judgment::Kind::success)
            throw DeductionError("progress: premise is not a success judgment");
        auto c = find_child(p.word, enabled[i]);
        if (!c || judgments_[s].word != *c)
            throw DeductionError("progress: success premises must be for ua, a enabled, in action order");
    }
    auto& node = words_[p.word];
    last_duplicate_ = node.success.has_value();
    if (node.success) return *node.success;
    Judgment j;
    j.kind = Judgment::Kind::success;
    j.word = p.word;
    j.rule = RuleKind::progress;
    j.premises = {premise};
    j.premises.insert(j.premises.end(), successes.begin(), successes.end());
    node.success = static_cast<JudgmentId>(judgments_.size());
    judgments_.push_back(std::move(j));
    return *node.success;
}

JudgmentId JudgmentStore::reject(JudgmentId premise) {
    const Judgment p = pair_judgment(premise, "reject");
    if (lts_->sim1(p.left, p.right)) throw DeductionError("reject: the premise pair is ~1-equivalent");
    last_duplicate_ = fail_.has_value();
    if (fail_) return *fail_;
    Judgment j;
    j.kind = Judgment::Kind::fail;
    j.word = root();
    j.rule = RuleKind::reject;
    j.premises = {premise};
    fail_ = static_cast<JudgmentId>(judgments_.size());
    judgments_.push_back(std::move(j));
    return *fail_;
}

}  // namespace fog
