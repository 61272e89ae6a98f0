#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "fog/deduction.hpp"

namespace fog {

CriticalExtension critical_instances(const Grammar& g, const Basis& basis) {
    CriticalExtension ext;
    ext.grammar = g;
    VarIndex n = 0;
    for (const auto& [e, f] : basis) n = std::max({n, e.max_variable(), f.max_variable()});
    for (VarIndex i = 1; i <= n; ++i) {
        std::string name = "L" + std::to_string(i);
        while (ext.grammar.signature().find(name)) name += "'";
        std::string act = "l" + std::to_string(i);
        while (ext.grammar.find_action(act)) act += "'";
        const auto x = ext.grammar.add_nonterminal(name, 0);
        const auto a = ext.grammar.add_action(act);
        ext.grammar.add_rule(Rule{x, a, TermGraph::constant(x)});
        ext.fresh.push_back(x);
        ext.fresh_actions.push_back(a);
    }
    for (const auto& p : basis) ext.instances.push_back(critical_instance(ext, p));
    return ext;
}

TermPair critical_instance(const CriticalExtension& ext, const TermPair& pair) {
    Substitution sigma;
    for (std::size_t i = 0; i < ext.fresh.size(); ++i)
        sigma.emplace(static_cast<VarIndex>(i + 1), TermGraph::constant(ext.fresh[i]));
    return {substitute(pair.first, sigma), substitute(pair.second, sigma)};
}

namespace {

struct Attempt {
    std::shared_ptr<JudgmentStore> store;
    SaturateStatus status;
};

Attempt prove(std::shared_ptr<const Grammar> g, const Basis& basis, const TermPair& pair, const SaturateOptions& o) {
    Attempt a;
    a.store = std::make_shared<JudgmentStore>(std::move(g), basis, pair.first, pair.second);
    SaturateOptions opts = o;
    opts.prune_success = true;
    a.status = saturate(*a.store, opts);
    label(*a.store);
    return a;
}

std::vector<std::pair<NonterminalId, ActionId>> critical_list(const CriticalExtension& ext) {
    std::vector<std::pair<NonterminalId, ActionId>> out;
    for (std::size_t i = 0; i < ext.fresh.size(); ++i) out.emplace_back(ext.fresh[i], ext.fresh_actions[i]);
    return out;
}

}  // namespace

BasisCheck verify_basis(const Grammar& g, const Basis& basis, const SaturateOptions& options) {
    const Basis b = with_identity(basis);
    const auto ext = critical_instances(g, b);
    auto gp = std::make_shared<const Grammar>(ext.grammar);
    BasisCheck out;
    out.proof.grammar = gp;
    out.proof.critical = critical_list(ext);
    out.proof.basis = b;
    bool all = true;
    for (std::size_t k = 0; k < b.size(); ++k) {
        auto attempt = prove(gp, b, ext.instances[k], options);
        out.status.word_budget_hit |= attempt.status.word_budget_hit;
        out.status.size_budget_hit |= attempt.status.size_budget_hit;
        out.status.judgment_budget_hit |= attempt.status.judgment_budget_hit;
        out.status.cancelled |= attempt.status.cancelled;
        if (attempt.store->success()) {
            out.proof.sections.push_back({"basis " + std::to_string(k + 1), attempt.store});
            continue;
        }
        all = false;
        if (auto w = offending_search(*gp, ext.instances[k].first, ext.instances[k].second,
                                      options.word_budget + 1)) {
            out.verdict = BasisVerdict::refuted;
            out.refuted_pair = k;
            out.witness = std::move(w);
            out.proof.sections.clear();
            return out;
        }
    }
    out.verdict = all ? BasisVerdict::verified : BasisVerdict::unknown;
    if (!all) out.proof.sections.clear();
    return out;
}

Proof refutation_proof(const Grammar& g, const TermGraph& t0, const TermGraph& u0, const OffendingWitness& w) {
    Proof proof;
    proof.grammar = std::make_shared<const Grammar>(g);
    proof.basis = with_identity({});
    auto store = std::make_shared<JudgmentStore>(proof.grammar, proof.basis, t0, u0);
    JudgmentId j = store->axiom();
    for (std::size_t i = 0; i + 1 < w.word.size(); ++i) j = store->basic(j, w.word[i]);
    store->reject(j);
    proof.sections.push_back({"main", store});
    return proof;
}

std::vector<TermGraph> enumerate_terms(const Signature& sig, std::size_t max_nodes, VarIndex max_var) {
    std::vector<Label> labels;
    for (NonterminalId x = 0; x < sig.size(); ++x) labels.push_back(Label::nonterminal(x));
    for (VarIndex i = 1; i <= max_var; ++i) labels.push_back(Label::variable(i));
    auto arity = [&](const Label& l) { return l.is_variable() ? 0u : sig.arity(l.index); };

    std::vector<TermGraph> out;
    std::unordered_set<TermGraph, TermGraphHash> seen;
    for (std::size_t n = 1; n <= max_nodes; ++n) {
        std::vector<std::size_t> lab(n, 0);
        while (true) {
            std::size_t slots = 0;
            for (std::size_t i = 0; i < n; ++i) slots += arity(labels[lab[i]]);
            std::vector<NodeId> kids(slots, 0);
            while (true) {
                std::vector<TermNode> nodes(n);
                std::size_t k = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    nodes[i].label = labels[lab[i]];
                    for (std::uint32_t c = 0; c < arity(labels[lab[i]]); ++c) nodes[i].children.push_back(kids[k++]);
                }
                TermGraph t = canonicalize(nodes, 0);
                if (t.size() == n && seen.insert(t).second) out.push_back(std::move(t));
                std::size_t i = 0;
                while (i < slots && ++kids[i] == n) kids[i++] = 0;
                if (i == slots) break;
            }
            std::size_t i = 0;
            while (i < n && ++lab[i] == labels.size()) lab[i++] = 0;
            if (i == n) break;
        }
    }
    return out;
}

namespace {

bool contiguous_variables(const TermPair& p) {
    std::set<VarIndex> vars;
    for (auto v : p.first.variables()) vars.insert(v);
    for (auto v : p.second.variables()) vars.insert(v);
    VarIndex expect = 1;
    for (auto v : vars)
        if (v != expect++) return false;
    return true;
}

bool admissible(const Grammar& g, const TermPair& p, std::size_t s) {
    if (p.first == p.second) return false;
    if (p.first.is_variable() && p.second.is_variable()) return false;
    if (!contiguous_variables(p)) return false;
    const auto ext = critical_instances(g, {p});
    return sim_k(ext.grammar, ext.instances[0].first, ext.instances[0].second, static_cast<std::uint32_t>(s));
}

void add_candidate(const Grammar& g, TermPair p, std::size_t s, std::size_t cap, Basis& out) {
    if (out.size() >= cap || std::find(out.begin(), out.end(), p) != out.end()) return;
    if (admissible(g, p, s)) out.push_back(std::move(p));
}

// Candidates in order of preference: pairs met while saturating the main
// pair with one shared subterm abstracted to x1, then pairs of small
// canonical terms. Every candidate's critical instance survives s steps.
Basis candidates(const Grammar& g, JudgmentStore* seen, std::size_t s, std::size_t cap) {
    Basis out;
    if (seen) {
        auto& pool = seen->pool();
        for (JudgmentId j = 0; j < seen->size() && out.size() < cap; ++j) {
            const Judgment jj = seen->at(j);
            if (jj.kind != Judgment::Kind::pair || jj.left == jj.right) continue;
            if (!seen->lts().sim1(jj.left, jj.right)) continue;
            const TermGraph l = pool.get(jj.left);
            const TermGraph r = pool.get(jj.right);
            const std::vector<TermId> subs = pool.node_subterms(jj.left);
            std::set<TermId> done;
            for (TermId sub : subs) {
                if (!done.insert(sub).second) continue;
                const TermGraph target = pool.get(sub);
                if (!find_subterm(r, target)) continue;
                TermPair p{abstract_subterm(l, target), abstract_subterm(r, target)};
                if (pressize(p.first) + pressize(p.second) > s + 3) continue;
                add_candidate(g, std::move(p), s, cap, out);
            }
        }
    }
    const auto terms = enumerate_terms(g.signature(), std::min<std::size_t>(3, s), 2);
    for (std::size_t i = 0; i < terms.size() && out.size() < cap; ++i)
        for (std::size_t j = i + 1; j < terms.size() && out.size() < cap; ++j)
            if (terms[i].size() + terms[j].size() <= s) add_candidate(g, {terms[i], terms[j]}, s, cap, out);
    return out;
}

// Indices of basis pairs used by Basis rule applications in the store.
std::set<std::uint32_t> basis_uses(const JudgmentStore& s) {
    std::set<std::uint32_t> out;
    for (JudgmentId j = 0; j < s.size(); ++j)
        if (s.at(j).rule == RuleKind::basis) out.insert(s.at(j).basis_pair);
    return out;
}

struct BasisAttempt {
    std::optional<Proof> proof;
    std::shared_ptr<JudgmentStore> main;
};

// Proves the main pair, then the critical instance of every basis pair the
// proofs depend on. With `shrink`, pairs whose instance cannot be proved are
// dropped and the attempt restarts. The basis of a returned proof is exactly
// the set of pairs in use.
BasisAttempt attempt_basis(const Grammar& g, Basis basis, const TermPair& main, const SaturateOptions& o,
                           bool shrink) {
    basis = with_identity(std::move(basis));
    BasisAttempt out;
    while (true) {
        const auto ext = critical_instances(g, basis);
        auto gp = std::make_shared<const Grammar>(ext.grammar);
        auto m = prove(gp, basis, main, o);
        out.main = m.store;
        if (!m.store->success()) return out;

        std::map<std::uint32_t, std::shared_ptr<JudgmentStore>> proved;
        std::set<std::uint32_t> failed;
        std::set<std::uint32_t> pending = basis_uses(*m.store);
        pending.insert(0);
        while (!pending.empty()) {
            const auto k = *pending.begin();
            pending.erase(pending.begin());
            if (proved.count(k) || failed.count(k)) continue;
            if (o.stop.stop_requested()) return out;
            auto a = prove(gp, basis, ext.instances[k], o);
            if (!a.store->success()) {
                failed.insert(k);
                continue;
            }
            for (auto u : basis_uses(*a.store)) pending.insert(u);
            proved.emplace(k, a.store);
        }

        if (failed.empty() && proved.size() == basis.size()) {
            Proof proof;
            proof.grammar = gp;
            proof.critical = critical_list(ext);
            proof.basis = basis;
            proof.sections.push_back({"main", m.store});
            for (auto& [k, store] : proved) proof.sections.push_back({"basis " + std::to_string(k + 1), store});
            out.proof = std::move(proof);
            return out;
        }
        if (!failed.empty() && !shrink) return out;
        // Either drop the failed pairs, or keep only those in use.
        Basis kept;
        for (std::uint32_t k = 0; k < basis.size(); ++k)
            if (failed.empty() ? proved.count(k) > 0 : failed.count(k) == 0) kept.push_back(basis[k]);
        if (kept.size() == basis.size()) return out;
        basis = std::move(kept);
    }
}

}  // namespace

DecideResult decide(const Grammar& g, const TermGraph& t0, const TermGraph& u0, const DecideOptions& options) {
    require_valid(g);
    DecideResult res;
    const Grammar* work = &g;
    TermPair main{t0, u0};
    std::optional<NormalForm> nf;
    std::optional<Basis> user = options.basis;
    if (!exposing_table(g).normal_form()) {
        nf = normalize(g);
        work = &nf->grammar;
        main = {nf->transf(t0), nf->transf(u0)};
        if (user)
            for (auto& [e, f] : *user) e = nf->transf(e), f = nf->transf(f);
        res.normalized = true;
    }

    std::shared_ptr<JudgmentStore> last_main;
    for (std::uint32_t r = 1; r <= options.rounds; ++r) {
        if (options.stop.stop_requested()) break;
        res.rounds_used = r;
        const std::uint32_t budget = options.initial_word_budget << std::min<std::uint32_t>(r - 1, 5);

        if (auto w = offending_search(g, t0, u0, budget, SearchLimits{4'000'000, options.stop})) {
            res.verdict = Verdict::inequivalent;
            res.proof = refutation_proof(g, t0, u0, *w);
            res.witness = std::move(w);
            return res;
        }

        SaturateOptions so;
        so.word_budget = budget;
        so.size_budget = options.size_budget + 8 * (r - 1);
        so.max_judgments = options.max_judgments;
        so.position_depth = options.position_depth;
        so.stop_on_fail = true;
        so.stop = options.stop;

        Basis candidate;
        bool shrink = false;
        if (r > 1) {
            if (user) {
                candidate = *user;
            } else {
                candidate = candidates(*work, last_main.get(), r + 1, options.max_candidates);
                shrink = true;
            }
        }
        auto attempt = attempt_basis(*work, candidate, main, so, shrink);
        if (attempt.proof) {
            res.verdict = Verdict::equivalent;
            res.basis = attempt.proof->basis;
            res.proof = std::move(attempt.proof);
            return res;
        }
        if (attempt.main) last_main = std::move(attempt.main);
    }
    return res;
}

}  // namespace fog
