#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "fog/deduction.hpp"

namespace fog {

namespace {

std::optional<std::uint32_t> basis_match(JudgmentStore& s, const Judgment& j) {
    const auto& basis = s.basis();
    for (std::uint32_t k = 0; k < basis.size(); ++k) {
        const auto& [e, f] = basis[k];
        if (e.is_variable() && e == f) {
            if (j.left == j.right) return k;
            continue;
        }
        const TermGraph pats[] = {e, f};
        const TermGraph terms[] = {s.pool().get(j.left), s.pool().get(j.right)};
        if (match(pats, terms)) return k;
    }
    return std::nullopt;
}

bool try_basis(JudgmentStore& s, WordNodeId n) {
    if (n == s.root() || s.success_at(n)) return s.success_at(n).has_value();
    for (JudgmentId j : s.pairs_at(n)) {
        if (auto k = basis_match(s, s.at(j))) {
            s.basis_rule(j, *k);
            return true;
        }
    }
    return false;
}

// Positions (down to max_depth) of nodes presenting `target` in canonical g.
std::vector<Position> positions_of(const TermGraph& g, const std::vector<TermId>& node_ids, TermId target,
                                   std::uint32_t max_depth) {
    std::vector<Position> out;
    std::vector<std::pair<NodeId, Position>> frontier{{g.root(), {}}};
    for (std::uint32_t d = 0; d <= max_depth && !frontier.empty(); ++d) {
        std::vector<std::pair<NodeId, Position>> next;
        for (auto& [n, pos] : frontier) {
            if (node_ids[n] == target) out.push_back(pos);
            const auto& kids = g.node(n).children;
            for (std::uint32_t i = 0; i < kids.size(); ++i) {
                Position p = pos;
                p.push_back(i + 1);
                next.emplace_back(kids[i], std::move(p));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

class Saturator {
public:
    Saturator(JudgmentStore& s, const SaturateOptions& o) : s_(s), o_(o) {}

    SaturateStatus run() {
        std::vector<WordNodeId> level{s_.root()};
        close({s_.axiom()});
        for (std::uint32_t depth = 0; !stopped(); ++depth) {
            for (WordNodeId n : level)
                for (JudgmentId j : s_.pairs_at(n)) premises_[s_.at(j).left].push_back(j);
            if (o_.stop_on_fail && find_reject(level)) break;

            std::vector<WordNodeId> next;
            std::unordered_set<WordNodeId> next_seen;
            std::vector<JudgmentId> fresh;
            for (WordNodeId n : level) {
                if (o_.prune_success && try_basis(s_, n)) continue;
                const std::vector<JudgmentId> pairs = s_.pairs_at(n);
                for (JudgmentId j : pairs) {
                    const Judgment cur = s_.at(j);
                    if (!s_.lts().sim1(cur.left, cur.right)) continue;
                    const auto& enabled = s_.lts().enabled(cur.left);
                    if (enabled.empty()) continue;
                    if (depth == o_.word_budget) {
                        status_.word_budget_hit = true;
                        break;
                    }
                    for (ActionId a : enabled) {
                        const JudgmentId id = s_.basic(j, a);
                        if (s_.last_was_duplicate()) continue;
                        fresh.push_back(id);
                        const WordNodeId w = s_.at(id).word;
                        if (next_seen.insert(w).second) next.push_back(w);
                    }
                }
            }
            if (depth == o_.word_budget || next.empty()) break;
            close(fresh);
            level = std::move(next);
        }
        return status_;
    }

private:
    bool stopped() {
        if (o_.stop.stop_requested()) status_.cancelled = true;
        if (s_.size() >= o_.max_judgments) status_.judgment_budget_hit = true;
        return status_.cancelled || status_.judgment_budget_hit;
    }

    bool find_reject(const std::vector<WordNodeId>& level) {
        for (WordNodeId n : level)
            for (JudgmentId j : s_.pairs_at(n)) {
                const auto& p = s_.at(j);
                if (!s_.lts().sim1(p.left, p.right)) {
                    s_.reject(j);
                    return true;
                }
            }
        return false;
    }

    void close(std::vector<JudgmentId> fresh) {
        std::deque<JudgmentId> work(fresh.begin(), fresh.end());
        while (!work.empty() && !stopped()) {
            const JudgmentId j = work.front();
            work.pop_front();
            const JudgmentId sym = s_.symmetry(j);
            if (!s_.last_was_duplicate()) work.push_back(sym);
            replace(j, work);
        }
    }

    void replace(JudgmentId j, std::deque<JudgmentId>& work) {
        const Judgment cur = s_.at(j);
        auto& pool = s_.pool();
        const TermGraph left = pool.get(cur.left);
        const std::size_t right_size = pool.get(cur.right).size();
        const std::vector<TermId> node_ids = pool.node_subterms(cur.left);
        std::set<TermId> done;
        for (TermId sub : node_ids) {
            if (!done.insert(sub).second) continue;
            auto it = premises_.find(sub);
            if (it == premises_.end()) continue;
            const TermGraph target = pool.get(sub);

            std::vector<TermGraph> contexts{abstract_subterm(left, target)};
            for (const auto& pos : positions_of(left, node_ids, sub, o_.position_depth)) {
                TermGraph c = context_at(left, pos);
                if (std::find(contexts.begin(), contexts.end(), c) == contexts.end()) contexts.push_back(std::move(c));
            }

            const std::vector<JudgmentId> sources = it->second;
            for (JudgmentId p : sources) {
                const TermId r2 = s_.at(p).right;
                if (r2 == sub) continue;
                const TermGraph rhs = pool.get(r2);
                std::vector<TermGraph> fs{rhs};
                if (find_subterm(rhs, target)) fs.push_back(abstract_subterm(rhs, target));
                for (const auto& e : contexts) {
                    for (const auto& f : fs) {
                        TermGraph result = substitute(e, Substitution{{1, limit_substitute(f, 1)}});
                        if (result.size() + right_size > o_.size_budget) {
                            status_.size_budget_hit = true;
                            continue;
                        }
                        if (s_.find_pair(cur.word, pool.intern(result), cur.right)) continue;
                        const JudgmentId id = s_.limit(j, p, e, f);
                        if (!s_.last_was_duplicate()) work.push_back(id);
                        if (stopped()) return;
                    }
                }
            }
        }
    }

    JudgmentStore& s_;
    const SaturateOptions& o_;
    SaturateStatus status_;
    std::unordered_map<TermId, std::vector<JudgmentId>> premises_;
};

}  // namespace

SaturateStatus saturate(JudgmentStore& store, const SaturateOptions& options) {
    return Saturator(store, options).run();
}

std::unique_ptr<JudgmentStore> saturate(const Grammar& g, const Basis& basis, const TermGraph& t0,
                                        const TermGraph& u0, const SaturateOptions& options, SaturateStatus* status) {
    auto store = std::make_unique<JudgmentStore>(std::make_shared<const Grammar>(g), with_identity(basis), t0, u0);
    auto st = saturate(*store, options);
    if (status) *status = st;
    return store;
}

void label(JudgmentStore& s) {
    if (!s.fail()) {
        for (JudgmentId j = 0; j < s.size(); ++j) {
            const auto& p = s.at(j);
            if (p.kind == Judgment::Kind::pair && !s.lts().sim1(p.left, p.right)) {
                s.reject(j);
                break;
            }
        }
    }
    for (WordNodeId n = 1; n < s.word_count(); ++n) try_basis(s, n);

    std::vector<WordNodeId> order(s.word_count());
    for (WordNodeId n = 0; n < order.size(); ++n) order[n] = n;
    std::stable_sort(order.begin(), order.end(),
                     [&](WordNodeId a, WordNodeId b) { return s.depth(a) > s.depth(b); });
    for (WordNodeId n : order) {
        if (s.success_at(n)) continue;
        const std::vector<JudgmentId> pairs = s.pairs_at(n);
        for (JudgmentId j : pairs) {
            const auto p = s.at(j);
            if (!s.lts().sim1(p.left, p.right)) continue;
            std::vector<JudgmentId> succ;
            bool ok = true;
            for (ActionId a : s.lts().enabled(p.left)) {
                auto c = s.find_child(n, a);
                auto sc = c ? s.success_at(*c) : std::nullopt;
                if (!sc) {
                    ok = false;
                    break;
                }
                succ.push_back(*sc);
            }
            if (ok) {
                s.progress(j, succ);
                break;
            }
        }
    }
}

}  // namespace fog
