#include "fog/equiv.hpp"

#include <algorithm>
#include <unordered_set>

namespace fog {

std::optional<OffendingWitness> offending_search(Lts& lts, TermId t, TermId u, std::uint32_t budget,
                                                 const SearchLimits& limits) {
    struct Node {
        TermId left, right;
        std::uint32_t parent;
        ActionId action;
    };
    std::vector<Node> nodes{{t, u, 0, 0}};
    std::unordered_set<std::uint64_t> seen{(static_cast<std::uint64_t>(t) << 32) | u};
    auto word_of = [&](std::uint32_t n, ActionId last) {
        Word w{last};
        for (; n != 0; n = nodes[n].parent) w.push_back(nodes[n].action);
        std::reverse(w.begin(), w.end());
        return w;
    };

    std::size_t level_begin = 0;
    for (std::uint32_t depth = 0; depth < budget && level_begin < nodes.size(); ++depth) {
        const std::size_t level_end = nodes.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            if (limits.stop.stop_requested()) throw SearchCancelled();
            const Node cur = nodes[i];
            const auto& el = lts.enabled(cur.left);
            const auto& er = lts.enabled(cur.right);
            // Both lists are sorted by action order; the first mismatch is the least action.
            std::size_t a = 0, b = 0;
            while (a < el.size() || b < er.size()) {
                if (b == er.size() || (a < el.size() && el[a] < er[b]))
                    return OffendingWitness{word_of(static_cast<std::uint32_t>(i), el[a]), Side::left};
                if (a == el.size() || er[b] < el[a])
                    return OffendingWitness{word_of(static_cast<std::uint32_t>(i), er[b]), Side::right};
                ++a, ++b;
            }
            if (depth + 1 == budget) continue;
            for (ActionId x : el) {
                const TermId l2 = *lts.step(cur.left, x);
                const TermId r2 = *lts.step(cur.right, x);
                if (l2 == r2) continue;
                if (!seen.insert((static_cast<std::uint64_t>(l2) << 32) | r2).second) continue;
                nodes.push_back({l2, r2, static_cast<std::uint32_t>(i), x});
                if (nodes.size() > limits.max_pairs)
                    throw SearchOverflow("offending-word search exceeded " + std::to_string(limits.max_pairs) +
                                         " pairs");
            }
        }
        level_begin = level_end;
    }
    return std::nullopt;
}

std::optional<OffendingWitness> offending_search(const Grammar& g, const TermGraph& t, const TermGraph& u,
                                                 std::uint32_t budget, const SearchLimits& limits) {
    TermPool pool;
    Lts lts(g, pool);
    const TermId a = pool.intern(t);
    const TermId b = pool.intern(u);
    return offending_search(lts, a, b, budget, limits);
}

bool sim_k(Lts& lts, TermId t, TermId u, std::uint32_t k) { return !offending_search(lts, t, u, k).has_value(); }

bool sim_k(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t k) {
    return !offending_search(g, t, u, k).has_value();
}

EqLevel eq_level(Lts& lts, TermId t, TermId u, std::uint32_t max_k) {
    EqLevel out;
    out.budget = max_k;
    if (auto w = offending_search(lts, t, u, max_k + 1)) {
        out.level = static_cast<std::uint32_t>(w->word.size() - 1);
        out.witness = std::move(w);
    }
    return out;
}

EqLevel eq_level(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t max_k) {
    TermPool pool;
    Lts lts(g, pool);
    const TermId a = pool.intern(t);
    const TermId b = pool.intern(u);
    return eq_level(lts, a, b, max_k);
}

}  // namespace fog
