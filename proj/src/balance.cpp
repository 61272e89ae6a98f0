#include "fog/deduction.hpp"

namespace fog {

namespace {

TermGraph generic_head(const Grammar& g, NonterminalId x) {
    std::vector<TermGraph> vars;
    for (VarIndex i = 1; i <= g.signature().arity(x); ++i) vars.push_back(TermGraph::variable(i));
    return TermGraph::apply(x, vars);
}

}  // namespace

BalanceResult balance_result(const Grammar& g, const ExposureTable& table, const TermGraph& t, const TermGraph& b,
                             const Word& v, Side side, bool check_equivalence) {
    if (!table.normal_form()) throw BalanceError("balancing needs a grammar in normal form");
    if (!t.is_ground() || !b.is_ground()) throw BalanceError("balancing needs ground terms");
    if (v.size() != table.m0) throw BalanceError("the segment word must have length M0");
    if (t.is_variable()) throw BalanceError("the balanced term has no root nonterminal");
    const auto m0 = static_cast<std::uint32_t>(table.m0);
    if (check_equivalence && !sim_k(g, t, b, m0)) throw BalanceError("the segment terms are not ~M0-equivalent");
    if (!run(g, t, v)) throw BalanceError("the balanced term does not enable the segment word");

    const NonterminalId x = t.root_label().index;
    const std::uint32_t m = g.signature().arity(x);
    BalanceResult out;

    // X x1..xm must not expose a variable before the last step of v.
    TermGraph head = generic_head(g, x);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (head.is_variable()) throw BalanceError("the balanced term sinks by a proper prefix of the segment word");
        auto next = step(g, head, v[k]);
        if (!next) throw BalanceError("the root nonterminal does not enable the segment word");
        head = std::move(*next);
    }
    out.g_head = std::move(head);

    PrefixForm p = d_prefix(b, m0);
    out.tails = std::move(p.tails);
    auto f = run(g, p.head, v);
    if (!f) throw BalanceError("the pivot does not enable the segment word");
    out.f_head = std::move(*f);

    std::vector<TermGraph> vs;
    for (VarIndex i = 1; i <= m; ++i) {
        auto fi = run(g, p.head, table.at(x, i).word);
        if (!fi) throw BalanceError("the pivot does not enable w(X," + std::to_string(i) + ")");
        vs.push_back(instantiate(*fi, out.tails));
        out.f_i.push_back(std::move(*fi));
    }
    out.left = instantiate(out.g_head, vs);
    out.right = instantiate(out.f_head, out.tails);
    if (side == Side::right) std::swap(out.left, out.right);
    return out;
}

JudgmentId derive_balance(JudgmentStore& store, const ExposureTable& table, JudgmentId premise, const Word& v,
                          Side side) {
    const Grammar& g = store.grammar();
    const Judgment p = store.at(premise);
    if (p.kind != Judgment::Kind::pair) throw BalanceError("the premise must be a pair judgment");
    JudgmentId j = side == Side::left ? premise : store.symmetry(premise);
    const TermGraph t = store.pool().get(store.at(j).left);
    const TermGraph b = store.pool().get(store.at(j).right);
    const BalanceResult r = balance_result(g, table, t, b, v, Side::left, true);

    JudgmentId cur = j;
    for (ActionId a : v) cur = store.basic(cur, a);

    const NonterminalId x = t.root_label().index;
    const std::uint32_t m = g.signature().arity(x);
    std::vector<TermGraph> originals;  // T'_1..T'_m
    std::vector<TermGraph> vs;
    for (VarIndex i = 1; i <= m; ++i) {
        originals.push_back(subterm_at(t, {i}));
        vs.push_back(instantiate(r.f_i[i - 1], r.tails));
    }

    for (VarIndex i = 1; i <= m; ++i) {
        if (!r.g_head.contains_variable(i)) continue;
        JudgmentId source = j;
        for (ActionId a : table.at(x, i).word) source = store.basic(source, a);
        // E = G[V_k / x_k for k < i, x1 / x_i, T'_k / x_k for k > i]
        Substitution sigma;
        for (VarIndex k = 1; k <= m; ++k)
            sigma[k] = k < i ? vs[k - 1] : k == i ? TermGraph::variable(1) : originals[k - 1];
        const TermGraph e = substitute(r.g_head, sigma);
        cur = store.limit(cur, source, e, vs[i - 1]);
    }
    if (side == Side::right) cur = store.symmetry(cur);
    return cur;
}

}  // namespace fog
