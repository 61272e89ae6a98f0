#include "support/oracle.hpp"

#include <algorithm>
#include <functional>

namespace fogtest {

using namespace fog;

std::string unfold(const TermGraph& t, std::uint32_t depth) {
    std::function<std::string(NodeId, std::uint32_t)> go = [&](NodeId n, std::uint32_t d) -> std::string {
        if (d == 0) return "?";
        const auto& node = t.node(n);
        std::string out = (node.label.is_variable() ? "x" : "N") + std::to_string(node.label.index);
        if (!node.children.empty()) {
            out += '(';
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                if (i) out += ',';
                out += go(node.children[i], d - 1);
            }
            out += ')';
        }
        return out;
    };
    return go(t.root(), depth);
}

bool unfold_equal(const TermGraph& t, const TermGraph& u) {
    const auto d = static_cast<std::uint32_t>(t.size() * u.size() + 1);
    return unfold(t, d) == unfold(u, d);
}

std::vector<Word> all_words(std::size_t actions, std::uint32_t k) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::uint32_t len = 1; len <= k; ++len) {
        const std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (ActionId a = 0; a < actions; ++a) {
                Word w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

std::optional<Word> brute_offending(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t k) {
    const auto tt = traces_upto(g, t, k);
    const auto tu = traces_upto(g, u, k);
    for (const auto& w : all_words(g.action_count(), k))
        if (tt.count(w) != tu.count(w)) return w;
    return std::nullopt;
}

namespace {

constexpr int kSilentLimit = 4000;

// Eager silent steps; nullopt when the run does not end within the limit.
std::optional<Config> settle(const Dpda& m, Config c) {
    for (int i = 0; i < kSilentLimit; ++i) {
        if (c.stack.empty()) return c;
        const DpdaRule* r = m.eps_rule(c.state, c.stack.front());
        if (!r) return c;
        c.state = r->to;
        c.stack.erase(c.stack.begin());
        c.stack.insert(c.stack.begin(), r->push.begin(), r->push.end());
    }
    return std::nullopt;
}

template <class Visit>
void explore(const Dpda& m, const Config& c, std::uint32_t k, Visit visit) {
    std::function<void(const Config&, Word&)> go = [&](const Config& start, Word& w) {
        const auto s = settle(m, start);
        visit(w, s);
        if (!s || s->stack.empty() || w.size() == k) return;
        for (ActionId a = 0; a < m.action_count(); ++a) {
            const DpdaRule* r = m.rule(s->state, s->stack.front(), a);
            if (!r) continue;
            Config next{r->to, {}};
            next.stack = r->push;
            next.stack.insert(next.stack.end(), s->stack.begin() + 1, s->stack.end());
            w.push_back(a);
            go(next, w);
            w.pop_back();
        }
    };
    Word w;
    go(c, w);
}

}  // namespace

std::set<Word> dpda_traces(const Dpda& m, const Config& c, std::uint32_t k) {
    std::set<Word> out;
    explore(m, c, k, [&](const Word& w, const std::optional<Config>&) { out.insert(w); });
    return out;
}

std::set<Word> dpda_language(const Dpda& m, const Config& c, std::uint32_t k) {
    std::set<Word> out;
    explore(m, c, k, [&](const Word& w, const std::optional<Config>& s) {
        if (s && s->stack.empty()) out.insert(w);
    });
    return out;
}

bool dpda_diverges(const Dpda& m, const Config& c) { return !settle(m, c).has_value(); }

TermGraph generic(const Grammar& g, NonterminalId x) {
    std::vector<TermGraph> vars;
    for (VarIndex i = 1; i <= g.signature().arity(x); ++i) vars.push_back(TermGraph::variable(i));
    return TermGraph::apply(x, vars);
}

std::optional<Word> brute_exposing(const Grammar& g, NonterminalId x, VarIndex i, std::uint32_t k) {
    const TermGraph start = generic(g, x);
    for (const auto& w : all_words(g.action_count(), k)) {
        auto r = run(g, start, w);
        if (r && *r == TermGraph::variable(i)) return w;
    }
    return std::nullopt;
}

namespace {

std::uint64_t depth_of(const TermGraph& t) {
    std::function<std::uint64_t(NodeId)> go = [&](NodeId n) -> std::uint64_t {
        std::uint64_t best = 0;
        for (NodeId c : t.node(n).children) best = std::max(best, go(c) + 1);
        return best;
    };
    return go(t.root());
}

}  // namespace

std::optional<BruteConstants> brute_constants(const Grammar& g, std::uint32_t k) {
    std::uint64_t longest = 0;
    for (NonterminalId x = 0; x < g.signature().size(); ++x)
        for (VarIndex i = 1; i <= g.signature().arity(x); ++i) {
            const auto w = brute_exposing(g, x, i, k);
            if (!w) return std::nullopt;
            longest = std::max<std::uint64_t>(longest, w->size());
        }
    std::uint64_t d = 0;
    for (const auto& r : g.rules()) d = std::max(d, depth_of(r.rhs));
    const auto inc = [&](std::uint64_t n) { return n * d; };
    BruteConstants e;
    e.m0 = 1 + longest;
    e.m1 = (1 + inc(e.m0)) * e.m0;
    e.m2 = (e.m0 + e.m1) + (1 + inc(e.m0 + e.m1)) * e.m0;
    e.m3 = 1 + inc(e.m2);
    return e;
}

bool is_type_n(const std::string& w, std::uint32_t n) {
    if (n == 0) return w.empty();
    for (std::size_t len = 0; 2 * len < w.size(); ++len) {
        const std::string v = w.substr(0, len);
        if (w.substr(w.size() - len) == v && is_type_n(v, n - 1)) return true;
    }
    return false;
}

bool has_type_n_subword(const std::string& w, std::uint32_t n) {
    for (std::size_t i = 0; i <= w.size(); ++i)
        for (std::size_t j = i; j <= w.size(); ++j)
            if (is_type_n(w.substr(i, j - i), n)) return true;
    return false;
}

std::vector<std::string> binary_words(std::size_t len) {
    std::vector<std::string> out;
    for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
        std::string w;
        for (std::size_t i = 0; i < len; ++i) w += (bits >> (len - 1 - i)) & 1 ? 'b' : 'a';
        out.push_back(w);
    }
    return out;
}

}  // namespace fogtest
