#include "fog/grammar.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_set>

namespace fog {

// ---------------------------------------------------------------- signature

NonterminalId Signature::add(std::string name, std::uint32_t arity) {
    if (by_name_.count(name)) throw GrammarError("duplicate nonterminal '" + name + "'");
    const auto id = static_cast<NonterminalId>(symbols_.size());
    by_name_.emplace(name, id);
    symbols_.push_back(Nonterminal{std::move(name), arity});
    return id;
}

std::optional<NonterminalId> Signature::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t Signature::max_arity() const {
    std::uint32_t m = 0;
    for (const auto& s : symbols_) m = std::max(m, s.arity);
    return m;
}

// ------------------------------------------------------------------ grammar

NonterminalId Grammar::add_nonterminal(std::string name, std::uint32_t arity) {
    auto id = signature_.add(std::move(name), arity);
    reindex();
    return id;
}

ActionId Grammar::add_action(std::string name) {
    if (action_index_.count(name)) throw GrammarError("duplicate action '" + name + "'");
    const auto id = static_cast<ActionId>(actions_.size());
    action_index_.emplace(name, id);
    actions_.push_back(std::move(name));
    reindex();
    return id;
}

void Grammar::add_rule(Rule rule) {
    if (rule.head >= signature_.size()) throw std::out_of_range("rule head is not a declared nonterminal");
    if (rule.action >= actions_.size()) throw std::out_of_range("rule action is not a declared action");
    rules_.push_back(std::move(rule));
    reindex();
}

std::optional<ActionId> Grammar::find_action(std::string_view name) const {
    auto it = action_index_.find(std::string(name));
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
}

const Rule* Grammar::rule_for(NonterminalId x, ActionId a) const {
    auto idx = table_.at(static_cast<std::size_t>(x) * actions_.size() + a);
    return idx < 0 ? nullptr : &rules_[static_cast<std::size_t>(idx)];
}

void Grammar::reindex() {
    const std::size_t na = actions_.size();
    table_.assign(signature_.size() * na, -1);
    for (std::size_t r = 0; r < rules_.size(); ++r) {
        auto& slot = table_[rules_[r].head * na + rules_[r].action];
        if (slot < 0) slot = static_cast<std::int32_t>(r);
    }
    enabled_.assign(signature_.size(), {});
    for (NonterminalId x = 0; x < signature_.size(); ++x)
        for (ActionId a = 0; a < na; ++a)
            if (table_[x * na + a] >= 0) enabled_[x].push_back(a);
}

// --------------------------------------------------------------- validation

std::vector<std::string> check_term(const TermGraph& t, const Signature& sig) {
    std::vector<std::string> problems;
    for (const auto& node : t.nodes()) {
        if (node.label.is_variable()) continue;
        if (node.label.index >= sig.size()) {
            problems.push_back("unknown nonterminal id " + std::to_string(node.label.index));
            continue;
        }
        if (node.children.size() != sig.arity(node.label.index)) {
            std::ostringstream os;
            os << "nonterminal " << sig.name(node.label.index) << " has arity " << sig.arity(node.label.index)
               << " but is applied to " << node.children.size() << " arguments";
            problems.push_back(os.str());
        }
    }
    return problems;
}

std::vector<Diagnostic> validate(const Grammar& g) {
    std::vector<Diagnostic> out;
    const auto& sig = g.signature();
    std::map<std::pair<NonterminalId, ActionId>, int> seen;
    for (const auto& rule : g.rules()) {
        const auto& head = sig.at(rule.head);
        const std::string where = head.name + " -" + g.action_name(rule.action) + "->";
        if (++seen[{rule.head, rule.action}] == 2)
            out.push_back({Diagnostic::Kind::nondeterministic, "more than one rule for " + where});
        for (auto& p : check_term(rule.rhs, sig)) {
            const auto kind = p.rfind("unknown", 0) == 0 ? Diagnostic::Kind::unknown_symbol
                                                         : Diagnostic::Kind::arity_mismatch;
            out.push_back({kind, where + ": " + p});
        }
        if (!rule.rhs.is_finite())
            out.push_back({Diagnostic::Kind::infinite_rhs, where + ": right-hand side must be a finite term"});
        for (VarIndex v : rule.rhs.variables())
            if (v > head.arity)
                out.push_back({Diagnostic::Kind::variable_out_of_scope,
                               where + ": variable x" + std::to_string(v) + " is not among x1..x" +
                                   std::to_string(head.arity)});
    }
    return out;
}

void require_valid(const Grammar& g) {
    auto diags = validate(g);
    if (diags.empty()) return;
    std::string msg = "invalid grammar:";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw GrammarError(msg);
}

// ---------------------------------------------------------------- semantics

std::optional<TermGraph> step(const Grammar& g, const TermGraph& t, ActionId a) {
    const auto& root = t.node(t.root());
    if (root.label.is_variable()) return std::nullopt;
    const Rule* rule = g.rule_for(root.label.index, a);
    if (!rule) return std::nullopt;
    // rhs nodes are appended after t; rhs variables x_i point at t's i-th root child.
    std::vector<TermNode> nodes = t.nodes();
    const auto base = static_cast<NodeId>(nodes.size());
    auto target = [&](NodeId rhs_node) -> NodeId {
        const auto& label = rule->rhs.node(rhs_node).label;
        if (label.is_variable()) return root.children.at(label.index - 1);
        return rhs_node + base;
    };
    for (const auto& n : rule->rhs.nodes()) {
        TermNode copy{n.label, {}};
        for (NodeId c : n.children) copy.children.push_back(target(c));
        nodes.push_back(std::move(copy));
    }
    return canonicalize(nodes, target(rule->rhs.root()));
}

std::optional<TermGraph> run(const Grammar& g, const TermGraph& t, const Word& w) {
    std::optional<TermGraph> cur = t;
    for (ActionId a : w) {
        cur = step(g, *cur, a);
        if (!cur) return std::nullopt;
    }
    return cur;
}

bool enables(const Grammar& g, const TermGraph& t, const Word& w) {
    return run(g, t, w).has_value();
}

std::set<Word> traces_upto(const Grammar& g, const TermGraph& t, std::uint32_t k) {
    std::set<Word> out;
    Word cur;
    std::function<void(const TermGraph&)> visit = [&](const TermGraph& term) {
        out.insert(cur);
        if (cur.size() == k || term.is_variable()) return;
        for (ActionId a : g.enabled_actions(term.root_label().index)) {
            auto next = step(g, term, a);
            cur.push_back(a);
            visit(*next);
            cur.pop_back();
        }
    };
    visit(t);
    return out;
}

// ------------------------------------------------------------ exposing words

bool ExposureTable::normal_form() const {
    for (const auto& row : entries)
        for (const auto& e : row)
            if (!e.exposable) return false;
    return true;
}

namespace {

constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;

// Least cost of reaching x_i from each node of a finite rhs, where passing the
// j-th edge of a Y-node costs len[Y][j].
std::vector<std::uint64_t> reach_cost(const TermGraph& rhs, VarIndex i,
                                      const std::vector<std::vector<std::uint64_t>>& len) {
    std::vector<std::uint64_t> cost(rhs.size(), kInf);
    std::vector<char> done(rhs.size(), 0);
    std::function<std::uint64_t(NodeId)> go = [&](NodeId n) -> std::uint64_t {
        if (done[n]) return cost[n];
        done[n] = 1;
        const auto& node = rhs.node(n);
        std::uint64_t best = kInf;
        if (node.label.is_variable()) {
            best = node.label.index == i ? 0 : kInf;
        } else {
            for (std::size_t j = 0; j < node.children.size(); ++j) {
                auto step_cost = len[node.label.index][j];
                auto rest = go(node.children[j]);
                if (step_cost < kInf && rest < kInf) best = std::min(best, step_cost + rest);
            }
        }
        return cost[n] = best;
    };
    go(rhs.root());
    return cost;
}

}  // namespace

ExposureTable exposing_table(const Grammar& g) {
    const auto& sig = g.signature();
    std::vector<std::vector<std::uint64_t>> len(sig.size());
    for (NonterminalId x = 0; x < sig.size(); ++x) len[x].assign(sig.arity(x), kInf);

    // Shortest exposing lengths: least fixpoint of
    //   len(X,i) = min over rules X -a-> E of 1 + cost of reaching x_i in E.
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& rule : g.rules()) {
            for (VarIndex i = 1; i <= sig.arity(rule.head); ++i) {
                auto c = reach_cost(rule.rhs, i, len)[rule.rhs.root()];
                if (c < kInf && 1 + c < len[rule.head][i - 1]) {
                    len[rule.head][i - 1] = 1 + c;
                    changed = true;
                }
            }
        }
    }

    ExposureTable table;
    table.entries.resize(sig.size());
    for (NonterminalId x = 0; x < sig.size(); ++x) table.entries[x].resize(sig.arity(x));

    std::vector<std::pair<std::uint64_t, std::pair<NonterminalId, VarIndex>>> order;
    for (NonterminalId x = 0; x < sig.size(); ++x)
        for (VarIndex i = 1; i <= sig.arity(x); ++i)
            if (len[x][i - 1] < kInf) order.push_back({len[x][i - 1], {x, i}});
    std::sort(order.begin(), order.end());

    // Words in order of increasing length; every component word is strictly
    // shorter and therefore already fixed.
    for (const auto& [total, key] : order) {
        const auto [x, i] = key;
        std::optional<Word> best;
        for (ActionId a : g.enabled_actions(x)) {
            const Rule* rule = g.rule_for(x, a);
            auto cost = reach_cost(rule->rhs, i, len);
            if (cost[rule->rhs.root()] + 1 != total) continue;
            std::function<Word(NodeId)> least = [&](NodeId n) -> Word {
                const auto& node = rule->rhs.node(n);
                if (node.label.is_variable()) return {};
                std::optional<Word> pick;
                for (std::size_t j = 0; j < node.children.size(); ++j) {
                    auto sc = len[node.label.index][j];
                    if (sc >= kInf || cost[node.children[j]] >= kInf) continue;
                    if (sc + cost[node.children[j]] != cost[n]) continue;
                    Word w = table.entries[node.label.index][j].word;
                    auto tail = least(node.children[j]);
                    w.insert(w.end(), tail.begin(), tail.end());
                    if (!pick || w < *pick) pick = std::move(w);
                }
                return *pick;
            };
            Word w{a};
            auto tail = least(rule->rhs.root());
            w.insert(w.end(), tail.begin(), tail.end());
            if (!best || w < *best) best = std::move(w);
        }
        table.entries[x][i - 1] = ExposureEntry{true, std::move(*best)};
    }

    std::uint64_t longest = 0;
    for (const auto& row : table.entries)
        for (const auto& e : row) longest = std::max<std::uint64_t>(longest, e.word.size());
    table.m0 = 1 + longest;
    return table;
}

std::uint32_t max_rhs_depth(const Grammar& g) {
    std::uint32_t d = 0;
    for (const auto& rule : g.rules()) d = std::max(d, depth_size(rule.rhs));
    return d;
}

std::uint64_t bound_inc(const Grammar& g, std::uint64_t len) {
    return len * max_rhs_depth(g);
}

// --------------------------------------------------------------- normal form

TermGraph NormalForm::transf(const TermGraph& t) const {
    std::vector<TermNode> nodes;
    nodes.reserve(t.size());
    for (const auto& n : t.nodes()) {
        TermNode copy{n.label, {}};
        if (n.label.is_nonterminal())
            for (VarIndex i : kept.at(n.label.index)) copy.children.push_back(n.children.at(i - 1));
        nodes.push_back(std::move(copy));
    }
    return canonicalize(nodes, t.root());
}

NormalForm normalize(const Grammar& g) {
    const auto table = exposing_table(g);
    const auto& sig = g.signature();
    NormalForm out;
    out.kept.resize(sig.size());
    for (NonterminalId x = 0; x < sig.size(); ++x)
        for (VarIndex i = 1; i <= sig.arity(x); ++i)
            if (table.at(x, i).exposable) out.kept[x].push_back(i);

    for (NonterminalId x = 0; x < sig.size(); ++x)
        out.grammar.add_nonterminal(sig.name(x) + "'", static_cast<std::uint32_t>(out.kept[x].size()));
    for (const auto& a : g.actions()) out.grammar.add_action(a);

    for (const auto& rule : g.rules()) {
        const auto& kept = out.kept[rule.head];
        Substitution rename;
        for (std::size_t j = 0; j < kept.size(); ++j)
            rename.emplace(kept[j], TermGraph::variable(static_cast<VarIndex>(j + 1)));
        TermGraph rhs = out.transf(rule.rhs);
        for (VarIndex v : rhs.variables())
            if (!rename.count(v)) throw std::logic_error("unexposable variable survived normalization");
        out.grammar.add_rule(Rule{rule.head, rule.action, substitute(rhs, rename)});
    }
    return out;
}

// ----------------------------------------------------------- exposing equations

std::optional<ExposedEquation> expose_equation(const Grammar& g, const TermGraph& e, const TermGraph& f,
                                               std::uint32_t max_len) {
    TermPool pool;
    Lts lts(g, pool);
    struct Item {
        TermId left, right;
        Word word;
    };
    auto key = [](TermId l, TermId r) { return (static_cast<std::uint64_t>(l) << 32) | r; };
    std::unordered_set<std::uint64_t> seen;
    std::deque<Item> queue;
    Item start{pool.intern(e), pool.intern(f), {}};
    seen.insert(key(start.left, start.right));
    queue.push_back(std::move(start));
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        if (item.left == item.right) continue;
        const auto& lt = pool.get(item.left);
        const auto& rt = pool.get(item.right);
        if (lt.is_variable()) return ExposedEquation{item.word, lt.root_label().index, rt, true};
        if (rt.is_variable()) return ExposedEquation{item.word, rt.root_label().index, lt, false};
        if (item.word.size() == max_len) continue;
        for (ActionId a = 0; a < g.action_count(); ++a) {
            auto l2 = lts.step(item.left, a);
            auto r2 = lts.step(item.right, a);
            if (!l2 || !r2) continue;
            if (!seen.insert(key(*l2, *r2)).second) continue;
            Word w = item.word;
            w.push_back(a);
            queue.push_back(Item{*l2, *r2, std::move(w)});
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------- Lts

Lts::Lts(const Grammar& g, TermPool& pool) : grammar_(&g), pool_(&pool) {
    std::map<std::vector<ActionId>, std::uint32_t> classes;
    classes.emplace(std::vector<ActionId>{}, 0);
    for (NonterminalId x = 0; x < g.signature().size(); ++x) {
        auto [it, inserted] =
            classes.emplace(g.enabled_actions(x), static_cast<std::uint32_t>(classes.size()));
        class_of_.push_back(it->second);
    }
}

std::optional<TermId> Lts::step(TermId t, ActionId a) {
    const std::uint64_t key = (static_cast<std::uint64_t>(t) << 32) | a;
    auto it = steps_.find(key);
    if (it != steps_.end()) {
        if (it->second < 0) return std::nullopt;
        return static_cast<TermId>(it->second);
    }
    auto next = fog::step(*grammar_, pool_->get(t), a);
    std::int64_t value = next ? static_cast<std::int64_t>(pool_->intern(*next)) : -1;
    steps_.emplace(key, value);
    if (value < 0) return std::nullopt;
    return static_cast<TermId>(value);
}

const std::vector<ActionId>& Lts::enabled(TermId t) const {
    const auto& label = pool_->get(t).root_label();
    if (label.is_variable()) return none_;
    return grammar_->enabled_actions(label.index);
}

std::uint32_t Lts::enabled_class(TermId t) const {
    const auto& label = pool_->get(t).root_label();
    if (label.is_variable()) return variable_class_;
    return class_of_[label.index];
}

}  // namespace fog
