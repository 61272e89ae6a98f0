#include "fog/dpda.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "fog/text.hpp"

namespace fog {

namespace {

void check_name(const std::string& name, const char* what) {
    if (!is_identifier(name) || name.find('.') != std::string::npos || name == "eps")
        throw DpdaError(std::string("invalid ") + what + " name '" + name + "'");
}

template <class T>
std::optional<std::uint32_t> index_of(const std::vector<T>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::uint32_t>(it - names.begin());
}

}  // namespace

StateId Dpda::add_state(std::string name) {
    check_name(name, "state");
    if (find_state(name)) throw DpdaError("duplicate state '" + name + "'");
    states_.push_back(std::move(name));
    accepting_.push_back(false);
    return static_cast<StateId>(states_.size() - 1);
}

StackSymbol Dpda::add_stack_symbol(std::string name) {
    check_name(name, "stack symbol");
    if (find_stack_symbol(name)) throw DpdaError("duplicate stack symbol '" + name + "'");
    stack_.push_back(std::move(name));
    return static_cast<StackSymbol>(stack_.size() - 1);
}

ActionId Dpda::add_action(std::string name) {
    check_name(name, "input");
    if (find_action(name)) throw DpdaError("duplicate input symbol '" + name + "'");
    actions_.push_back(std::move(name));
    return static_cast<ActionId>(actions_.size() - 1);
}

void Dpda::add_rule(DpdaRule rule) {
    if (rule.from >= states_.size() || rule.to >= states_.size()) throw DpdaError("rule mentions an unknown state");
    if (rule.top >= stack_.size()) throw DpdaError("rule mentions an unknown stack symbol");
    for (auto s : rule.push)
        if (s >= stack_.size()) throw DpdaError("rule mentions an unknown stack symbol");
    if (rule.action && *rule.action >= actions_.size()) throw DpdaError("rule mentions an unknown input symbol");
    rules_.push_back(std::move(rule));
}

void Dpda::set_accepting(StateId p, bool accepting) { accepting_.at(p) = accepting; }

std::optional<StateId> Dpda::find_state(std::string_view name) const { return index_of(states_, name); }
std::optional<StackSymbol> Dpda::find_stack_symbol(std::string_view name) const { return index_of(stack_, name); }
std::optional<ActionId> Dpda::find_action(std::string_view name) const { return index_of(actions_, name); }

const DpdaRule* Dpda::rule(StateId p, StackSymbol a, ActionId action) const {
    for (const auto& r : rules_)
        if (r.from == p && r.top == a && r.action == action) return &r;
    return nullptr;
}

const DpdaRule* Dpda::eps_rule(StateId p, StackSymbol a) const {
    for (const auto& r : rules_)
        if (r.from == p && r.top == a && !r.action) return &r;
    return nullptr;
}

std::vector<std::string> validate(const Dpda& m) {
    std::vector<std::string> out;
    for (StateId p = 0; p < m.state_count(); ++p) {
        for (StackSymbol a = 0; a < m.stack_count(); ++a) {
            std::size_t eps = 0, visible = 0;
            std::vector<std::size_t> per_action(m.action_count(), 0);
            for (const auto& r : m.rules()) {
                if (r.from != p || r.top != a) continue;
                if (r.action)
                    ++visible, ++per_action[*r.action];
                else
                    ++eps;
            }
            const std::string pair = m.state_name(p) + " " + m.stack_name(a);
            if (eps > 1) out.push_back("more than one silent rule for " + pair);
            if (eps > 0 && visible > 0) out.push_back(pair + " has both silent and visible rules");
            for (ActionId x = 0; x < m.action_count(); ++x)
                if (per_action[x] > 1) out.push_back("more than one rule for " + pair + " on " + m.action_name(x));
        }
    }
    return out;
}

void require_valid(const Dpda& m) {
    auto problems = validate(m);
    if (problems.empty()) return;
    std::string msg = "invalid DPDA:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw DpdaError(msg);
}

bool is_eps_popping(const Dpda& m) {
    return std::all_of(m.rules().begin(), m.rules().end(),
                       [](const DpdaRule& r) { return r.action || r.push.empty(); });
}

// ------------------------------------------------------------- silent runs

namespace {

struct Outcome {
    enum class Kind { pop, stable, diverge } kind = Kind::diverge;
    StateId state = 0;
    std::vector<StackSymbol> stack;
};

// Where the silent run from an unstable pA ends, A standing for whatever it
// is replaced by: A is popped in state q, a stable top is reached, or the run
// is infinite.
class SilentRuns {
public:
    explicit SilentRuns(const Dpda& m)
        : m_(m), memo_(m.state_count() * m.stack_count()), busy_(memo_.size(), 0) {}

    const Outcome& resolve(StateId p, StackSymbol a) {
        const std::size_t key = p * m_.stack_count() + a;
        if (memo_[key]) return *memo_[key];
        if (busy_[key]) return diverge_;
        busy_[key] = 1;
        const DpdaRule* r = m_.eps_rule(p, a);
        StateId q = r->to;
        std::vector<StackSymbol> gamma = r->push;
        Outcome res;
        while (true) {
            if (gamma.empty()) {
                res = {Outcome::Kind::pop, q, {}};
                break;
            }
            if (m_.stable(q, gamma.front())) {
                res = {Outcome::Kind::stable, q, gamma};
                break;
            }
            const Outcome inner = resolve(q, gamma.front());
            if (inner.kind == Outcome::Kind::diverge) {
                res = inner;
                break;
            }
            if (inner.kind == Outcome::Kind::stable) {
                std::vector<StackSymbol> stack = inner.stack;
                stack.insert(stack.end(), gamma.begin() + 1, gamma.end());
                res = {Outcome::Kind::stable, inner.state, std::move(stack)};
                break;
            }
            q = inner.state;
            gamma.erase(gamma.begin());
        }
        busy_[key] = 0;
        memo_[key] = std::move(res);
        return *memo_[key];
    }

    Config closure(Config c) {
        while (!c.stack.empty() && !m_.stable(c.state, c.stack.front())) {
            const Outcome& o = resolve(c.state, c.stack.front());
            switch (o.kind) {
                case Outcome::Kind::diverge:
                    throw EpsDivergence("configuration " + format_config(c, m_) + " has an infinite silent run");
                case Outcome::Kind::pop:
                    c.state = o.state;
                    c.stack.erase(c.stack.begin());
                    break;
                case Outcome::Kind::stable:
                    c.state = o.state;
                    c.stack.erase(c.stack.begin());
                    c.stack.insert(c.stack.begin(), o.stack.begin(), o.stack.end());
                    break;
            }
        }
        return c;
    }

private:
    const Dpda& m_;
    std::vector<std::optional<Outcome>> memo_;
    std::vector<char> busy_;
    Outcome diverge_;
};

Dpda skeleton(const Dpda& m) {
    Dpda out;
    for (StateId p = 0; p < m.state_count(); ++p) {
        out.add_state(m.state_name(p));
        out.set_accepting(p, m.accepting(p));
    }
    for (StackSymbol a = 0; a < m.stack_count(); ++a) out.add_stack_symbol(m.stack_name(a));
    for (const auto& a : m.actions()) out.add_action(a);
    return out;
}

std::string fresh_state_name(const Dpda& m, const std::string& base) {
    std::string name = base;
    for (int k = 1; m.find_state(name); ++k) name = base + std::to_string(k);
    return name;
}

}  // namespace

Dpda to_eps_popping(const Dpda& m) {
    require_valid(m);
    Dpda out = skeleton(m);
    SilentRuns runs(m);
    for (StateId p = 0; p < m.state_count(); ++p) {
        for (StackSymbol a = 0; a < m.stack_count(); ++a) {
            if (m.stable(p, a)) {
                for (ActionId x = 0; x < m.action_count(); ++x)
                    if (const DpdaRule* r = m.rule(p, a, x)) out.add_rule(*r);
                continue;
            }
            const Outcome& o = runs.resolve(p, a);
            if (o.kind == Outcome::Kind::pop) {
                out.add_rule(DpdaRule{p, a, std::nullopt, o.state, {}});
            } else if (o.kind == Outcome::Kind::stable) {
                for (ActionId x = 0; x < m.action_count(); ++x) {
                    const DpdaRule* r = m.rule(o.state, o.stack.front(), x);
                    if (!r) continue;
                    std::vector<StackSymbol> push = r->push;
                    push.insert(push.end(), o.stack.begin() + 1, o.stack.end());
                    out.add_rule(DpdaRule{p, a, x, r->to, std::move(push)});
                }
            }
        }
    }
    return out;
}

Dpda complete(const Dpda& m) {
    require_valid(m);
    Dpda out = m;
    std::vector<DpdaRule> missing;
    for (StateId p = 0; p < m.state_count(); ++p)
        for (StackSymbol a = 0; a < m.stack_count(); ++a)
            if (m.stable(p, a))
                for (ActionId x = 0; x < m.action_count(); ++x)
                    if (!m.rule(p, a, x)) missing.push_back(DpdaRule{p, a, x, 0, {a}});
    if (missing.empty()) return out;
    const StateId dead = out.add_state(fresh_state_name(m, "dead"));
    for (auto& r : missing) {
        r.to = dead;
        out.add_rule(std::move(r));
    }
    for (StackSymbol a = 0; a < m.stack_count(); ++a)
        for (ActionId x = 0; x < m.action_count(); ++x) out.add_rule(DpdaRule{dead, a, x, dead, {a}});
    return out;
}

// -------------------------------------------------------------- compilation

std::optional<NonterminalId> CompiledDpda::nonterminal_of(StateId p, StackSymbol a) const {
    auto v = nonterminal.at(p * dpda.stack_count() + a);
    if (v < 0) return std::nullopt;
    return static_cast<NonterminalId>(v);
}

namespace {

// Translation of q alpha with the bottom being either bottom (configurations)
// or the variables x1..xm (rule right-hand sides). One layer of at most |Q|
// nodes per stack position, shared between states.
TermGraph translate(const CompiledDpda& c, StateId q, const std::vector<StackSymbol>& alpha, bool variable_bottom) {
    const auto& m = c.dpda;
    const auto n = static_cast<std::uint32_t>(m.state_count());
    std::vector<TermNode> nodes;
    std::vector<NodeId> layer(n);
    if (variable_bottom) {
        for (std::uint32_t i = 0; i < n; ++i) {
            nodes.push_back(TermNode{Label::variable(i + 1), {}});
            layer[i] = i;
        }
    } else {
        nodes.push_back(TermNode{Label::nonterminal(c.bottom), {}});
        std::fill(layer.begin(), layer.end(), 0);
    }
    for (std::size_t j = alpha.size(); j-- > 0;) {
        std::vector<NodeId> next(n);
        for (StateId s = 0; s < n; ++s) {
            if (auto x = c.nonterminal_of(s, alpha[j])) {
                nodes.push_back(TermNode{Label::nonterminal(*x), layer});
                next[s] = static_cast<NodeId>(nodes.size() - 1);
            } else {
                next[s] = layer[m.eps_rule(s, alpha[j])->to];
            }
        }
        layer = std::move(next);
    }
    return canonicalize(nodes, layer[q]);
}

}  // namespace

CompiledDpda compile(const Dpda& m) {
    require_valid(m);
    if (!is_eps_popping(m)) throw DpdaError("compile needs a DPDA whose silent rules all pop");
    CompiledDpda c;
    c.dpda = m;
    c.nonterminal.assign(m.state_count() * m.stack_count(), -1);
    const auto n = static_cast<std::uint32_t>(m.state_count());
    for (StateId p = 0; p < m.state_count(); ++p)
        for (StackSymbol a = 0; a < m.stack_count(); ++a)
            if (m.stable(p, a))
                c.nonterminal[p * m.stack_count() + a] =
                    c.grammar.add_nonterminal(m.state_name(p) + "." + m.stack_name(a), n);
    c.bottom = c.grammar.add_nonterminal("bot", 0);
    for (const auto& x : m.actions()) c.grammar.add_action(x);
    for (StateId p = 0; p < m.state_count(); ++p)
        for (StackSymbol a = 0; a < m.stack_count(); ++a) {
            auto x = c.nonterminal_of(p, a);
            if (!x) continue;
            for (ActionId act = 0; act < m.action_count(); ++act)
                if (const DpdaRule* r = m.rule(p, a, act))
                    c.grammar.add_rule(Rule{*x, act, translate(c, r->to, r->push, true)});
        }
    return c;
}

TermGraph translate_config(const CompiledDpda& c, const Config& config) {
    return translate(c, config.state, config.stack, false);
}

// --------------------------------------------------------------- semantics

Config eps_closure(const Dpda& m, Config c) { return SilentRuns(m).closure(std::move(c)); }

namespace {

template <class Visit>
void explore(const Dpda& m, const Config& c, std::uint32_t k, Visit visit) {
    SilentRuns runs(m);
    Word cur;
    std::function<void(const Config&)> go = [&](const Config& raw) {
        Config conf = runs.closure(raw);
        visit(cur, conf);
        if (cur.size() == k || conf.stack.empty()) return;
        for (ActionId a = 0; a < m.action_count(); ++a) {
            const DpdaRule* r = m.rule(conf.state, conf.stack.front(), a);
            if (!r) continue;
            Config next{r->to, r->push};
            next.stack.insert(next.stack.end(), conf.stack.begin() + 1, conf.stack.end());
            cur.push_back(a);
            go(next);
            cur.pop_back();
        }
    };
    go(c);
}

}  // namespace

std::set<Word> dpda_enabled_upto(const Dpda& m, const Config& c, std::uint32_t k) {
    std::set<Word> out;
    explore(m, c, k, [&](const Word& w, const Config&) { out.insert(w); });
    return out;
}

std::set<Word> dpda_accepted_upto(const Dpda& m, const Config& c, std::uint32_t k) {
    std::set<Word> out;
    explore(m, c, k, [&](const Word& w, const Config& conf) {
        if (conf.stack.empty()) out.insert(w);
    });
    return out;
}

Dpda add_endmarker(const Dpda& m, const std::string& marker) {
    require_valid(m);
    Dpda out = m;
    const ActionId end = out.add_action(marker);
    const StateId f = out.add_state(fresh_state_name(m, "end"));
    for (StackSymbol a = 0; a < m.stack_count(); ++a) out.add_rule(DpdaRule{f, a, std::nullopt, f, {}});
    for (StateId p = 0; p < m.state_count(); ++p)
        if (m.accepting(p))
            for (StackSymbol a = 0; a < m.stack_count(); ++a)
                if (m.stable(p, a)) out.add_rule(DpdaRule{p, a, end, f, {a}});
    return out;
}

// ------------------------------------------------------------------- text

namespace {

struct Field {
    std::string text;
    std::size_t column;
};

std::vector<Field> split_ws(std::string_view line) {
    std::vector<Field> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back({std::string(line.substr(i, j - i)), i + 1});
        i = j;
    }
    return out;
}

std::vector<Field> split_list(std::string_view body, std::size_t offset) {
    std::vector<Field> out;
    std::size_t start = 0;
    while (start <= body.size()) {
        auto end = body.find(',', start);
        if (end == std::string_view::npos) end = body.size();
        auto part = body.substr(start, end - start);
        auto b = part.find_first_not_of(" \t");
        if (b != std::string_view::npos) {
            auto e = part.find_last_not_of(" \t");
            out.push_back({std::string(part.substr(b, e - b + 1)), offset + start + b + 1});
        }
        start = end + 1;
    }
    return out;
}

}  // namespace

Dpda parse_dpda(std::string_view text) {
    Dpda m;
    std::vector<std::pair<std::size_t, std::string>> pending;
    std::vector<std::pair<std::size_t, Field>> accepting;
    std::size_t line_no = 0, start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        std::string_view line = raw.substr(0, raw.find('#'));
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        auto colon = line.find(':');
        auto key_end = line.find_first_not_of(" \t");
        std::string key = colon == std::string_view::npos ? "" : std::string(line.substr(key_end, colon - key_end));
        if (key == "states" || key == "stack" || key == "input" || key == "accepting") {
            for (auto& f : split_list(line.substr(colon + 1), colon + 1)) {
                try {
                    if (key == "states")
                        m.add_state(f.text);
                    else if (key == "stack")
                        m.add_stack_symbol(f.text);
                    else if (key == "input")
                        m.add_action(f.text);
                    else
                        accepting.emplace_back(line_no, f);
                } catch (const DpdaError& e) {
                    throw ParseError(line_no, f.column, e.what());
                }
            }
            continue;
        }
        pending.emplace_back(line_no, std::string(line));
    }
    for (const auto& [ln, f] : accepting) {
        auto p = m.find_state(f.text);
        if (!p) throw ParseError(ln, f.column, "unknown state '" + f.text + "'");
        m.set_accepting(*p);
    }
    for (const auto& [ln, line] : pending) {
        auto fields = split_ws(line);
        if (fields.size() < 4) throw ParseError(ln, fields.front().column, "expected 'p A -a-> q ...'");
        auto state = [&, ln = ln](const Field& f) {
            auto p = m.find_state(f.text);
            if (!p) throw ParseError(ln, f.column, "unknown state '" + f.text + "'");
            return *p;
        };
        auto symbol = [&, ln = ln](const Field& f) {
            auto s = m.find_stack_symbol(f.text);
            if (!s) throw ParseError(ln, f.column, "unknown stack symbol '" + f.text + "'");
            return *s;
        };
        DpdaRule r;
        r.from = state(fields[0]);
        r.top = symbol(fields[1]);
        const auto& arrow = fields[2];
        if (arrow.text.size() < 4 || arrow.text.front() != '-' || arrow.text.substr(arrow.text.size() - 2) != "->")
            throw ParseError(ln, arrow.column, "expected an arrow '-a->' or '-eps->'");
        std::string act = arrow.text.substr(1, arrow.text.size() - 3);
        if (act != "eps") {
            auto a = m.find_action(act);
            if (!a) throw ParseError(ln, arrow.column + 1, "unknown input symbol '" + act + "'");
            r.action = *a;
        }
        r.to = state(fields[3]);
        for (std::size_t i = 4; i < fields.size(); ++i) r.push.push_back(symbol(fields[i]));
        m.add_rule(std::move(r));
    }
    return m;
}

Dpda read_dpda(const std::string& path) { return parse_dpda(read_file(path)); }

std::string format_dpda(const Dpda& m) {
    std::ostringstream os;
    auto list = [&](const char* key, std::size_t n, auto name) {
        os << key << ":";
        for (std::size_t i = 0; i < n; ++i) os << (i ? ", " : " ") << name(i);
        os << "\n";
    };
    list("states", m.state_count(), [&](std::size_t i) { return m.state_name(static_cast<StateId>(i)); });
    list("stack", m.stack_count(), [&](std::size_t i) { return m.stack_name(static_cast<StackSymbol>(i)); });
    list("input", m.action_count(), [&](std::size_t i) { return m.action_name(static_cast<ActionId>(i)); });
    std::vector<std::string> acc;
    for (StateId p = 0; p < m.state_count(); ++p)
        if (m.accepting(p)) acc.push_back(m.state_name(p));
    if (!acc.empty()) list("accepting", acc.size(), [&](std::size_t i) { return acc[i]; });
    for (const auto& r : m.rules()) {
        os << m.state_name(r.from) << " " << m.stack_name(r.top) << " -"
           << (r.action ? m.action_name(*r.action) : std::string("eps")) << "-> " << m.state_name(r.to);
        for (auto s : r.push) os << " " << m.stack_name(s);
        os << "\n";
    }
    return os.str();
}

Config parse_config(std::string_view text, const Dpda& m) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ParseError(1, 1, "configuration must look like 'p:ABA'");
    auto p = m.find_state(text.substr(0, colon));
    if (!p) throw ParseError(1, 1, "unknown state '" + std::string(text.substr(0, colon)) + "'");
    Config c{*p, {}};
    std::string_view rest = text.substr(colon + 1);
    if (rest.empty() || rest == "eps") return c;
    if (rest.find('.') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto end = rest.find('.', start);
            if (end == std::string_view::npos) end = rest.size();
            auto s = m.find_stack_symbol(rest.substr(start, end - start));
            if (!s) throw ParseError(1, colon + start + 2, "unknown stack symbol");
            c.stack.push_back(*s);
            start = end + 1;
        }
        return c;
    }
    std::size_t i = 0;
    while (i < rest.size()) {
        std::optional<StackSymbol> best;
        std::size_t best_len = 0;
        for (StackSymbol s = 0; s < m.stack_count(); ++s) {
            const auto& name = m.stack_name(s);
            if (name.size() > best_len && rest.substr(i, name.size()) == name) {
                best = s;
                best_len = name.size();
            }
        }
        if (!best) throw ParseError(1, colon + i + 2, "unknown stack symbol");
        c.stack.push_back(*best);
        i += best_len;
    }
    return c;
}

std::string format_config(const Config& c, const Dpda& m) {
    std::string out = m.state_name(c.state) + ":";
    bool single = true;
    for (auto s : c.stack)
        if (m.stack_name(s).size() != 1) single = false;
    for (std::size_t i = 0; i < c.stack.size(); ++i) {
        if (i && !single) out += '.';
        out += m.stack_name(c.stack[i]);
    }
    return out;
}

}  // namespace fog
