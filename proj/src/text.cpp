#include "fog/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace fog {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

const TermGraph& Document::term(const std::string& name) const {
    auto it = terms.find(name);
    if (it == terms.end()) throw std::out_of_range("no term named '" + name + "'");
    return it->second;
}

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '$';
}

}  // namespace

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!ident_char(c)) return false;
    return true;
}

bool is_variable_name(std::string_view s) {
    if (s.size() < 2 || s[0] != 'x') return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

namespace {

enum class Tok { ident, lparen, rparen, comma, slash, colon, equals, dash, arrow, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;  // 1-based
};

struct LexFailure {
    std::size_t column;
    char c;
};

std::vector<Token> lex(std::string_view line, std::optional<LexFailure>& failure) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t col = i + 1;
        if (ident_char(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            out.push_back({Tok::ident, std::string(line.substr(i, j - i)), col});
            i = j;
            continue;
        }
        Tok kind;
        std::size_t width = 1;
        switch (c) {
            case '(': kind = Tok::lparen; break;
            case ')': kind = Tok::rparen; break;
            case ',': kind = Tok::comma; break;
            case '/': kind = Tok::slash; break;
            case ':': kind = Tok::colon; break;
            case '=': kind = Tok::equals; break;
            case '-':
                if (i + 1 < line.size() && line[i + 1] == '>') {
                    kind = Tok::arrow;
                    width = 2;
                } else {
                    kind = Tok::dash;
                }
                break;
            default:
                failure = LexFailure{col, c};
                return out;
        }
        out.push_back({kind, std::string(line.substr(i, width)), col});
        i += width;
    }
    out.push_back({Tok::end, "", line.size() + 1});
    return out;
}

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::ident: return "identifier";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::comma: return "','";
        case Tok::slash: return "'/'";
        case Tok::colon: return "':'";
        case Tok::equals: return "'='";
        case Tok::dash: return "'-'";
        case Tok::arrow: return "'->'";
        case Tok::end: return "end of line";
    }
    return "token";
}

struct Expr {
    std::string name;
    bool has_parens = false;
    std::vector<Expr> args;
    std::size_t line = 0, column = 0;
};

class Cursor {
public:
    Cursor(std::vector<Token> toks, std::size_t line) : toks_(std::move(toks)), line_(line) {}

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool at(Tok t) const { return peek().kind == t; }
    Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    Token expect(Tok t) {
        if (!at(t))
            fail(std::string("expected ") + tok_name(t) + ", found " +
                 (peek().kind == Tok::ident ? "'" + peek().text + "'" : tok_name(peek().kind)));
        return take();
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, peek().column, msg); }
    std::size_t line() const { return line_; }

    Expr expr() {
        Token id = expect(Tok::ident);
        Expr e{id.text, false, {}, line_, id.column};
        if (at(Tok::lparen)) {
            take();
            e.has_parens = true;
            if (!at(Tok::rparen)) {
                e.args.push_back(expr());
                while (at(Tok::comma)) {
                    take();
                    e.args.push_back(expr());
                }
            }
            expect(Tok::rparen);
        }
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

std::uint32_t variable_index(const Expr& e) {
    auto v = std::stoul(e.name.substr(1));
    if (v == 0 || v > 1'000'000) throw ParseError(e.line, e.column, "variable index must be between 1 and 1000000");
    return static_cast<std::uint32_t>(v);
}

// Builds all expressions of a document into one node arena so that named
// terms may refer to each other, to themselves, or forward.
class Builder {
public:
    struct Def {
        Expr expr;
        std::optional<NodeId> node;
        bool in_progress = false;
    };

    Builder(const Signature& sig, std::map<std::string, Def>& defs, const std::map<std::string, TermGraph>* outer)
        : sig_(sig), defs_(defs), outer_(outer) {}

    NodeId build(const Expr& e) {
        if (is_variable_name(e.name)) {
            if (e.has_parens) throw ParseError(e.line, e.column, "variable " + e.name + " takes no arguments");
            return push(TermNode{Label::variable(variable_index(e)), {}});
        }
        if (auto id = sig_.find(e.name)) {
            const auto arity = sig_.arity(*id);
            if (e.args.size() != arity)
                throw ParseError(e.line, e.column,
                                 "nonterminal " + e.name + " has arity " + std::to_string(arity) + " but " +
                                     std::to_string(e.args.size()) + " arguments are given");
            const NodeId self = push(TermNode{Label::nonterminal(*id), {}});
            std::vector<NodeId> kids;
            for (const auto& a : e.args) kids.push_back(build(a));
            nodes_[self].children = std::move(kids);
            return self;
        }
        if (e.has_parens) throw ParseError(e.line, e.column, "unknown nonterminal '" + e.name + "'");
        if (defs_.count(e.name)) return resolve(e.name, e);
        if (outer_) {
            auto it = outer_->find(e.name);
            if (it != outer_->end()) return splice(it->second);
        }
        throw ParseError(e.line, e.column, "unknown identifier '" + e.name + "'");
    }

    NodeId resolve(const std::string& name, const Expr& use) {
        auto& def = defs_.at(name);
        if (def.node) return *def.node;
        const Expr& body = def.expr;
        const bool alias = !is_variable_name(body.name) && !sig_.find(body.name) && !body.has_parens;
        if (!alias) {
            if (is_variable_name(body.name)) {
                def.node = build(body);
                return *def.node;
            }
            // Reserve the node before descending so cycles through it close.
            auto id = sig_.find(body.name);
            if (!id) return build(body);  // reports the error
            const auto arity = sig_.arity(*id);
            if (body.args.size() != arity)
                throw ParseError(body.line, body.column,
                                 "nonterminal " + body.name + " has arity " + std::to_string(arity) + " but " +
                                     std::to_string(body.args.size()) + " arguments are given");
            const NodeId self = push(TermNode{Label::nonterminal(*id), {}});
            def.node = self;
            std::vector<NodeId> kids;
            for (const auto& a : body.args) kids.push_back(build(a));
            nodes_[self].children = std::move(kids);
            return self;
        }
        if (def.in_progress)
            throw ParseError(use.line, use.column, "term '" + name + "' is defined only by a cycle of names");
        def.in_progress = true;
        def.node = build(body);
        def.in_progress = false;
        return *def.node;
    }

    TermGraph finish(NodeId root) const { return canonicalize(nodes_, root); }

private:
    NodeId push(TermNode n) {
        nodes_.push_back(std::move(n));
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    NodeId splice(const TermGraph& g) {
        const auto base = static_cast<NodeId>(nodes_.size());
        for (const auto& n : g.nodes()) {
            TermNode copy{n.label, {}};
            for (NodeId c : n.children) copy.children.push_back(c + base);
            nodes_.push_back(std::move(copy));
        }
        return base + g.root();
    }

    const Signature& sig_;
    std::map<std::string, Def>& defs_;
    const std::map<std::string, TermGraph>* outer_;
    std::vector<TermNode> nodes_;
};

struct PendingRule {
    std::string head;
    std::vector<Token> params;
    Token action;
    Expr rhs;
    std::size_t line;
    std::size_t column;
};

struct PendingPair {
    Expr left, right;
};

void declare_nonterminals(Cursor& cur, Grammar& g) {
    while (!cur.at(Tok::end)) {
        Token name = cur.expect(Tok::ident);
        cur.expect(Tok::slash);
        Token arity = cur.expect(Tok::ident);
        for (char c : arity.text)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError(cur.line(), arity.column, "arity must be a number");
        if (is_variable_name(name.text))
            throw ParseError(cur.line(), name.column, "'" + name.text + "' is reserved for variables");
        if (arity.text.size() > 6) throw ParseError(cur.line(), arity.column, "arity too large");
        try {
            g.add_nonterminal(name.text, static_cast<std::uint32_t>(std::stoul(arity.text)));
        } catch (const GrammarError& e) {
            throw ParseError(cur.line(), name.column, e.what());
        }
        if (!cur.at(Tok::end)) cur.expect(Tok::comma);
    }
}

void declare_actions(Cursor& cur, Grammar& g) {
    while (!cur.at(Tok::end)) {
        Token name = cur.expect(Tok::ident);
        if (name.text.find('.') != std::string::npos)
            throw ParseError(cur.line(), name.column, "action names may not contain '.'");
        if (name.text == "eps") throw ParseError(cur.line(), name.column, "'eps' denotes the empty word");
        try {
            g.add_action(name.text);
        } catch (const GrammarError& e) {
            throw ParseError(cur.line(), name.column, e.what());
        }
        if (!cur.at(Tok::end)) cur.expect(Tok::comma);
    }
}

}  // namespace

Document parse_document(std::string_view text, bool allow_extra) {
    Document doc;
    std::map<std::string, Builder::Def> defs;
    std::vector<std::pair<std::string, std::size_t>> def_order;
    std::vector<PendingRule> rules;
    std::vector<PendingPair> pairs;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        std::string_view line = raw.substr(0, raw.find('#'));
        if (line.find_first_not_of(" \t") == std::string_view::npos) {
            if (end == text.size()) break;
            continue;
        }

        std::optional<LexFailure> failure;
        auto toks = lex(line, failure);
        auto keep_extra = [&] {
            doc.extra.push_back({line_no, std::string(raw)});
        };
        if (failure) {
            if (allow_extra) {
                keep_extra();
                continue;
            }
            throw ParseError(line_no, failure->column, std::string("unexpected character '") + failure->c + "'");
        }
        Cursor cur(toks, line_no);
        const Token& first = cur.peek();
        const Token& second = cur.peek(1);
        if (first.kind == Tok::ident && second.kind == Tok::colon &&
            (first.text == "nonterminals" || first.text == "actions")) {
            cur.take();
            cur.take();
            if (first.text == "nonterminals")
                declare_nonterminals(cur, doc.grammar);
            else
                declare_actions(cur, doc.grammar);
        } else if (first.kind == Tok::ident && first.text == "term" && second.kind == Tok::ident &&
                   cur.peek(2).kind == Tok::equals) {
            cur.take();
            Token name = cur.take();
            cur.take();
            if (is_variable_name(name.text))
                throw ParseError(line_no, name.column, "'" + name.text + "' is reserved for variables");
            if (defs.count(name.text)) throw ParseError(line_no, name.column, "term '" + name.text + "' redefined");
            Expr body = cur.expr();
            cur.expect(Tok::end);
            defs.emplace(name.text, Builder::Def{std::move(body), std::nullopt, false});
            def_order.emplace_back(name.text, name.column);
            doc.term_order.push_back(name.text);
        } else if (first.kind == Tok::ident && first.text == "pair" && second.kind == Tok::lparen) {
            cur.take();
            cur.take();
            Expr l = cur.expr();
            cur.expect(Tok::comma);
            Expr r = cur.expr();
            cur.expect(Tok::rparen);
            cur.expect(Tok::end);
            pairs.push_back({std::move(l), std::move(r)});
        } else if (first.kind == Tok::ident && (second.kind == Tok::lparen || second.kind == Tok::dash) &&
                   std::any_of(toks.begin(), toks.end(), [](const Token& t) { return t.kind == Tok::arrow; })) {
            PendingRule rule{first.text, {}, {}, {}, line_no, first.column};
            cur.take();
            if (cur.at(Tok::lparen)) {
                cur.take();
                if (!cur.at(Tok::rparen)) {
                    rule.params.push_back(cur.expect(Tok::ident));
                    while (cur.at(Tok::comma)) {
                        cur.take();
                        rule.params.push_back(cur.expect(Tok::ident));
                    }
                }
                cur.expect(Tok::rparen);
            }
            cur.expect(Tok::dash);
            rule.action = cur.expect(Tok::ident);
            cur.expect(Tok::arrow);
            rule.rhs = cur.expr();
            cur.expect(Tok::end);
            rules.push_back(std::move(rule));
        } else if (allow_extra) {
            keep_extra();
        } else {
            throw ParseError(line_no, first.column, "unrecognized line");
        }
        if (end == text.size()) break;
    }

    const auto& sig = doc.grammar.signature();
    for (const auto& [name, column] : def_order)
        if (sig.find(name))
            throw ParseError(defs.at(name).expr.line, column, "term name '" + name + "' is also a nonterminal");

    Builder builder(sig, defs, nullptr);
    std::vector<std::pair<std::string, NodeId>> roots;
    for (const auto& [name, column] : def_order) roots.emplace_back(name, builder.resolve(name, defs.at(name).expr));

    for (const auto& rule : rules) {
        auto head = sig.find(rule.head);
        if (!head) throw ParseError(rule.line, rule.column, "unknown nonterminal '" + rule.head + "'");
        const auto arity = sig.arity(*head);
        if (rule.params.size() != arity)
            throw ParseError(rule.line, rule.column,
                             "rule head " + rule.head + " needs " + std::to_string(arity) + " parameters");
        for (std::size_t i = 0; i < rule.params.size(); ++i)
            if (rule.params[i].text != "x" + std::to_string(i + 1))
                throw ParseError(rule.line, rule.params[i].column,
                                 "rule parameters must be x1, x2, ... in order");
        auto action = doc.grammar.find_action(rule.action.text);
        if (!action)
            throw ParseError(rule.line, rule.action.column, "unknown action '" + rule.action.text + "'");
        TermGraph rhs = builder.finish(builder.build(rule.rhs));
        doc.grammar.add_rule(Rule{*head, *action, std::move(rhs)});
    }
    for (const auto& [name, root] : roots) doc.terms.emplace(name, builder.finish(root));
    for (const auto& p : pairs) {
        const NodeId l = builder.build(p.left);
        const NodeId r = builder.build(p.right);
        doc.pairs.emplace_back(builder.finish(l), builder.finish(r));
    }
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Document read_document(const std::string& path, bool allow_extra) {
    return parse_document(read_file(path), allow_extra);
}

TermGraph parse_term(std::string_view expr, const Document& doc) {
    std::optional<LexFailure> failure;
    auto toks = lex(expr, failure);
    if (failure) throw ParseError(1, failure->column, std::string("unexpected character '") + failure->c + "'");
    Cursor cur(std::move(toks), 1);
    Expr e = cur.expr();
    cur.expect(Tok::end);
    std::map<std::string, Builder::Def> none;
    Builder builder(doc.grammar.signature(), none, &doc.terms);
    return builder.finish(builder.build(e));
}

// ----------------------------------------------------------------- printing

std::string format_tree(const TermGraph& t, const Signature& sig) {
    if (!t.is_finite()) throw InfiniteTermError("format_tree needs a finite term");
    std::string out;
    std::function<void(NodeId)> go = [&](NodeId n) {
        const auto& node = t.node(n);
        if (node.label.is_variable()) {
            out += "x" + std::to_string(node.label.index);
            return;
        }
        out += sig.name(node.label.index);
        if (node.children.empty()) return;
        out += '(';
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (i) out += ',';
            go(node.children[i]);
        }
        out += ')';
    };
    go(t.root());
    return out;
}

std::string format_term(const TermGraph& t, const Signature& sig, const std::string& name,
                        std::vector<std::pair<std::string, std::string>>& defs) {
    std::vector<std::uint32_t> indegree(t.size(), 0);
    for (const auto& n : t.nodes())
        for (NodeId c : n.children) ++indegree[c];

    std::string base = name;
    auto collides = [&](const std::string& b) {
        for (std::size_t k = 1; k <= t.size(); ++k)
            if (sig.find(b + "." + std::to_string(k))) return true;
        return false;
    };
    while (collides(base)) base += '_';

    std::vector<std::string> ref(t.size());
    std::size_t counter = 0;
    for (NodeId n = 0; n < t.size(); ++n) {
        const auto& node = t.node(n);
        if (node.label.is_variable() || node.children.empty()) continue;
        if (n == t.root()) {
            if (indegree[n] > 0) ref[n] = name;
        } else if (indegree[n] > 1) {
            ref[n] = base + "." + std::to_string(++counter);
        }
    }

    std::function<std::string(NodeId, bool)> go = [&](NodeId n, bool expand) {
        const auto& node = t.node(n);
        if (node.label.is_variable()) return "x" + std::to_string(node.label.index);
        if (!expand && !ref[n].empty()) return ref[n];
        std::string out = sig.name(node.label.index);
        if (node.children.empty()) return out;
        out += '(';
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (i) out += ',';
            out += go(node.children[i], false);
        }
        out += ')';
        return out;
    };
    std::string main = go(t.root(), true);
    for (NodeId n = 0; n < t.size(); ++n)
        if (!ref[n].empty() && n != t.root()) defs.emplace_back(ref[n], go(n, true));
    return main;
}

std::string format_term_definition(const std::string& name, const TermGraph& t, const Signature& sig) {
    std::vector<std::pair<std::string, std::string>> defs;
    std::string out = "term " + name + " = " + format_term(t, sig, name, defs) + "\n";
    for (const auto& [n, body] : defs) out += "term " + n + " = " + body + "\n";
    return out;
}

std::string format_rule(const Grammar& g, const Rule& rule) {
    const auto& sig = g.signature();
    std::string out = sig.name(rule.head);
    const auto arity = sig.arity(rule.head);
    if (arity > 0) {
        out += '(';
        for (std::uint32_t i = 1; i <= arity; ++i) {
            if (i > 1) out += ',';
            out += "x" + std::to_string(i);
        }
        out += ')';
    }
    out += " -" + g.action_name(rule.action) + "-> " + format_tree(rule.rhs, sig);
    return out;
}

std::string format_grammar(const Grammar& g) {
    std::string out = "nonterminals:";
    const auto& sig = g.signature();
    for (NonterminalId x = 0; x < sig.size(); ++x)
        out += (x ? ", " : " ") + sig.name(x) + "/" + std::to_string(sig.arity(x));
    out += "\nactions:";
    for (ActionId a = 0; a < g.action_count(); ++a) out += (a ? ", " : " ") + g.action_name(a);
    out += "\n";
    for (const auto& rule : g.rules()) out += format_rule(g, rule) + "\n";
    return out;
}

std::string format_word(const Word& w, const Grammar& g, WordStyle style) {
    if (w.empty()) return "eps";
    bool single = style == WordStyle::human;
    for (ActionId a : w)
        if (g.action_name(a).size() != 1) single = false;
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i && !single) out += '.';
        out += g.action_name(w[i]);
    }
    return out;
}

Word parse_word(std::string_view text, const Grammar& g) {
    if (text == "eps" || text.empty()) return {};
    if (auto a = g.find_action(text)) return {*a};
    Word w;
    if (text.find('.') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('.', start);
            if (end == std::string_view::npos) end = text.size();
            auto part = text.substr(start, end - start);
            auto a = g.find_action(part);
            if (!a) throw std::invalid_argument("unknown action '" + std::string(part) + "' in word");
            w.push_back(*a);
            start = end + 1;
        }
        return w;
    }
    for (char c : text) {
        auto a = g.find_action(std::string_view(&c, 1));
        if (!a) throw std::invalid_argument("unknown action '" + std::string(1, c) + "' in word");
        w.push_back(*a);
    }
    return w;
}

}  // namespace fog
