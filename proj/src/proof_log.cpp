#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fog/deduction.hpp"

namespace fog {

namespace {

class TermNames {
public:
    explicit TermNames(const Signature& sig) : sig_(sig) {}

    const std::string& name(const TermGraph& t) {
        auto it = names_.find(t);
        if (it != names_.end()) return it->second;
        std::string n = "t" + std::to_string(names_.size());
        while (sig_.find(n)) n += "_";
        order_.push_back(t);
        return names_.emplace(t, n).first->second;
    }

    std::string definitions() const {
        std::string out;
        for (const auto& t : order_) out += format_term_definition(names_.at(t), t, sig_);
        return out;
    }

private:
    const Signature& sig_;
    std::unordered_map<TermGraph, std::string, TermGraphHash> names_;
    std::vector<TermGraph> order_;
};

std::string join_refs(const std::vector<JudgmentId>& ids, const std::map<JudgmentId, std::size_t>& number) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(number.at(ids[i]));
    }
    return out;
}

}  // namespace

std::string write_proof(const Proof& proof) {
    const Grammar& g = *proof.grammar;
    TermNames names(g.signature());
    std::ostringstream body;

    for (std::size_t k = 0; k < proof.basis.size(); ++k)
        body << "pair (" << names.name(proof.basis[k].first) << ", " << names.name(proof.basis[k].second) << ")\n";

    for (const auto& section : proof.sections) {
        JudgmentStore& s = *section.store;
        auto verdict = s.success_at(s.root());
        if (!verdict) verdict = s.fail();
        std::set<JudgmentId> needed;
        std::vector<JudgmentId> stack;
        if (verdict) stack.push_back(*verdict);
        while (!stack.empty()) {
            JudgmentId j = stack.back();
            stack.pop_back();
            if (!needed.insert(j).second) continue;
            for (JudgmentId p : s.at(j).premises) stack.push_back(p);
        }
        body << "section " << section.name << " " << names.name(s.pool().get(s.t0())) << " "
             << names.name(s.pool().get(s.u0())) << "\n";
        std::map<JudgmentId, std::size_t> number;
        for (JudgmentId j : needed) {
            const auto n = number.size() + 1;
            number[j] = n;
            const Judgment& jd = s.at(j);
            body << n << ": " << format_word(s.word(jd.word), g) << " |= ";
            switch (jd.kind) {
                case Judgment::Kind::pair:
                    body << "(" << names.name(s.pool().get(jd.left)) << ", " << names.name(s.pool().get(jd.right))
                         << ")";
                    break;
                case Judgment::Kind::success: body << "success"; break;
                case Judgment::Kind::fail: body << "fail"; break;
            }
            body << " via " << rule_name(jd.rule);
            switch (jd.rule) {
                case RuleKind::axiom: break;
                case RuleKind::basic:
                case RuleKind::symmetry:
                case RuleKind::reject: body << "[" << join_refs(jd.premises, number) << "]"; break;
                case RuleKind::limit:
                    body << "[" << join_refs(jd.premises, number) << "; E=" << names.name(s.pool().get(jd.context))
                         << ", F=" << names.name(s.pool().get(jd.replacement)) << "]";
                    break;
                case RuleKind::basis:
                    body << "[" << number.at(jd.premises[0]) << "; " << jd.basis_pair + 1 << "]";
                    break;
                case RuleKind::progress: {
                    std::vector<JudgmentId> succ(jd.premises.begin() + 1, jd.premises.end());
                    body << "[" << number.at(jd.premises[0]) << "; " << join_refs(succ, number) << "]";
                    break;
                }
            }
            body << "\n";
        }
        body << "end\n";
    }

    std::ostringstream out;
    out << "# fog proof\n" << format_grammar(g);
    if (!proof.critical.empty()) {
        out << "critical:";
        for (std::size_t i = 0; i < proof.critical.size(); ++i)
            out << (i ? ", " : " ") << g.signature().name(proof.critical[i].first) << "/"
                << g.action_name(proof.critical[i].second);
        out << "\n";
    }
    out << names.definitions() << body.str();
    return out.str();
}

// ------------------------------------------------------------------ replay

namespace {

std::string trim(std::string s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

struct Failure {
    std::string message;
};

struct Section {
    std::string name;
    std::size_t basis_index = 0;  // 1-based; 0 for main
    std::unique_ptr<JudgmentStore> store;
    std::vector<JudgmentId> numbers;  // line number - 1 -> judgment
    bool closed = false;
};

void check_critical(const Grammar& g, const std::vector<std::pair<NonterminalId, ActionId>>& critical,
                    const Basis& basis) {
    std::set<NonterminalId> ls;
    std::set<ActionId> as;
    for (const auto& [l, a] : critical) {
        const auto& name = g.signature().name(l);
        if (!ls.insert(l).second || !as.insert(a).second) throw Failure{"critical symbols must be distinct"};
        if (g.signature().arity(l) != 0) throw Failure{"critical nonterminal " + name + " must be nullary"};
        std::size_t own = 0;
        for (const auto& r : g.rules()) {
            if (r.head == l) {
                if (r.action != a || r.rhs != TermGraph::constant(l))
                    throw Failure{"critical nonterminal " + name + " may only loop on its own action"};
                ++own;
                continue;
            }
            if (r.action == a) throw Failure{"critical action " + g.action_name(a) + " is used by another rule"};
            for (const auto& n : r.rhs.nodes())
                if (n.label == Label::nonterminal(l)) throw Failure{"critical nonterminal " + name + " occurs in a rule"};
        }
        if (own != 1) throw Failure{"critical nonterminal " + name + " needs exactly one rule"};
        for (const auto& [e, f] : basis)
            for (const auto* t : {&e, &f})
                for (const auto& n : t->nodes())
                    if (n.label == Label::nonterminal(l))
                        throw Failure{"critical nonterminal " + name + " occurs in the basis"};
    }
}

}  // namespace

ReplayReport replay_proof(std::string_view text) {
    ReplayReport report;
    std::size_t current_line = 0;
    try {
        Document doc = parse_document(text, true);
        if (auto d = validate(doc.grammar); !d.empty()) throw Failure{"invalid grammar: " + d.front().message};
        auto gp = std::make_shared<const Grammar>(doc.grammar);
        const Grammar& g = *gp;
        const Basis& basis = doc.pairs;

        std::vector<std::pair<NonterminalId, ActionId>> critical;
        std::vector<Section> sections;
        Section* open = nullptr;

        static const std::regex judgment_re(
            R"(^\s*(\d+):\s*(\S+)\s*\|=\s*(\([^)]*\)|success|fail)\s+via\s+([a-z]+)(?:\[([^\]]*)\])?\s*$)");
        auto term_id = [&](JudgmentStore& s, const std::string& name) {
            if (!doc.terms.count(name)) throw Failure{"unknown term '" + name + "'"};
            return s.pool().intern(doc.terms.at(name));
        };

        for (const auto& line : doc.extra) {
            current_line = line.number;
            std::string t = trim(line.text.substr(0, line.text.find('#')));
            if (t.rfind("critical:", 0) == 0) {
                if (!sections.empty()) throw Failure{"critical declarations must precede the sections"};
                for (const auto& item : split(t.substr(9), ',')) {
                    auto slash = item.find('/');
                    if (slash == std::string::npos) throw Failure{"expected 'L/l' in critical declaration"};
                    auto l = g.signature().find(trim(item.substr(0, slash)));
                    auto a = g.find_action(trim(item.substr(slash + 1)));
                    if (!l || !a) throw Failure{"unknown symbol in critical declaration"};
                    critical.emplace_back(*l, *a);
                }
                continue;
            }
            if (t.rfind("section ", 0) == 0) {
                if (open) throw Failure{"section not closed before a new one"};
                std::istringstream in(t.substr(8));
                std::vector<std::string> parts;
                for (std::string w; in >> w;) parts.push_back(w);
                Section s;
                std::string left, right;
                if (parts.size() == 3 && parts[0] == "main") {
                    s.name = "main";
                    left = parts[1];
                    right = parts[2];
                } else if (parts.size() == 4 && parts[0] == "basis") {
                    s.basis_index = std::stoul(parts[1]);
                    if (s.basis_index == 0 || s.basis_index > basis.size()) throw Failure{"no such basis pair"};
                    s.name = "basis " + parts[1];
                    left = parts[2];
                    right = parts[3];
                } else {
                    throw Failure{"expected 'section main T U' or 'section basis k T U'"};
                }
                for (const auto& other : sections)
                    if (other.name == s.name) throw Failure{"duplicate section " + s.name};
                if (!doc.terms.count(left) || !doc.terms.count(right)) throw Failure{"unknown term in section header"};
                s.store = std::make_unique<JudgmentStore>(gp, basis, doc.terms.at(left), doc.terms.at(right));
                sections.push_back(std::move(s));
                open = &sections.back();
                continue;
            }
            if (t == "end") {
                if (!open) throw Failure{"'end' without a section"};
                open->closed = true;
                open = nullptr;
                continue;
            }
            std::smatch m;
            if (!std::regex_match(t, m, judgment_re)) throw Failure{"unrecognized line"};
            if (!open) throw Failure{"judgment outside a section"};
            JudgmentStore& s = *open->store;
            const std::size_t number = std::stoul(m[1]);
            if (number != open->numbers.size() + 1) throw Failure{"judgments must be numbered 1, 2, ... in order"};
            const Word w = parse_word(m[2].str(), g);
            const std::string conclusion = m[3];
            const std::string rule = m[4];
            const std::string args = m[5];
            auto parts = split(args, ';');
            auto refs = [&](const std::string& list) {
                std::vector<JudgmentId> out;
                for (const auto& r : split(list, ',')) {
                    if (r.empty()) continue;
                    const auto k = std::stoul(r);
                    if (k == 0 || k >= number) throw Failure{"premise " + r + " does not precede this line"};
                    out.push_back(open->numbers[k - 1]);
                }
                return out;
            };
            auto need = [&](std::size_t n_refs, const std::vector<JudgmentId>& v) {
                if (v.size() != n_refs) throw Failure{rule + " expects " + std::to_string(n_refs) + " premises"};
            };

            JudgmentId id = 0;
            if (rule == "axiom") {
                if (!args.empty()) throw Failure{"axiom takes no premises"};
                id = s.axiom();
            } else if (rule == "basic") {
                auto p = refs(parts.at(0));
                need(1, p);
                if (w.empty()) throw Failure{"basic transition needs a nonempty word"};
                id = s.basic(p[0], w.back());
            } else if (rule == "symmetry") {
                auto p = refs(parts.at(0));
                need(1, p);
                id = s.symmetry(p[0]);
            } else if (rule == "limit") {
                auto p = refs(parts.at(0));
                need(2, p);
                if (parts.size() != 2) throw Failure{"limit needs E=... and F=..."};
                std::string e, f;
                for (const auto& kv : split(parts[1], ',')) {
                    if (kv.rfind("E=", 0) == 0) e = trim(kv.substr(2));
                    if (kv.rfind("F=", 0) == 0) f = trim(kv.substr(2));
                }
                if (!doc.terms.count(e) || !doc.terms.count(f)) throw Failure{"limit: unknown E or F"};
                id = s.limit(p[0], p[1], doc.terms.at(e), doc.terms.at(f));
            } else if (rule == "basis") {
                auto p = refs(parts.at(0));
                need(1, p);
                if (parts.size() != 2) throw Failure{"basis needs a basis pair index"};
                const auto k = std::stoul(parts[1]);
                if (k == 0) throw Failure{"basis pairs are numbered from 1"};
                id = s.basis_rule(p[0], static_cast<std::uint32_t>(k - 1));
            } else if (rule == "progress") {
                auto p = refs(parts.at(0));
                need(1, p);
                id = s.progress(p[0], parts.size() > 1 ? refs(parts[1]) : std::vector<JudgmentId>{});
            } else if (rule == "reject") {
                auto p = refs(parts.at(0));
                need(1, p);
                id = s.reject(p[0]);
            } else {
                throw Failure{"unknown rule '" + rule + "'"};
            }

            const Judgment& j = s.at(id);
            if (j.word != s.node_of(w)) throw Failure{"the rule derives a judgment for a different word"};
            if (conclusion == "success" || conclusion == "fail") {
                const auto kind = conclusion == "success" ? Judgment::Kind::success : Judgment::Kind::fail;
                if (j.kind != kind) throw Failure{"the rule does not derive " + conclusion};
            } else {
                auto inner = split(conclusion.substr(1, conclusion.size() - 2), ',');
                if (inner.size() != 2) throw Failure{"expected a pair (T, U)"};
                if (j.kind != Judgment::Kind::pair || j.left != term_id(s, inner[0]) ||
                    j.right != term_id(s, inner[1]))
                    throw Failure{"the rule derives a different pair"};
            }
            open->numbers.push_back(id);
            ++report.judgments;
        }
        current_line = 0;
        if (open) throw Failure{"section " + open->name + " is not closed"};
        check_critical(g, critical, basis);

        const Section* main = nullptr;
        for (const auto& s : sections)
            if (s.name == "main") main = &s;
        report.sections = sections.size();

        auto check_basis_sections = [&] {
            CriticalExtension ext;
            for (const auto& [l, a] : critical) {
                ext.fresh.push_back(l);
                ext.fresh_actions.push_back(a);
            }
            for (std::size_t k = 0; k < basis.size(); ++k) {
                if (std::max(basis[k].first.max_variable(), basis[k].second.max_variable()) > ext.fresh.size())
                    throw Failure{"basis pair " + std::to_string(k + 1) + " has more variables than critical symbols"};
                const Section* sec = nullptr;
                for (const auto& s : sections)
                    if (s.basis_index == k + 1) sec = &s;
                if (!sec) throw Failure{"no section for basis pair " + std::to_string(k + 1)};
                const auto inst = critical_instance(ext, basis[k]);
                const auto& pool = sec->store->pool();
                if (pool.get(sec->store->t0()) != inst.first || pool.get(sec->store->u0()) != inst.second)
                    throw Failure{"section " + sec->name + " does not start from the critical instance"};
                if (!sec->store->success()) throw Failure{"section " + sec->name + " does not derive eps |= success"};
            }
        };

        if (!main) {
            if (basis.empty()) throw Failure{"no main section"};
            check_basis_sections();
            report.claim = ReplayReport::Claim::basis;
        } else if (main->store->fail()) {
            report.claim = ReplayReport::Claim::inequivalent;
        } else if (main->store->success()) {
            check_basis_sections();
            report.claim = ReplayReport::Claim::equivalent;
        } else {
            throw Failure{"the main section derives neither eps |= success nor eps |= fail"};
        }
        report.valid = true;
    } catch (const ParseError& e) {
        report.error = e.what();
        report.line = e.line();
    } catch (const Failure& f) {
        report.error = f.message;
        report.line = current_line;
    } catch (const std::exception& e) {
        report.error = e.what();
        report.line = current_line;
    }
    return report;
}

}  // namespace fog
