// fog: decision procedures for deterministic first-order grammars and DPDA.
//
// Exit status: 0 for a definitive answer, 2 for unknown or an exhausted
// budget, 1 for input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fog/bounds.hpp"
#include "fog/deduction.hpp"
#include "fog/dpda.hpp"

namespace {

using namespace fog;

constexpr int kDefinite = 0;
constexpr int kInputError = 1;
constexpr int kUnknown = 2;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Output {
    bool machine = false;

    void field(const std::string& key, const std::string& value) const {
        if (machine)
            std::cout << key << ' ' << value << '\n';
        else
            std::cout << key << ": " << value << '\n';
    }
    void headline(const std::string& human, const std::string& machine_value) const {
        if (machine)
            std::cout << "verdict " << machine_value << '\n';
        else
            std::cout << human << '\n';
    }
    std::string word(const Word& w, const Grammar& g) const {
        return format_word(w, g, machine ? WordStyle::machine : WordStyle::human);
    }
};

std::string show_term(const TermGraph& t, const Signature& sig) {
    if (t.is_finite()) return format_tree(t, sig);
    std::vector<std::pair<std::string, std::string>> defs;
    std::string out = "t where t = " + format_term(t, sig, "t", defs);
    for (const auto& [n, body] : defs) out += "; " + n + " = " + body;
    return out;
}

std::string show_pair(const TermPair& p, const Signature& sig) {
    return "(" + show_term(p.first, sig) + ", " + show_term(p.second, sig) + ")";
}

std::string side_name(Side s) { return s == Side::left ? "left" : "right"; }

Document load_grammar(const std::string& path) {
    Document doc = read_document(path);
    if (auto d = validate(doc.grammar); !d.empty()) {
        std::string msg = path + ": invalid grammar";
        for (const auto& x : d) msg += "\n  " + x.message;
        throw InputError(msg);
    }
    return doc;
}

TermGraph load_term(const std::string& expr, const Document& doc) {
    TermGraph t;
    try {
        t = parse_term(expr, doc);
    } catch (const ParseError& e) {
        throw InputError("term '" + expr + "': " + e.what());
    }
    if (auto problems = check_term(t, doc.grammar.signature()); !problems.empty())
        throw InputError("term '" + expr + "': " + problems.front());
    return t;
}

TermGraph load_ground(const std::string& expr, const Document& doc) {
    TermGraph t = load_term(expr, doc);
    if (!t.is_ground()) throw InputError("term '" + expr + "' must be ground");
    return t;
}

// Pairs from a separate file, interpreted over the grammar's declarations.
Basis load_basis(const std::string& grammar_path, const std::string& basis_path) {
    const std::string gtext = read_file(grammar_path);
    const std::string btext = read_file(basis_path);
    const auto offset = static_cast<std::size_t>(std::count(gtext.begin(), gtext.end(), '\n')) +
                        (gtext.empty() || gtext.back() == '\n' ? 0 : 1);
    try {
        return parse_document(gtext + (gtext.empty() || gtext.back() == '\n' ? "" : "\n") + btext).pairs;
    } catch (const ParseError& e) {
        if (e.line() > offset) throw ParseError(e.line() - offset, e.column(), basis_path + ": " + e.message());
        throw;
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

SaturateOptions saturate_options(std::uint32_t word_budget, std::size_t size_budget, std::size_t max_judgments) {
    SaturateOptions o;
    o.word_budget = word_budget;
    o.size_budget = size_budget;
    o.max_judgments = max_judgments;
    return o;
}

// ------------------------------------------------------------ subcommands

struct CheckArgs {
    std::string grammar, t, u, basis, proof;
    std::uint32_t rounds = 4, word_budget = 5;
    std::size_t size_budget = 24, max_judgments = 100'000, candidates = 48;
};

int run_check(const CheckArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const TermGraph t = load_ground(a.t, doc);
    const TermGraph u = load_ground(a.u, doc);
    DecideOptions o;
    o.rounds = a.rounds;
    o.initial_word_budget = a.word_budget;
    o.size_budget = a.size_budget;
    o.max_judgments = a.max_judgments;
    o.max_candidates = a.candidates;
    if (!a.basis.empty())
        o.basis = load_basis(a.grammar, a.basis);
    else if (!doc.pairs.empty())
        o.basis = doc.pairs;
    const DecideResult r = decide(doc.grammar, t, u, o);
    const Grammar& pg = r.proof ? *r.proof->grammar : doc.grammar;
    switch (r.verdict) {
        case Verdict::equivalent:
            out.headline("Equivalent", "equivalent");
            out.field("rounds", std::to_string(r.rounds_used));
            if (r.normalized) out.field("normalized", "yes");
            for (const auto& p : r.basis) out.field("basis", show_pair(p, pg.signature()));
            break;
        case Verdict::inequivalent:
            out.headline("Inequivalent", "inequivalent");
            out.field("rounds", std::to_string(r.rounds_used));
            out.field("witness", out.word(r.witness->word, doc.grammar));
            out.field("side", side_name(r.witness->side));
            break;
        case Verdict::unknown:
            out.headline("Unknown", "unknown");
            out.field("rounds", std::to_string(r.rounds_used));
            break;
    }
    if (!a.proof.empty() && r.proof) {
        write_text(a.proof, write_proof(*r.proof));
        out.field("proof", a.proof);
    }
    return r.verdict == Verdict::unknown ? kUnknown : kDefinite;
}

struct PairArgs {
    std::string grammar, t, u;
    std::uint32_t budget = 8;
};

int run_eqlevel(const PairArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const EqLevel e = eq_level(doc.grammar, load_ground(a.t, doc), load_ground(a.u, doc), a.budget);
    if (!e.finite()) {
        out.field("level", ">" + std::to_string(a.budget));
        return kUnknown;
    }
    out.field("level", std::to_string(*e.level));
    out.field("witness", out.word(e.witness->word, doc.grammar));
    out.field("side", side_name(e.witness->side));
    return kDefinite;
}

int run_offending(const PairArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const auto w = offending_search(doc.grammar, load_ground(a.t, doc), load_ground(a.u, doc), a.budget);
    if (!w) {
        out.field("witness", "none within " + std::to_string(a.budget));
        return kUnknown;
    }
    out.field("witness", out.word(w->word, doc.grammar));
    out.field("length", std::to_string(w->word.size()));
    out.field("side", side_name(w->side));
    return kDefinite;
}

int run_normalize(const std::string& path) {
    const Document doc = load_grammar(path);
    const NormalForm nf = normalize(doc.grammar);
    std::cout << format_grammar(nf.grammar);
    for (const auto& name : doc.term_order)
        std::cout << format_term_definition(name, nf.transf(doc.terms.at(name)), nf.grammar.signature());
    for (const auto& [e, f] : doc.pairs) {
        std::vector<std::pair<std::string, std::string>> defs;
        const auto& sig = nf.grammar.signature();
        if (!nf.transf(e).is_finite() || !nf.transf(f).is_finite())
            throw InputError("pairs with cyclic terms cannot be written inline");
        std::cout << "pair (" << format_tree(nf.transf(e), sig) << ", " << format_tree(nf.transf(f), sig) << ")\n";
    }
    return kDefinite;
}

struct DpdaArgs {
    std::string path;
    std::vector<std::string> pair;
    bool endmarker = false;
};

int run_from_dpda(const DpdaArgs& a) {
    Dpda m = read_dpda(a.path);
    require_valid(m);
    if (a.endmarker) m = add_endmarker(m);
    std::vector<Config> configs;
    for (const auto& c : a.pair) configs.push_back(parse_config(c, m));
    const CompiledDpda c = compile(complete(to_eps_popping(m)));
    std::cout << format_grammar(c.grammar);
    const char* names[] = {"T", "U"};
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::string name = names[i];
        while (c.grammar.signature().find(name)) name += "_";
        std::cout << format_term_definition(name, translate_config(c, configs[i]), c.grammar.signature());
    }
    return kDefinite;
}

struct VerifyArgs {
    std::string grammar, basis, proof;
    std::uint32_t word_budget = 6;
    std::size_t size_budget = 24, max_judgments = 100'000;
};

int run_verify_basis(const VerifyArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const Basis basis = a.basis.empty() ? doc.pairs : load_basis(a.grammar, a.basis);
    const BasisCheck r = verify_basis(doc.grammar, basis, saturate_options(a.word_budget, a.size_budget, a.max_judgments));
    const Basis full = with_identity(basis);
    switch (r.verdict) {
        case BasisVerdict::verified:
            out.headline("Verified", "verified");
            out.field("pairs", std::to_string(full.size()));
            break;
        case BasisVerdict::refuted:
            out.headline("Refuted", "refuted");
            out.field("pair", show_pair(full[*r.refuted_pair], doc.grammar.signature()));
            out.field("witness", out.word(r.witness->word, *r.proof.grammar));
            out.field("side", side_name(r.witness->side));
            break;
        case BasisVerdict::unknown:
            out.headline("Unknown", "unknown");
            if (r.status.word_budget_hit) out.field("budget", "word");
            if (r.status.size_budget_hit) out.field("budget", "size");
            if (r.status.judgment_budget_hit) out.field("budget", "judgments");
            break;
    }
    if (r.verdict == BasisVerdict::verified && !a.proof.empty()) {
        write_text(a.proof, write_proof(r.proof));
        out.field("proof", a.proof);
    }
    return r.verdict == BasisVerdict::unknown ? kUnknown : kDefinite;
}

int run_replay(const std::string& path, const Output& out) {
    const ReplayReport r = replay_proof(read_file(path));
    if (!r.valid) {
        std::cerr << "error: " << path;
        if (r.line) std::cerr << ":" << r.line;
        std::cerr << ": " << r.error << '\n';
        out.headline("Invalid", "invalid");
        return kInputError;
    }
    out.headline("Valid", "valid");
    const char* claim = r.claim == ReplayReport::Claim::equivalent     ? "equivalent"
                        : r.claim == ReplayReport::Claim::inequivalent ? "inequivalent"
                                                                       : "basis";
    out.field("claim", claim);
    out.field("sections", std::to_string(r.sections));
    out.field("judgments", std::to_string(r.judgments));
    return kDefinite;
}

struct BalanceArgs {
    std::string grammar, t, b, word, side = "left";
};

int run_balance(const BalanceArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const Grammar& g = doc.grammar;
    const ExposureTable table = exposing_table(g);
    if (!table.normal_form()) throw InputError("balancing needs a grammar in normal form; run 'fog normalize' first");
    const Side side = a.side == "right" ? Side::right : Side::left;
    const TermGraph t = load_ground(a.t, doc);
    const TermGraph b = load_ground(a.b, doc);
    const auto m0 = static_cast<std::uint32_t>(table.m0);

    Word v;
    if (!a.word.empty()) {
        v = parse_word(a.word, g);
    } else {
        // Lexicographically least word of length M0 giving a valid segment.
        std::vector<Word> layer{Word{}};
        for (std::uint32_t k = 0; k < m0; ++k) {
            std::vector<Word> next;
            for (const auto& w : layer)
                for (ActionId x = 0; x < g.action_count(); ++x) {
                    Word e = w;
                    e.push_back(x);
                    if (enables(g, t, e)) next.push_back(std::move(e));
                }
            layer = std::move(next);
        }
        bool found = false;
        for (const auto& w : layer) {
            try {
                balance_result(g, table, t, b, w, Side::left, true);
                v = w;
                found = true;
                break;
            } catch (const BalanceError&) {
            }
        }
        if (!found) throw InputError("no balancing segment of length M0 = " + std::to_string(m0));
    }

    BalanceResult r;
    try {
        r = balance_result(g, table, t, b, v, side, true);
    } catch (const BalanceError& e) {
        throw InputError(e.what());
    }
    JudgmentStore store(std::make_shared<const Grammar>(g), with_identity({}), side == Side::left ? t : b,
                        side == Side::left ? b : t);
    const JudgmentId j = derive_balance(store, table, store.axiom(), v, side);
    const auto& sig = g.signature();
    out.field("m0", std::to_string(m0));
    out.field("word", out.word(v, g));
    out.field("side", side_name(side));
    out.field("G", show_term(r.g_head, sig));
    out.field("F", show_term(r.f_head, sig));
    for (std::size_t i = 0; i < r.f_i.size(); ++i) out.field("F" + std::to_string(i + 1), show_term(r.f_i[i], sig));
    out.field("tails", std::to_string(r.tails.size()));
    out.field("result", show_pair({r.left, r.right}, sig));
    const bool derived =
        store.at(j).left == store.pool().intern(r.left) && store.at(j).right == store.pool().intern(r.right);
    out.field("derived", derived ? "yes" : "no");
    return kDefinite;
}

struct BoundsArgs {
    std::string grammar, t, u;
};

int run_bounds(const BoundsArgs& a, const Output& out) {
    const Document doc = load_grammar(a.grammar);
    const GrammarConstants c = constants(doc.grammar);
    out.field("M0", c.m0.str());
    out.field("M1", c.m1.str());
    out.field("M2", c.m2.str());
    out.field("M3", c.m3.str());
    TermGraph t, u;
    if (!a.t.empty()) t = load_ground(a.t, doc);
    if (!a.u.empty()) u = load_ground(a.u, doc);
    const std::uint64_t s = input_size(doc.grammar, t, u);
    const TowerBound bound = eq_level_upper_bound(s);
    out.field("input-size", std::to_string(s));
    out.field("tower-height", bound.height_expression());
    return kDefinite;
}

struct ZiminArgs {
    std::string check;
    std::uint32_t type = 1;
    bool subword = false;
    std::vector<std::uint64_t> f;
    bool original = false;
    std::vector<std::string> yield;
};

int run_zimin(const ZiminArgs& a, const Output& out) {
    if (!a.f.empty()) {
        if (a.f.size() != 2) throw InputError("--f takes H and N");
        const auto r = a.original ? Recursion::original : Recursion::corrected;
        out.field("f", f_h(a.f[0], static_cast<std::uint32_t>(a.f[1]), r).str());
        return kDefinite;
    }
    if (!a.yield.empty()) {
        const auto u = prefix_yield(a.yield);
        for (std::size_t i = 0; i < u.size(); ++i) out.field("u" + std::to_string(i + 1), u[i]);
        return kDefinite;
    }
    const std::string w = a.check == "eps" ? "" : a.check;
    auto report = [&](const TypePresentation& p) {
        for (std::size_t i = 0; i < p.v.size(); ++i) out.field("v" + std::to_string(i + 1), p.v[i]);
    };
    if (a.subword) {
        const auto occ = find_type_n_subword(w, a.type);
        out.field("contains", occ ? "yes" : "no");
        if (occ) {
            out.field("start", std::to_string(occ->start));
            out.field("subword", occ->presentation.w.empty() ? "eps" : occ->presentation.w.back());
            report(occ->presentation);
        }
        return kDefinite;
    }
    const auto p = find_type_n(w, a.type);
    out.field("type", p ? "yes" : "no");
    if (p) report(*p);
    return kDefinite;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equivalence of deterministic first-order grammars and DPDA"};
    app.require_subcommand(1);
    std::string format = "human";
    app.add_option("--format", format, "Output style")->check(CLI::IsMember({"human", "machine"}));

    CheckArgs check;
    auto* c_check = app.add_subcommand("check", "Decide trace equivalence of two terms");
    c_check->add_option("grammar", check.grammar)->required();
    c_check->add_option("T", check.t)->required();
    c_check->add_option("U", check.u)->required();
    c_check->add_option("--rounds", check.rounds);
    c_check->add_option("--word-budget", check.word_budget, "Initial word budget, doubled per round");
    c_check->add_option("--size-budget", check.size_budget);
    c_check->add_option("--max-judgments", check.max_judgments);
    c_check->add_option("--candidates", check.candidates, "Cap on enumerated basis pairs");
    c_check->add_option("--basis", check.basis, "File with pair lines");
    c_check->add_option("--proof", check.proof, "Write the proof log here");

    PairArgs eq;
    auto* c_eq = app.add_subcommand("eqlevel", "Eq-level up to a bound");
    c_eq->add_option("grammar", eq.grammar)->required();
    c_eq->add_option("T", eq.t)->required();
    c_eq->add_option("U", eq.u)->required();
    c_eq->add_option("--max-k", eq.budget);

    PairArgs off;
    auto* c_off = app.add_subcommand("offending", "Shortest offending word within a budget");
    c_off->add_option("grammar", off.grammar)->required();
    c_off->add_option("T", off.t)->required();
    c_off->add_option("U", off.u)->required();
    c_off->add_option("--budget", off.budget);

    std::string norm_path;
    auto* c_norm = app.add_subcommand("normalize", "Drop unexposable successors");
    c_norm->add_option("grammar", norm_path)->required();

    DpdaArgs dpda;
    auto* c_dpda = app.add_subcommand("from-dpda", "Compile a DPDA into a grammar");
    c_dpda->add_option("dpda", dpda.path)->required();
    c_dpda->add_option("--pair", dpda.pair, "Two configurations, e.g. p:A q:BA")->expected(2);
    c_dpda->add_flag("--endmarker", dpda.endmarker, "Add the $ endmarker for accepting states");

    VerifyArgs verify;
    auto* c_verify = app.add_subcommand("verify-basis", "Prove every critical instance of a basis");
    c_verify->add_option("grammar", verify.grammar)->required();
    c_verify->add_option("--basis", verify.basis, "File with pair lines (default: pairs in the grammar file)");
    c_verify->add_option("--word-budget", verify.word_budget);
    c_verify->add_option("--size-budget", verify.size_budget);
    c_verify->add_option("--max-judgments", verify.max_judgments);
    c_verify->add_option("--proof", verify.proof);

    std::string replay_path;
    auto* c_replay = app.add_subcommand("replay", "Re-check a proof log");
    c_replay->add_option("proof", replay_path)->required();

    BalanceArgs bal;
    auto* c_bal = app.add_subcommand("balance", "Bal-result of a balancing segment");
    c_bal->add_option("grammar", bal.grammar)->required();
    c_bal->add_option("T", bal.t, "The non-sinking term")->required();
    c_bal->add_option("B", bal.b, "The pivot")->required();
    c_bal->add_option("v", bal.word, "Word of length M0 (default: least valid one)");
    c_bal->add_option("--side", bal.side)->check(CLI::IsMember({"left", "right"}));

    BoundsArgs bounds;
    auto* c_bounds = app.add_subcommand("bounds", "Grammar constants and the eq-level bound");
    c_bounds->add_option("grammar", bounds.grammar)->required();
    c_bounds->add_option("T", bounds.t);
    c_bounds->add_option("U", bounds.u);

    ZiminArgs zimin;
    auto* c_zimin = app.add_subcommand("zimin", "Type-n words, f_h and prefix yields");
    c_zimin->add_option("--check", zimin.check, "Word to test ('eps' for the empty word)");
    c_zimin->add_option("--type", zimin.type);
    c_zimin->add_flag("--subword", zimin.subword, "Look for a type-n subword instead");
    c_zimin->add_option("--f", zimin.f, "H N: evaluate f_H(N)")->expected(2);
    c_zimin->add_flag("--original", zimin.original, "Use the uncorrected recursion for --f");
    c_zimin->add_option("--prefix-yield", zimin.yield, "Words v1 .. v(n+1)")->expected(2, 64);

    CLI11_PARSE(app, argc, argv);
    const Output out{format == "machine"};

    try {
        if (*c_check) return run_check(check, out);
        if (*c_eq) return run_eqlevel(eq, out);
        if (*c_off) return run_offending(off, out);
        if (*c_norm) return run_normalize(norm_path);
        if (*c_dpda) return run_from_dpda(dpda);
        if (*c_verify) return run_verify_basis(verify, out);
        if (*c_replay) return run_replay(replay_path, out);
        if (*c_bal) return run_balance(bal, out);
        if (*c_bounds) return run_bounds(bounds, out);
        if (*c_zimin) return run_zimin(zimin, out);
    } catch (const ParseError& e) {
        std::cerr << "error: line " << e.line() << ", column " << e.column() << ": " << e.message() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
