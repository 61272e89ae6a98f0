// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every criterion is exact; the runtime limits are part of the gate.

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "fog/bounds.hpp"
#include "fog/deduction.hpp"
#include "fog/dpda.hpp"
#include "support/oracle.hpp"
#include "support/random.hpp"

using namespace fog;
using namespace fogtest;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first violation: " << what << "; ";
        pass = pass && ok;
    }
};

// Related pairs: identical, sharing a d-prefix, or independent.
std::pair<TermGraph, TermGraph> random_pair(Rng& rng, const Signature& sig) {
    const TermGraph t = random_ground_term(rng, sig, 3);
    const int kind = uniform(rng, 0, 9);
    if (kind == 0) return {t, t};
    if (kind <= 5) {
        const PrefixForm p = d_prefix(t, static_cast<std::uint32_t>(uniform(rng, 1, 2)));
        std::vector<TermGraph> tails;
        for (std::size_t i = 0; i < p.tails.size(); ++i) tails.push_back(random_ground_term(rng, sig, 2));
        return {t, instantiate(p.head, tails)};
    }
    return {t, random_ground_term(rng, sig, 3)};
}

// Largest k <= cap with t ~k u.
std::uint32_t capped_level(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t cap) {
    const EqLevel e = eq_level(g, t, u, cap);
    return e.finite() ? *e.level : cap;
}

bool distinguishes(const Grammar& g, const TermGraph& t, const TermGraph& u, const Word& w) {
    return enables(g, t, w) != enables(g, u, w);
}

// ----------------------------------------------------------------- 1

void sim_k_oracle(Outcome& o) {
    Rng rng(1001);
    std::size_t checks = 0, differing = 0;
    for (int n = 0; n < 1000; ++n) {
        const Grammar g = random_grammar(rng);
        for (int j = 0; j < 2; ++j) {
            const auto [t, u] = random_pair(rng, g.signature());
            for (std::uint32_t k = 0; k <= 6; ++k) {
                const bool expected = traces_upto(g, t, k) == traces_upto(g, u, k);
                o.require(sim_k(g, t, u, k) == expected, "sim_k disagrees with traces_upto");
                ++checks;
                differing += !expected;
            }
        }
    }
    o.require(differing > 500, "too few inequivalent checks");
    o.detail << "1000 grammars, " << checks << " checks, " << differing << " with differing traces";
}

// ----------------------------------------------------------------- 2

void eq_level_coherence(Outcome& o) {
    Rng rng(1002);
    std::size_t finite = 0, exhaustive = 0;
    for (int n = 0; n < 3000; ++n) {
        const Grammar g = random_grammar(rng);
        const auto [t, u] = random_pair(rng, g.signature());
        const EqLevel e = eq_level(g, t, u, 8);
        if (!e.finite()) continue;
        ++finite;
        const std::uint32_t k = *e.level;
        if (!e.witness) {
            o.require(false, "finite level without witness");
            continue;
        }
        const Word& w = e.witness->word;
        o.require(w.size() == k + 1, "witness length is not k+1");
        o.require(enables(g, t, w) == (e.witness->side == Side::left), "left side stepping");
        o.require(enables(g, u, w) == (e.witness->side == Side::right), "right side stepping");
        if (k <= 4) {
            ++exhaustive;
            for (const auto& x : all_words(g.action_count(), k))
                o.require(!distinguishes(g, t, u, x), "a word of length <= k distinguishes");
        }
    }
    o.require(finite > 300, "too few finite levels");
    o.detail << finite << " finite levels, " << exhaustive << " checked exhaustively";
}

// ----------------------------------------------------------------- 3

bool has_arguments(const Signature& sig) {
    for (NonterminalId x = 0; x < sig.size(); ++x)
        if (sig.arity(x) > 0) return true;
    return false;
}

// Finite non-variable term over x1..vars containing x_must; the signature
// needs a symbol of positive arity.
TermGraph random_context(Rng& rng, const Signature& sig, VarIndex vars, VarIndex must) {
    for (;;) {
        const TermGraph e = random_finite_term(rng, sig, 2, vars, 0.35);
        if (e.contains_variable(must) && !e.is_variable()) return e;
    }
}

void congruence(Outcome& o) {
    Rng rng(1003);
    const std::uint32_t cap = 5;
    std::size_t nontrivial[3] = {0, 0, 0};
    auto grammar = [&] {
        for (;;)
            if (Grammar g = random_grammar(rng); has_arguments(g.signature())) return g;
    };

    // T ~k T' implies E(T) ~k E(T').
    for (int n = 0; n < 500; ++n) {
        const Grammar g = grammar();
        const auto [t, t2] = random_pair(rng, g.signature());
        const std::uint32_t k = capped_level(g, t, t2, cap);
        const TermGraph e = random_context(rng, g.signature(), 1, 1);
        nontrivial[0] += k > 0;
        o.require(sim_k(g, instantiate(e, std::vector{t}), instantiate(e, std::vector{t2}), k), "E(T) ~k E(T')");
    }

    // T ~k F(T), F != x1, implies T ~k F limit x1.
    for (int n = 0; n < 500; ++n) {
        const Grammar g = grammar();
        const TermGraph t = random_ground_term(rng, g.signature(), 3);
        const TermGraph f = random_context(rng, g.signature(), 1, 1);
        const std::uint32_t k = capped_level(g, t, instantiate(f, std::vector{t}), cap);
        nontrivial[1] += k > 0;
        o.require(sim_k(g, t, limit_substitute(f, 1), k), "T ~k F limit x1");
    }

    // Ti ~k H(T1, T2), H != xi, implies Ti ~k H limit xi (T1, T2).
    for (int n = 0; n < 500; ++n) {
        const Grammar g = grammar();
        const std::vector<TermGraph> ts{random_ground_term(rng, g.signature(), 3),
                                        random_ground_term(rng, g.signature(), 3)};
        const auto i = static_cast<VarIndex>(uniform(rng, 1, 2));
        const TermGraph h = random_context(rng, g.signature(), 2, i);
        const std::uint32_t k = capped_level(g, ts[i - 1], instantiate(h, ts), cap);
        nontrivial[2] += k > 0;
        const TermGraph lim = limit_substitute(h, i);
        o.require(!lim.contains_variable(i), "limit keeps x_i");
        o.require(sim_k(g, ts[i - 1], instantiate(lim, ts), k), "Ti ~k H limit xi");
    }
    o.require(nontrivial[0] > 100 && nontrivial[1] > 50 && nontrivial[2] > 50, "too few instances with k > 0");
    o.detail << "3 x 500 instances; with k > 0: " << nontrivial[0] << ", " << nontrivial[1] << ", " << nontrivial[2];
}

// ----------------------------------------------------------------- 4

void normal_form(Outcome& o) {
    Rng rng(1004);
    int grammars = 0;
    while (grammars < 300) {
        const Grammar g = random_grammar(rng);
        if (exposing_table(g).normal_form()) continue;
        ++grammars;
        const NormalForm nf = normalize(g);
        o.require(exposing_table(nf.grammar).normal_form(), "result is not in normal form");
        for (int j = 0; j < 2; ++j) {
            const TermGraph t = random_ground_term(rng, g.signature(), 3);
            o.require(traces_upto(g, t, 6) == traces_upto(nf.grammar, nf.transf(t), 6), "traces differ after transf");
        }
    }
    o.detail << grammars << " grammars with unexposable successors, k = 6";
}

// ----------------------------------------------------------------- 5

void dpda_end_to_end(Outcome& o) {
    Rng rng(1005);
    std::size_t equal = 0, different = 0;
    auto cut = [](const std::set<Word>& s, std::size_t len) {
        std::set<Word> out;
        for (const auto& w : s)
            if (w.size() <= len) out.insert(w);
        return out;
    };
    for (int n = 0; n < 300; ++n) {
        const Dpda m = random_dpda(rng);
        const Dpda e = to_eps_popping(m);
        const Dpda full = complete(e);
        const CompiledDpda c = compile(full);
        for (int j = 0; j < 3; ++j) {
            const Config c1 = random_config(rng, m, 3);
            Config c2 = chance(rng, 0.3) ? c1 : random_config(rng, m, 3);
            if (chance(rng, 0.3) && !c2.stack.empty()) c2.stack.back() = c1.stack.empty() ? 0 : c1.stack.back();

            // Silent popping and completion keep the language.
            o.require(dpda_traces(m, c1, 5) == dpda_enabled_upto(e, c1, 5), "eps-popping changed traces");
            o.require(dpda_language(m, c1, 5) == dpda_accepted_upto(full, c1, 5), "completion changed the language");
            const auto before = dpda_enabled_upto(e, c1, 5);
            const auto after = dpda_enabled_upto(full, c1, 5);
            for (const auto& w : before) o.require(after.count(w) > 0, "completion disabled a word");

            // On the complete machine, words of length <= 5 are enabled alike
            // iff the languages agree up to length 4.
            const bool lang = cut(dpda_language(m, c1, 5), 4) == cut(dpda_language(m, c2, 5), 4);
            const bool sim = sim_k(c.grammar, translate_config(c, c1), translate_config(c, c2), 5);
            o.require(lang == sim, "language prefix equality differs from sim_5");
            o.require(sim == (dpda_enabled_upto(full, c1, 5) == dpda_enabled_upto(full, c2, 5)),
                      "sim_5 differs from enabled words");
            lang ? ++equal : ++different;
        }
    }
    o.require(equal > 50 && different > 50, "unbalanced sample");
    o.detail << "300 automata, " << equal << " equal and " << different << " different pairs";
}

// ----------------------------------------------------------------- 6

struct Scratch {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("fog_acceptance_" + std::to_string(::getpid()));
    Scratch() { std::filesystem::create_directories(dir); }
    ~Scratch() { std::filesystem::remove_all(dir); }
};

std::pair<int, std::string> run_cli(const std::string& args) {
    const std::string cmd = std::string(FOG_CLI_PATH) + " " + args + " 2>&1";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

struct Instance {
    Grammar g;
    TermGraph t, u;
};

std::vector<Instance> crafted_equivalent() {
    std::vector<Instance> out;
    const char* text =
        "nonterminals: A/1, B/1, Z/0, C/2, D/2\nactions: a, b\n"
        "A(x1) -a-> A(A(x1))\nA(x1) -b-> x1\nB(x1) -a-> B(B(x1))\nB(x1) -b-> x1\nZ -a-> Z\n"
        "C(x1,x2) -a-> C(x2,x1)\nC(x1,x2) -b-> x1\nD(x1,x2) -a-> D(x2,x1)\nD(x1,x2) -b-> x1\n";
    const Document d = parse_document(text);
    out.push_back({d.grammar, parse_term("A(Z)", d), parse_term("B(Z)", d)});
    out.push_back({d.grammar, parse_term("A(A(Z))", d), parse_term("B(B(Z))", d)});
    out.push_back({d.grammar, parse_term("C(Z,A(Z))", d), parse_term("D(Z,B(Z))", d)});
    return out;
}

void deduction_soundness(Outcome& o) {
    Rng rng(1006);
    Scratch scratch;
    std::vector<Instance> instances = crafted_equivalent();
    for (int n = 0; n < 300; ++n) {
        GrammarShape shape;
        shape.max_nonterminals = 2;
        Grammar g = random_grammar(rng, shape);
        auto [t, u] = random_pair(rng, g.signature());
        instances.push_back({std::move(g), t, u});
    }
    std::size_t eq = 0, neq = 0, logs = 0;
    for (std::size_t n = 0; n < instances.size(); ++n) {
        const auto& [g, t, u] = instances[n];
        DecideOptions opt;
        opt.rounds = 3;
        opt.initial_word_budget = 4;
        opt.max_judgments = 20'000;
        const DecideResult r = decide(g, t, u, opt);
        if (r.verdict == Verdict::unknown) continue;
        if (r.verdict == Verdict::inequivalent) {
            ++neq;
            o.require(r.witness.has_value(), "inequivalent without witness");
            if (r.witness) {
                o.require(distinguishes(g, t, u, r.witness->word), "witness does not distinguish");
                o.require(enables(g, t, r.witness->word) == (r.witness->side == Side::left), "witness side");
            }
        } else {
            ++eq;
            o.require(sim_k(g, t, u, 8), "equivalent pair is not ~8");
            const Grammar work = r.normalized ? normalize(g).grammar : g;
            SaturateOptions so;
            so.word_budget = opt.initial_word_budget << (r.rounds_used - 1);
            so.size_budget = opt.size_budget + 8 * (r.rounds_used - 1);
            so.max_judgments = opt.max_judgments;
            const BasisCheck check = verify_basis(work, r.basis, so);
            o.require(check.verdict == BasisVerdict::verified, "shipped basis does not verify");
        }
        if (!r.proof) {
            o.require(false, "definitive answer without proof");
            continue;
        }
        const auto path = scratch.dir / ("p" + std::to_string(n) + ".log");
        std::ofstream(path) << write_proof(*r.proof);
        const auto [status, out] = run_cli("replay " + path.string());
        ++logs;
        o.require(status == 0 && out.rfind("Valid", 0) == 0, "fog replay rejected a log");
        const bool claims_eq = out.find("claim: equivalent") != std::string::npos;
        o.require(claims_eq == (r.verdict == Verdict::equivalent), "replayed claim differs from verdict");
    }
    o.require(eq >= 20 && neq >= 20, "too few definitive answers");
    o.detail << instances.size() << " instances, " << eq << " equivalent, " << neq << " inequivalent, " << logs
             << " logs replayed by the CLI";
}

// ----------------------------------------------------------------- 7

// Two cycles reading the same periodic word, the second unrolled m times,
// with matching exits into two separate sinks.
Instance loop_instance(Rng& rng) {
    Grammar g;
    const int actions = uniform(rng, 1, 3);
    for (int a = 0; a < actions; ++a) g.add_action(std::string(1, static_cast<char>('a' + a)));
    const int len = uniform(rng, 1, 3);
    const int unroll = uniform(rng, 1, 2);
    std::vector<ActionId> cycle;
    std::vector<std::optional<ActionId>> exits;
    for (int i = 0; i < len; ++i) {
        cycle.push_back(static_cast<ActionId>(uniform(rng, 0, actions - 1)));
        const auto e = static_cast<ActionId>(uniform(rng, 0, actions - 1));
        exits.push_back(e != cycle.back() && chance(rng, 0.5) ? std::optional(e) : std::nullopt);
    }
    const auto s1 = g.add_nonterminal("S", 0);
    const auto s2 = g.add_nonterminal("Sp", 0);
    std::vector<NonterminalId> p, q;
    for (int i = 0; i < len; ++i) p.push_back(g.add_nonterminal("P" + std::to_string(i), 0));
    for (int i = 0; i < len * unroll; ++i) q.push_back(g.add_nonterminal("Q" + std::to_string(i), 0));
    auto k = [](NonterminalId x) { return TermGraph::constant(x); };
    g.add_rule({s1, 0, k(s1)});
    g.add_rule({s2, 0, k(s2)});
    auto wire = [&](const std::vector<NonterminalId>& ring, NonterminalId sink) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            g.add_rule({ring[i], cycle[i % len], k(ring[(i + 1) % ring.size()])});
            if (exits[i % len]) g.add_rule({ring[i], *exits[i % len], k(sink)});
        }
    };
    wire(p, s1);
    wire(q, s2);
    return {g, k(p[0]), k(q[0])};
}

bool uses_rule(const JudgmentStore& s, RuleKind r) {
    for (JudgmentId j = 0; j < s.size(); ++j)
        if (s.at(j).rule == r) return true;
    return false;
}

void completeness_smoke(Outcome& o) {
    Rng rng(1007);
    const Basis identity = with_identity({});
    std::size_t a = 0, b = 0, c = 0;
    for (int n = 0; n < 100; ++n) {
        const Grammar g = random_grammar(rng);
        const TermGraph t = random_ground_term(rng, g.signature(), 3);
        const DecideResult r = decide(g, t, t, DecideOptions{});
        o.require(r.verdict == Verdict::equivalent && r.rounds_used == 1 && r.basis == identity,
                  "(a) equal pair not settled in round 1 with the identity basis");
        ++a;
    }
    for (int n = 0; n < 100; ++n) {
        const Instance in = loop_instance(rng);
        // The longest loop closes after 6 steps.
        DecideOptions opt;
        opt.rounds = 1;
        opt.initial_word_budget = 8;
        const DecideResult r = decide(in.g, in.t, in.u, opt);
        const bool ok = r.verdict == Verdict::equivalent && r.basis == identity && r.proof &&
                        uses_rule(*r.proof->sections.at(0).store, RuleKind::limit);
        o.require(ok, "(b) self-loop pair not closed by a repeat");
        ++b;
    }
    for (int n = 0; n < 400; ++n) {
        const Grammar g = random_grammar(rng);
        const auto [t, u] = random_pair(rng, g.signature());
        const EqLevel e = eq_level(g, t, u, 4);
        if (!e.finite()) continue;
        DecideOptions opt;
        opt.rounds = 1;
        opt.initial_word_budget = 5;
        const DecideResult r = decide(g, t, u, opt);
        o.require(r.verdict == Verdict::inequivalent && r.witness && r.witness->word.size() == *e.level + 1,
                  "(c) eq-level <= 4 pair not refuted with budget 5");
        ++c;
    }
    o.detail << "(a) " << a << " equal pairs, (b) " << b << " loop pairs, (c) " << c << " pairs with level <= 4";
}

// ----------------------------------------------------------------- 8

void critical_instances_check(Outcome& o) {
    Rng rng(1008);
    std::size_t compared = 0, strict = 0;
    for (int n = 0; n < 300; ++n) {
        const Grammar g = random_grammar(rng);
        const auto vars = static_cast<VarIndex>(uniform(rng, 1, 2));
        TermGraph e, f;
        for (;;) {
            e = random_finite_term(rng, g.signature(), 2, vars, 0.35);
            f = random_finite_term(rng, g.signature(), 2, vars, 0.35);
            bool all = true;
            for (VarIndex i = 1; i <= vars; ++i) all = all && (e.contains_variable(i) || f.contains_variable(i));
            if (all) break;
        }
        std::vector<TermGraph> ts;
        for (VarIndex i = 0; i < vars; ++i) ts.push_back(random_ground_term(rng, g.signature(), 2));
        const CriticalExtension ext = critical_instances(g, {{e, f}});
        const auto& [ce, cf] = ext.instances.at(0);
        const EqLevel crit = eq_level(ext.grammar, ce, cf, 6);
        const EqLevel ground = eq_level(ext.grammar, instantiate(e, ts), instantiate(f, ts), 6);
        if (!crit.finite() || !ground.finite()) continue;
        ++compared;
        strict += *crit.level < *ground.level;
        o.require(*crit.level <= *ground.level, "critical instance has a larger eq-level");
    }
    o.require(compared > 50, "too few comparable triples");
    o.detail << "300 triples, " << compared << " with both levels finite, " << strict << " strictly smaller";
}

// ----------------------------------------------------------------- 9

BigInt power(std::uint64_t b, std::uint64_t e) {
    BigInt r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r *= b;
    return r;
}

void balancing(Outcome& o) {
    Rng rng(1009);
    std::size_t segments = 0;
    for (int n = 0; n < 200; ++n) {
        GrammarShape shape;
        shape.max_nonterminals = 3;
        const NormalForm nf = normalize(random_grammar(rng, shape));
        auto g = std::make_shared<const Grammar>(nf.grammar);
        const auto table = exposing_table(*g);
        if (table.m0 > 4) continue;
        const auto m0 = static_cast<std::uint32_t>(table.m0);
        std::uint32_t arity = 0;
        for (NonterminalId x = 0; x < g->signature().size(); ++x) arity = std::max(arity, g->signature().arity(x));
        const auto head_cap = m0 + bound_inc(*g, m0);

        // A pair sharing a deep prefix, optionally advanced by one action.
        const TermGraph t0 = random_ground_term(rng, g->signature(), 3);
        const PrefixForm p = d_prefix(t0, m0 + 1);
        std::vector<TermGraph> tails;
        for (std::size_t i = 0; i < p.tails.size(); ++i) tails.push_back(random_ground_term(rng, g->signature(), 2));
        const TermGraph u0 = chance(rng, 0.7) ? instantiate(p.head, tails) : random_ground_term(rng, g->signature(), 3);
        JudgmentStore probe(g, with_identity({}), t0, u0);
        JudgmentId premise = probe.axiom();
        Word u;
        if (chance(rng, 0.5) && probe.lts().sim1(probe.at(premise).left, probe.at(premise).right)) {
            const auto a = static_cast<ActionId>(uniform(rng, 0, static_cast<int>(g->action_count()) - 1));
            if (step(*g, t0, a)) {
                premise = probe.basic(premise, a);
                u.push_back(a);
            }
        }
        const TermGraph l = probe.pool().get(probe.at(premise).left);
        const TermGraph r = probe.pool().get(probe.at(premise).right);

        for (const Side side : {Side::left, Side::right}) {
            for (const auto& v : all_words(g->action_count(), m0)) {
                if (v.size() != m0) continue;
                JudgmentStore s(g, with_identity({}), t0, u0);
                JudgmentId j = s.axiom();
                if (!u.empty()) j = s.basic(j, u[0]);
                JudgmentId out = 0;
                try {
                    out = derive_balance(s, table, j, v, side);
                } catch (const BalanceError&) {
                    continue;
                }
                ++segments;
                const TermGraph& t = side == Side::left ? l : r;
                const TermGraph& b = side == Side::left ? r : l;
                const BalanceResult res = balance_result(*g, table, t, b, v, side);
                Word uv = u;
                uv.insert(uv.end(), v.begin(), v.end());
                o.require(s.word(s.at(out).word) == uv, "derived judgment is not at uv");
                o.require(s.pool().get(s.at(out).left) == res.left && s.pool().get(s.at(out).right) == res.right,
                          "derived pair differs from the bal-result");
                o.require(depth_size(res.g_head) <= head_cap, "depth-size of G");
                o.require(depth_size(res.f_head) <= head_cap, "depth-size of F");
                for (const auto& fi : res.f_i) o.require(depth_size(fi) <= head_cap, "depth-size of F_i");
                o.require(BigInt(res.tails.size()) <= power(arity, m0), "tail count");
            }
        }
    }
    o.require(segments >= 100, "too few valid segments");
    o.detail << "200 runs, " << segments << " valid segments";
}

// ----------------------------------------------------------------- 10

void combinatorics(Outcome& o) {
    o.require(f_h(2, 2) == 5, "corrected f_2(2)");
    o.require(f_h(2, 2, Recursion::original) == 4, "original f_2(2)");
    std::size_t words = 0;
    for (std::size_t len = 1; len <= 5; ++len)
        for (const auto& w : binary_words(len)) {
            ++words;
            const bool has = find_type_n_subword(w, 2).has_value();
            o.require(has == has_type_n_subword(w, 2), "type-2 subword search disagrees with the definition");
            if (len == 5) o.require(has, "a length-5 word without a type-2 subword");
        }
    o.require(words == 62, "word count");
    o.require(!find_type_n_subword("aabb", 2), "aabb has a type-2 subword");

    std::vector<std::string> pieces{"a", "b", "aa", "ab", "ba", "bb"};
    std::size_t tuples = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<std::size_t> idx(n + 1, 0);
        for (;;) {
            std::vector<std::string> v;
            for (auto i : idx) v.push_back(pieces[i]);
            ++tuples;
            const auto u = prefix_yield(v);
            std::string w;
            for (const auto& x : v) w = w.empty() ? x : w + x + w;
            const std::string target = w.substr(0, w.size() - v[0].size());
            for (std::size_t sel = 0; sel < (std::size_t{1} << n); ++sel) {
                std::string s;
                for (std::size_t i = 0; i < n; ++i)
                    if (sel >> i & 1) s += u[i];
                o.require(s.size() <= target.size() && target.compare(target.size() - s.size(), s.size(), s) == 0,
                          "selection is not a suffix");
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == pieces.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }

    Rng rng(1010);
    std::size_t grammars = 0;
    for (int n = 0; n < 300; ++n) {
        const Grammar g = random_grammar(rng);
        if (!exposing_table(g).normal_form()) continue;
        const auto e = brute_constants(g, 6);
        if (!e) continue;
        ++grammars;
        const auto c = constants(g);
        o.require(c.m0 == e->m0 && c.m1 == e->m1 && c.m2 == e->m2 && c.m3 == e->m3, "constants differ");
    }
    o.require(grammars > 50, "too few grammars");
    o.detail << words << " words, " << tuples << " prefix-yield tuples, constants on " << grammars << " grammars";
}

struct Criterion {
    int id;
    const char* name;
    int limit_seconds;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "sim_k agrees with bounded traces", 120, sim_k_oracle},
        {2, "eq-level and witness coherence", 120, eq_level_coherence},
        {3, "congruence suite", 120, congruence},
        {4, "normal form preserves traces", 120, normal_form},
        {5, "DPDA end to end", 180, dpda_end_to_end},
        {6, "deduction soundness", 300, deduction_soundness},
        {7, "semidecider smoke tests", 120, completeness_smoke},
        {8, "critical instances are worst", 120, critical_instances_check},
        {9, "balancing bounds and derivation", 180, balancing},
        {10, "combinatorics", 60, combinatorics},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.limit_seconds, "over the time limit");
        failed += !o.pass;
        std::printf("%s  criterion %2d  %-34s %7.1fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
