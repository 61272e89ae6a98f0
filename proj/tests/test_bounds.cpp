#include <doctest.h>

#include <stdexcept>

#include "fog/bounds.hpp"
#include "fog/equiv.hpp"
#include "support/oracle.hpp"
#include "support/random.hpp"
#include "support/util.hpp"

using namespace fog;
using namespace fogtest;

namespace {

std::string rebuild(const std::vector<std::string>& v) {
    std::string w;
    for (const auto& x : v) w = w.empty() ? x : w + x + w;
    return w;
}

std::uint64_t f_oracle(std::uint64_t h, std::uint32_t n, bool corrected) {
    std::uint64_t m = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint64_t p = 1;
        for (std::uint64_t j = 0; j < m; ++j) p *= h;
        m = (1 + m) * p + (corrected ? m : 0);
    }
    return m;
}

}  // namespace

TEST_CASE("constants on a grammar with one-letter exposing words") {
    const Document d = doc(
        "nonterminals: X/2, Y/0\nactions: a, b, c\n"
        "X(x1,x2) -a-> x1\nX(x1,x2) -b-> x2\nX(x1,x2) -c-> X(X(x1,x2),x1)\nY -a-> Y\n");
    REQUIRE(max_rhs_depth(d.grammar) == 2);
    const auto c = constants(d.grammar);
    CHECK(c.m0 == 2);
    CHECK(c.m1 == 10);
    CHECK(c.m2 == 62);
    CHECK(c.m3 == 125);
}

TEST_CASE("constants without argument slots") {
    const Document d = doc("nonterminals: Y/0, Z/0\nactions: a\nY -a-> Z\n");
    const auto c = constants(d.grammar);
    CHECK(c.m0 == 1);
    CHECK(c.m1 == 1);
}

TEST_CASE("constants match their defining equations") {
    Rng rng(61);
    int checked = 0;
    for (int n = 0; n < 300; ++n) {
        const Grammar g = random_grammar(rng);
        if (!exposing_table(g).normal_form()) continue;
        const auto e = brute_constants(g, 6);
        if (!e) continue;
        ++checked;
        const auto c = constants(g);
        CHECK(c.m0 == e->m0);
        CHECK(c.m1 == e->m1);
        CHECK(c.m2 == e->m2);
        CHECK(c.m3 == e->m3);
        CHECK(c.m0 <= c.m1);
        CHECK(c.m1 <= c.m2);
        CHECK(c.m2 + 1 <= c.m3 + c.m2);
    }
    CHECK(checked > 50);
}

TEST_CASE("f_h") {
    for (std::uint64_t h = 1; h <= 4; ++h) CHECK(f_h(h, 0) == 0);
    CHECK(f_h(2, 1) == 1);
    CHECK(f_h(2, 2) == 5);
    CHECK(f_h(2, 2, Recursion::original) == 4);
    CHECK(f_h(3, 2) == 7);
    for (std::uint64_t h = 1; h <= 3; ++h)
        for (std::uint32_t n = 0; n <= 3; ++n) {
            CHECK(f_h(h, n) == f_oracle(h, n, true));
            CHECK(f_h(h, n, Recursion::original) == f_oracle(h, n, false));
        }
    CHECK_THROWS_AS(f_h(2, 5, Recursion::corrected, 64), std::overflow_error);
}

TEST_CASE("type-n presentations") {
    const auto empty = find_type_n("", 0);
    REQUIRE(empty);
    CHECK(empty->v.empty());
    CHECK_FALSE(find_type_n("a", 0));
    const auto aba = find_type_n("aba", 2);
    REQUIRE(aba);
    CHECK(aba->v == std::vector<std::string>{"a", "b"});
    CHECK(aba->w.back() == "aba");
    CHECK(find_type_n("abba", 1));
    CHECK_FALSE(find_type_n("", 1));
    CHECK_FALSE(find_type_n("aabb", 2));
    CHECK_FALSE(find_type_n_subword("aabb", 2));
    const auto sub = find_type_n_subword("bbaba", 2);
    REQUIRE(sub);
    CHECK(sub->start == 0);
    CHECK(sub->presentation.w.back() == "bbab");
}

TEST_CASE("type-n search agrees with the definition") {
    for (std::size_t len = 0; len <= 6; ++len)
        for (const auto& w : binary_words(len))
            for (std::uint32_t n = 0; n <= 3; ++n) {
                const auto p = find_type_n(w, n);
                CHECK(p.has_value() == is_type_n(w, n));
                if (p) {
                    CHECK(p->v.size() == n);
                    CHECK(rebuild(p->v) == w);
                    CHECK(present(p->v).w == p->w);
                    for (const auto& v : p->v) CHECK_FALSE(v.empty());
                }
                const auto s = find_type_n_subword(w, n);
                CHECK(s.has_value() == has_type_n_subword(w, n));
                if (s) CHECK(w.compare(s->start, s->presentation.w.empty() ? 0 : s->presentation.w.back().size(),
                                       s->presentation.w.empty() ? "" : s->presentation.w.back()) == 0);
            }
}

TEST_CASE("long binary words contain type-n subwords") {
    int scanned = 0;
    for (std::size_t len = 1; len <= 5; ++len)
        for (const auto& w : binary_words(len)) {
            ++scanned;
            for (std::uint32_t n = 1; n <= 2; ++n)
                if (len >= f_h(2, n)) {
                    CHECK(find_type_n_subword(w, n));
                    CHECK(has_type_n_subword(w, n));
                }
        }
    CHECK(scanned == 62);
    // The uncorrected bound f_2(2) = 4 is too small.
    CHECK_FALSE(has_type_n_subword("aabb", 2));
}

TEST_CASE("prefix yield") {
    CHECK(prefix_yield({"a", "b"}) == std::vector<std::string>{"ab"});
    const auto u = prefix_yield({"a", "b", "c"});
    REQUIRE(u.size() == 2);
    CHECK(u[1] == "a" + std::string("c") + "a" + "b");
    CHECK(right_quotient("abc", "bc") == "a");
    CHECK_THROWS_AS(right_quotient("abc", "b"), std::invalid_argument);
}

TEST_CASE("prefix-yielding words are suffixes in every selection") {
    std::vector<std::string> pieces;
    for (std::size_t len = 1; len <= 2; ++len)
        for (const auto& w : binary_words(len)) pieces.push_back(w);
    std::size_t tuples = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        std::vector<std::size_t> idx(n + 1, 0);
        while (true) {
            std::vector<std::string> v;
            for (auto i : idx) v.push_back(pieces[i]);
            ++tuples;
            const auto u = prefix_yield(v);
            REQUIRE(u.size() == n);
            const std::string whole = rebuild(v);
            const std::string target = whole.substr(0, whole.size() - v[0].size());
            for (const auto& ui : u) CHECK(ui.front() == v[0].front());
            for (std::size_t sel = 0; sel < (std::size_t{1} << n); ++sel) {
                std::string s;
                for (std::size_t i = 0; i < n; ++i)
                    if (sel >> i & 1) s += u[i];
                CHECK(s.size() <= target.size());
                CHECK(target.compare(target.size() - std::min(s.size(), target.size()), s.size(), s) == 0);
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == pieces.size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    }
    CHECK(tuples == 36 + 216 + 1296);
}

TEST_CASE("tetration and tower bounds") {
    CHECK(tetrate2(0) == 1);
    CHECK(tetrate2(1) == 2);
    CHECK(tetrate2(2) == 4);
    CHECK(tetrate2(3) == 16);
    CHECK(tetrate2(4) == 65536);
    const TowerBound one(1);
    CHECK(one.height() == BigInt(10));
    CHECK(TowerBound(3).height() == BigInt(256 + 10));
    CHECK_FALSE(TowerBound(40).height());
    CHECK_FALSE(one.value());
    CHECK(one.height_expression() == "2^(2^1) + 6");
    CHECK(one.exceeds(65536));
    CHECK(one.exceeds(BigInt(1) << 100000));
    CHECK(TowerBound(40).exceeds(BigInt(1) << 100000));
    CHECK(one < TowerBound(2));
    for (std::uint64_t s = 1; s < 20; ++s) CHECK(*TowerBound(s).height() <= *TowerBound(s + 1).height());
    CHECK(eq_level_upper_bound(5) == TowerBound(5));
    CHECK_THROWS_AS(eq_level_upper_bound(0), std::invalid_argument);
}

TEST_CASE("input size") {
    const Document d = doc("nonterminals: Y/0, B/1\nactions: a\nY -a-> B(Y)\nterm T = B(T)\n");
    // 2 nonterminals + 1 action + (1 + 2) for the rule + 1 + 1 for the terms.
    CHECK(input_size(d.grammar, term(d, "T"), term(d, "Y")) == 8);
}

TEST_CASE("measured eq-levels stay below the tower") {
    Rng rng(62);
    int finite = 0;
    for (int n = 0; n < 300; ++n) {
        const Grammar g = random_grammar(rng);
        const TermGraph t = random_ground_term(rng, g.signature(), 3);
        const TermGraph u = random_ground_term(rng, g.signature(), 3);
        const EqLevel e = eq_level(g, t, u, 6);
        if (!e.finite()) continue;
        ++finite;
        CHECK(eq_level_upper_bound(input_size(g, t, u)).exceeds(*e.level));
    }
    CHECK(finite > 100);
}
