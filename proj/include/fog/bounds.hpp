#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fog/grammar.hpp"

namespace fog {

using BigInt = boost::multiprecision::cpp_int;

struct GrammarConstants {
    BigInt m0, m1, m2, m3;
};

/// M0 from the exposure table, M1..M3 from their defining equations with
/// bound_inc(n) = n * max_rhs_depth.
GrammarConstants constants(const Grammar& g);
GrammarConstants constants(const Grammar& g, const ExposureTable& table);

enum class Recursion {
    corrected,  // f(n+1) = (1 + m) h^m + m
    original,   // f(n+1) = (1 + m) h^m
};

/// f_h(n); throws std::overflow_error once a value would exceed max_bits.
BigInt f_h(std::uint64_t h, std::uint32_t n, Recursion r = Recursion::corrected, std::size_t max_bits = 1u << 20);

/// v_1..v_n and the words w_1..w_n they generate.
struct TypePresentation {
    std::vector<std::string> v;
    std::vector<std::string> w;
};

/// w_1 = v_1, w_{i+1} = w_i v_{i+1} w_i.
TypePresentation present(std::vector<std::string> v);

/// A presentation of `word` itself as a type-n word.
std::optional<TypePresentation> find_type_n(const std::string& word, std::uint32_t n);

struct TypeOccurrence {
    std::size_t start = 0;
    TypePresentation presentation;
};

/// Leftmost, then shortest, subword of type n.
std::optional<TypeOccurrence> find_type_n_subword(const std::string& word, std::uint32_t n);

/// u_i = v_1 v_{i+1} (w_i / v_1) for i = 1..n, given v_1..v_{n+1}.
std::vector<std::string> prefix_yield(const std::vector<std::string>& v);

/// w / v: w without its suffix v; throws std::invalid_argument if v is not a suffix.
std::string right_quotient(const std::string& w, const std::string& v);

/// Symbolic 2^^height with height = 2^(2^s) + 2s + 4 for input size s.
class TowerBound {
public:
    explicit TowerBound(std::uint64_t input_size);

    std::uint64_t input_size() const { return s_; }
    /// The height, when s is small enough to write it down.
    std::optional<BigInt> height() const;
    std::string height_expression() const;
    /// 2^^height, only when height <= 4.
    std::optional<BigInt> value() const;
    /// True iff x < 2^^height.
    bool exceeds(const BigInt& x) const;

    auto operator<=>(const TowerBound& o) const { return s_ <=> o.s_; }
    bool operator==(const TowerBound& o) const { return s_ == o.s_; }

private:
    std::uint64_t s_;
};

/// 2^^h for h <= 4.
BigInt tetrate2(std::uint32_t h);

/// Size of a standard presentation of (g, t, u): symbols, rules with their
/// right-hand side nodes, and the nodes of both terms.
std::uint64_t input_size(const Grammar& g, const TermGraph& t, const TermGraph& u);

TowerBound eq_level_upper_bound(std::uint64_t input_size);

}  // namespace fog
