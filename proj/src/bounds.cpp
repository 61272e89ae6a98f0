#include "fog/bounds.hpp"

#include <stdexcept>

namespace fog {

GrammarConstants constants(const Grammar& g) { return constants(g, exposing_table(g)); }

GrammarConstants constants(const Grammar& g, const ExposureTable& table) {
    const BigInt d = max_rhs_depth(g);
    auto binc = [&](const BigInt& n) { return n * d; };
    GrammarConstants c;
    c.m0 = table.m0;
    c.m1 = (1 + binc(c.m0)) * c.m0;
    c.m2 = (c.m0 + c.m1) + (1 + binc(c.m0 + c.m1)) * c.m0;
    c.m3 = 1 + binc(c.m2);
    return c;
}

BigInt f_h(std::uint64_t h, std::uint32_t n, Recursion r, std::size_t max_bits) {
    if (h == 0) throw std::invalid_argument("f_h needs h >= 1");
    BigInt m = 0;
    for (std::uint32_t k = 0; k < n; ++k) {
        if (h > 1) {
            // h^m has about m * log2(h) bits.
            const std::size_t hbits = msb(BigInt(h)) + 1;
            if (m > max_bits || m * hbits > max_bits) throw std::overflow_error("f_h value exceeds the size limit");
        }
        const auto e = static_cast<unsigned>(m);
        BigInt next = (1 + m) * boost::multiprecision::pow(BigInt(h), e);
        if (r == Recursion::corrected) next += m;
        m = std::move(next);
    }
    return m;
}

TypePresentation present(std::vector<std::string> v) {
    TypePresentation p;
    p.v = std::move(v);
    for (std::size_t i = 0; i < p.v.size(); ++i)
        p.w.push_back(i == 0 ? p.v[0] : p.w.back() + p.v[i] + p.w.back());
    return p;
}

namespace {

bool type_n(const std::string& w, std::uint32_t n, std::vector<std::string>& v) {
    if (n == 0) return w.empty();
    if (w.empty()) return false;
    if (n == 1) {
        v.push_back(w);
        return true;
    }
    // w = x u x with x of type n-1; x has length >= 1 and u is nonempty.
    for (std::size_t len = 1; 2 * len < w.size(); ++len) {
        if (w.compare(0, len, w, w.size() - len, len) != 0) continue;
        const std::size_t mark = v.size();
        if (type_n(w.substr(0, len), n - 1, v)) {
            v.push_back(w.substr(len, w.size() - 2 * len));
            return true;
        }
        v.resize(mark);
    }
    return false;
}

}  // namespace

std::optional<TypePresentation> find_type_n(const std::string& word, std::uint32_t n) {
    std::vector<std::string> v;
    if (!type_n(word, n, v)) return std::nullopt;
    return present(std::move(v));
}

std::optional<TypeOccurrence> find_type_n_subword(const std::string& word, std::uint32_t n) {
    for (std::size_t start = 0; start <= word.size(); ++start)
        for (std::size_t len = 0; start + len <= word.size(); ++len)
            if (auto p = find_type_n(word.substr(start, len), n)) return TypeOccurrence{start, std::move(*p)};
    return std::nullopt;
}

std::string right_quotient(const std::string& w, const std::string& v) {
    if (v.size() > w.size() || w.compare(w.size() - v.size(), v.size(), v) != 0)
        throw std::invalid_argument("right quotient: '" + v + "' is not a suffix of '" + w + "'");
    return w.substr(0, w.size() - v.size());
}

std::vector<std::string> prefix_yield(const std::vector<std::string>& v) {
    if (v.size() < 2) throw std::invalid_argument("prefix_yield needs at least two words");
    for (const auto& x : v)
        if (x.empty()) throw std::invalid_argument("prefix_yield needs nonempty words");
    const auto p = present(v);
    std::vector<std::string> u;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) u.push_back(v[0] + v[i + 1] + right_quotient(p.w[i], v[0]));
    return u;
}

BigInt tetrate2(std::uint32_t h) {
    if (h > 4) throw std::overflow_error("2^^h is only materialized for h <= 4");
    BigInt x = 1;
    for (std::uint32_t i = 0; i < h; ++i) x = BigInt(1) << static_cast<unsigned>(x);
    return x;
}

TowerBound::TowerBound(std::uint64_t input_size) : s_(input_size) {}

std::optional<BigInt> TowerBound::height() const {
    if (s_ > 20) return std::nullopt;
    return (BigInt(1) << (std::size_t{1} << s_)) + 2 * s_ + 4;
}

std::string TowerBound::height_expression() const {
    const std::string s = std::to_string(s_);
    return "2^(2^" + s + ") + " + std::to_string(2 * s_ + 4);
}

std::optional<BigInt> TowerBound::value() const {
    auto h = height();
    if (!h || *h > 4) return std::nullopt;
    return tetrate2(static_cast<std::uint32_t>(*h));
}

bool TowerBound::exceeds(const BigInt& x) const {
    if (x < 0) return true;
    // Climb the tower until it passes x; the height is at least 6 for s >= 1.
    BigInt level = 1;
    BigInt remaining = height().value_or(BigInt(1) << 64);
    while (remaining > 0) {
        if (level > x) return true;
        if (level > (1u << 20) && msb(x) < level) return true;  // 2^level > x
        level = BigInt(1) << static_cast<unsigned>(level);
        --remaining;
    }
    return level > x;
}

std::uint64_t input_size(const Grammar& g, const TermGraph& t, const TermGraph& u) {
    std::uint64_t s = g.signature().size() + g.action_count();
    for (const auto& r : g.rules()) s += 1 + r.rhs.size();
    return s + t.size() + u.size();
}

TowerBound eq_level_upper_bound(std::uint64_t input_size) {
    if (input_size == 0) throw std::invalid_argument("input size must be positive");
    return TowerBound(input_size);
}

}  // namespace fog
