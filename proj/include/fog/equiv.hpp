#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <stop_token>

#include "fog/grammar.hpp"

namespace fog {

enum class Side { left, right };

/// Shortest distinguishing word; `side` is the term that enables it.
struct OffendingWitness {
    Word word;
    Side side = Side::left;
};

struct EqLevel {
    std::optional<std::uint32_t> level;  // empty: above the budget
    std::uint32_t budget = 0;
    std::optional<OffendingWitness> witness;

    bool finite() const { return level.has_value(); }
};

/// The explored pair set outgrew SearchLimits::max_pairs.
class SearchOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SearchCancelled : public std::runtime_error {
public:
    SearchCancelled() : std::runtime_error("search cancelled") {}
};

struct SearchLimits {
    std::size_t max_pairs = 4'000'000;
    std::stop_token stop;
};

/// Breadth-first search over the synchronized product; the witness is the
/// shortest and, among those, lexicographically least by action order.
std::optional<OffendingWitness> offending_search(Lts& lts, TermId t, TermId u, std::uint32_t budget,
                                                 const SearchLimits& limits = {});
std::optional<OffendingWitness> offending_search(const Grammar& g, const TermGraph& t, const TermGraph& u,
                                                 std::uint32_t budget, const SearchLimits& limits = {});

bool sim_k(Lts& lts, TermId t, TermId u, std::uint32_t k);
bool sim_k(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t k);

EqLevel eq_level(Lts& lts, TermId t, TermId u, std::uint32_t max_k);
EqLevel eq_level(const Grammar& g, const TermGraph& t, const TermGraph& u, std::uint32_t max_k);

}  // namespace fog
