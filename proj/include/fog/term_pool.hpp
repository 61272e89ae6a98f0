#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fog/term.hpp"

namespace fog {

using TermId = std::uint32_t;

/// Hash-consing table for canonical term graphs. Equal terms get equal ids.
class TermPool {
public:
    TermId intern(const TermGraph& g);
    std::optional<TermId> find(const TermGraph& g) const;

    const TermGraph& get(TermId id) const { return terms_[id]; }
    std::size_t size() const { return terms_.size(); }

    /// Id of the subterm presented by each node of get(id); cached.
    const std::vector<TermId>& node_subterms(TermId id);

private:
    std::deque<TermGraph> terms_;
    std::unordered_map<TermGraph, TermId, TermGraphHash> index_;
    std::unordered_map<TermId, std::vector<TermId>> subterms_;
};

}  // namespace fog
