#include "fog/term_pool.hpp"

namespace fog {

TermId TermPool::intern(const TermGraph& g) {
    TermGraph c = canonicalize(g);
    auto it = index_.find(c);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<TermId>(terms_.size());
    terms_.push_back(c);
    index_.emplace(std::move(c), id);
    return id;
}

std::optional<TermId> TermPool::find(const TermGraph& g) const {
    auto it = index_.find(canonicalize(g));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const std::vector<TermId>& TermPool::node_subterms(TermId id) {
    auto it = subterms_.find(id);
    if (it != subterms_.end()) return it->second;
    std::vector<TermId> ids;
    const auto n = terms_[id].size();
    ids.reserve(n);
    for (NodeId node = 0; node < n; ++node) {
        // terms_ is a deque, so references survive intern().
        ids.push_back(node == 0 ? id : intern(subterm_at_node(terms_[id], node)));
    }
    return subterms_.emplace(id, std::move(ids)).first->second;
}

}  // namespace fog
