#include "fog/term.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace fog {

namespace {

constexpr std::uint32_t kUnset = 0xffffffffu;

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::vector<NodeId> reachable_from(std::span<const TermNode> nodes, NodeId root) {
    std::vector<char> seen(nodes.size(), 0);
    std::vector<NodeId> order;
    std::vector<NodeId> stack{root};
    seen[root] = 1;
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        order.push_back(n);
        for (NodeId c : nodes[n].children) {
            if (!seen[c]) {
                seen[c] = 1;
                stack.push_back(c);
            }
        }
    }
    return order;
}

// Coarsest stable partition (bisimulation classes) of all nodes in `nodes`.
std::vector<std::uint32_t> partition(std::span<const TermNode> nodes) {
    const std::size_t n = nodes.size();
    std::vector<std::uint32_t> cls(n);
    std::size_t count = 0;
    {
        std::map<std::tuple<Label, std::size_t>, std::uint32_t> initial;
        for (std::size_t i = 0; i < n; ++i) {
            auto key = std::make_tuple(nodes[i].label, nodes[i].children.size());
            auto [it, inserted] = initial.emplace(key, static_cast<std::uint32_t>(initial.size()));
            cls[i] = it->second;
        }
        count = initial.size();
    }
    std::vector<std::uint32_t> key;
    while (true) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> refined;
        std::vector<std::uint32_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            key.clear();
            key.push_back(cls[i]);
            for (NodeId c : nodes[i].children) key.push_back(cls[c]);
            auto [it, inserted] = refined.emplace(key, static_cast<std::uint32_t>(refined.size()));
            next[i] = it->second;
        }
        cls = std::move(next);
        if (refined.size() == count) break;
        count = refined.size();
    }
    return cls;
}

void check_structure(const std::vector<TermNode>& nodes, NodeId root) {
    if (nodes.empty()) throw std::invalid_argument("term graph has no nodes");
    if (root >= nodes.size()) throw std::invalid_argument("term graph root out of range");
    for (const auto& node : nodes) {
        if (node.label.is_variable() && !node.children.empty())
            throw std::invalid_argument("variable node with successors");
        if (node.label.is_variable() && node.label.index == 0)
            throw std::invalid_argument("variable index must be >= 1");
        for (NodeId c : node.children)
            if (c >= nodes.size()) throw std::invalid_argument("term graph edge out of range");
    }
}

}  // namespace

TermGraph::TermGraph(std::vector<TermNode> nodes, NodeId root) : nodes_(std::move(nodes)), root_(root) {
    check_structure(nodes_, root_);
}

TermGraph TermGraph::variable(VarIndex i) {
    return TermGraph({TermNode{Label::variable(i), {}}}, 0);
}

TermGraph TermGraph::constant(NonterminalId id) {
    return TermGraph({TermNode{Label::nonterminal(id), {}}}, 0);
}

TermGraph TermGraph::apply(NonterminalId id, std::span<const TermGraph> args) {
    std::vector<TermNode> nodes;
    nodes.push_back(TermNode{Label::nonterminal(id), {}});
    for (const auto& arg : args) {
        const auto offset = static_cast<NodeId>(nodes.size());
        for (const auto& n : arg.nodes()) {
            TermNode copy = n;
            for (auto& c : copy.children) c += offset;
            nodes.push_back(std::move(copy));
        }
        nodes[0].children.push_back(arg.root() + offset);
    }
    return canonicalize(nodes, 0);
}

bool TermGraph::is_ground() const {
    for (NodeId n : reachable_from(nodes_, root_))
        if (nodes_[n].label.is_variable()) return false;
    return true;
}

bool TermGraph::contains_variable(VarIndex i) const {
    for (NodeId n : reachable_from(nodes_, root_))
        if (nodes_[n].label == Label::variable(i)) return true;
    return false;
}

std::vector<VarIndex> TermGraph::variables() const {
    std::vector<VarIndex> vars;
    for (NodeId n : reachable_from(nodes_, root_))
        if (nodes_[n].label.is_variable()) vars.push_back(nodes_[n].label.index);
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

VarIndex TermGraph::max_variable() const {
    auto vars = variables();
    return vars.empty() ? 0 : vars.back();
}

bool TermGraph::is_finite() const {
    // DFS with colours over the reachable part.
    std::vector<std::uint8_t> colour(nodes_.size(), 0);
    std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
    colour[root_] = 1;
    while (!stack.empty()) {
        auto& [n, next] = stack.back();
        if (next < nodes_[n].children.size()) {
            NodeId c = nodes_[n].children[next++];
            if (colour[c] == 1) return false;
            if (colour[c] == 0) {
                colour[c] = 1;
                stack.emplace_back(c, 0);
            }
        } else {
            colour[n] = 2;
            stack.pop_back();
        }
    }
    return true;
}

std::size_t TermGraph::hash() const {
    std::size_t h = mix(nodes_.size(), root_);
    for (const auto& n : nodes_) {
        h = mix(h, static_cast<std::size_t>(n.label.kind) * 0x10001 + n.label.index);
        for (NodeId c : n.children) h = mix(h, c);
        h = mix(h, 0xabcdefu);
    }
    return h;
}

TermGraph canonicalize(std::span<const TermNode> nodes, NodeId root) {
    const auto reach = reachable_from(nodes, root);
    // Compact to the reachable part first.
    std::vector<std::uint32_t> local(nodes.size(), kUnset);
    for (std::size_t i = 0; i < reach.size(); ++i) local[reach[i]] = static_cast<std::uint32_t>(i);
    std::vector<TermNode> compact;
    compact.reserve(reach.size());
    for (NodeId n : reach) {
        TermNode copy{nodes[n].label, {}};
        copy.children.reserve(nodes[n].children.size());
        for (NodeId c : nodes[n].children) copy.children.push_back(local[c]);
        compact.push_back(std::move(copy));
    }
    const auto cls = partition(compact);

    std::uint32_t nclasses = 0;
    for (auto c : cls) nclasses = std::max(nclasses, c + 1);
    std::vector<NodeId> representative(nclasses, kUnset);
    for (std::size_t i = 0; i < compact.size(); ++i)
        if (representative[cls[i]] == kUnset) representative[cls[i]] = static_cast<NodeId>(i);

    std::vector<std::uint32_t> numbering(nclasses, kUnset);
    std::vector<std::uint32_t> order;
    std::deque<std::uint32_t> queue;
    numbering[cls[0]] = 0;
    order.push_back(cls[0]);
    queue.push_back(cls[0]);
    while (!queue.empty()) {
        auto c = queue.front();
        queue.pop_front();
        for (NodeId child : compact[representative[c]].children) {
            auto cc = cls[child];
            if (numbering[cc] == kUnset) {
                numbering[cc] = static_cast<std::uint32_t>(order.size());
                order.push_back(cc);
                queue.push_back(cc);
            }
        }
    }
    std::vector<TermNode> out;
    out.reserve(order.size());
    for (auto c : order) {
        const auto& rep = compact[representative[c]];
        TermNode n{rep.label, {}};
        n.children.reserve(rep.children.size());
        for (NodeId child : rep.children) n.children.push_back(numbering[cls[child]]);
        out.push_back(std::move(n));
    }
    return TermGraph(std::move(out), 0);
}

TermGraph canonicalize(const TermGraph& g) {
    return canonicalize(g.nodes(), g.root());
}

std::size_t pressize(const TermGraph& g) {
    return canonicalize(g).size();
}

bool term_equal(const TermGraph& g1, const TermGraph& g2) {
    return canonicalize(g1) == canonicalize(g2);
}

TermGraph subterm_at_node(const TermGraph& g, NodeId n) {
    if (n >= g.size()) throw PositionError("node out of range");
    return canonicalize(g.nodes(), n);
}

TermGraph subterm_at(const TermGraph& g, const Position& gamma) {
    NodeId n = g.root();
    for (auto step : gamma) {
        const auto& node = g.node(n);
        if (step < 1 || step > node.children.size()) throw PositionError("position not in the domain of the term");
        n = node.children[step - 1];
    }
    return subterm_at_node(g, n);
}

TermGraph substitute(const TermGraph& g, const Substitution& sigma) {
    std::vector<TermNode> nodes = g.nodes();
    const auto base = static_cast<NodeId>(nodes.size());
    std::map<VarIndex, NodeId> image;
    for (VarIndex v : g.variables()) {
        auto it = sigma.find(v);
        if (it == sigma.end()) continue;
        const auto offset = static_cast<NodeId>(nodes.size());
        for (const auto& n : it->second.nodes()) {
            TermNode copy = n;
            for (auto& c : copy.children) c += offset;
            nodes.push_back(std::move(copy));
        }
        image[v] = it->second.root() + offset;
    }
    auto redirect = [&](NodeId n) {
        const auto& label = nodes[n].label;
        if (n < base && label.is_variable()) {
            auto it = image.find(label.index);
            if (it != image.end()) return it->second;
        }
        return n;
    };
    for (NodeId i = 0; i < base; ++i)
        for (auto& c : nodes[i].children) c = redirect(c);
    return canonicalize(nodes, redirect(g.root()));
}

Substitution compose(const Substitution& s1, const Substitution& s2) {
    Substitution out;
    for (const auto& [v, t] : s1) out.emplace(v, substitute(t, s2));
    for (const auto& [v, t] : s2) out.emplace(v, t);  // no-op where s1 already maps v
    return out;
}

TermGraph instantiate(const TermGraph& f, std::span<const TermGraph> args) {
    Substitution sigma;
    for (std::size_t i = 0; i < args.size(); ++i) sigma.emplace(static_cast<VarIndex>(i + 1), args[i]);
    return substitute(f, sigma);
}

TermGraph limit_substitute(const TermGraph& h, VarIndex i) {
    if (h.root_label() == Label::variable(i)) return canonicalize(h);
    std::vector<TermNode> nodes = h.nodes();
    for (auto& n : nodes)
        for (auto& c : n.children)
            if (nodes[c].label == Label::variable(i)) c = h.root();
    return canonicalize(nodes, h.root());
}

PrefixForm d_prefix(const TermGraph& v, std::uint32_t d) {
    if (!v.is_ground()) throw std::invalid_argument("d-prefix form is defined for ground terms");
    PrefixForm out;
    out.depth = d;
    std::vector<TermNode> tree;
    std::function<NodeId(NodeId, std::uint32_t)> build = [&](NodeId n, std::uint32_t depth) -> NodeId {
        const auto id = static_cast<NodeId>(tree.size());
        if (depth == d) {
            out.tails.push_back(subterm_at_node(v, n));
            tree.push_back(TermNode{Label::variable(static_cast<VarIndex>(out.tails.size())), {}});
            return id;
        }
        tree.push_back(TermNode{v.node(n).label, {}});
        std::vector<NodeId> kids;
        for (NodeId c : v.node(n).children) kids.push_back(build(c, depth + 1));
        tree[id].children = std::move(kids);
        return id;
    };
    build(v.root(), 0);
    out.head = canonicalize(tree, 0);
    return out;
}

std::uint32_t depth_size(const TermGraph& g) {
    const TermGraph c = canonicalize(g);
    if (!c.is_finite()) throw InfiniteTermError("depth-size of an infinite term");
    std::vector<std::uint32_t> memo(c.size(), kUnset);
    std::function<std::uint32_t(NodeId)> depth = [&](NodeId n) -> std::uint32_t {
        if (memo[n] != kUnset) return memo[n];
        std::uint32_t best = 0;
        for (NodeId ch : c.node(n).children) best = std::max(best, depth(ch) + 1);
        return memo[n] = best;
    };
    return depth(c.root());
}

std::optional<NodeId> find_subterm(const TermGraph& g, const TermGraph& target) {
    std::vector<TermNode> joint = g.nodes();
    const auto offset = static_cast<NodeId>(joint.size());
    for (const auto& n : target.nodes()) {
        TermNode copy = n;
        for (auto& c : copy.children) c += offset;
        joint.push_back(std::move(copy));
    }
    const auto cls = partition(joint);
    const auto wanted = cls[target.root() + offset];
    for (NodeId n : reachable_from(g.nodes(), g.root()))
        if (cls[n] == wanted) return n;
    return std::nullopt;
}

TermGraph abstract_subterm(const TermGraph& g, const TermGraph& target, VarIndex var) {
    const TermGraph c = canonicalize(g);
    auto hit = find_subterm(c, target);
    if (!hit) return c;
    if (*hit == c.root()) return TermGraph::variable(var);
    std::vector<TermNode> nodes = c.nodes();
    const auto hole = static_cast<NodeId>(nodes.size());
    nodes.push_back(TermNode{Label::variable(var), {}});
    for (NodeId i = 0; i < hole; ++i)
        for (auto& ch : nodes[i].children)
            if (ch == *hit) ch = hole;
    return canonicalize(nodes, c.root());
}

TermGraph replace_subterm(const TermGraph& g, const TermGraph& target, const TermGraph& replacement) {
    const TermGraph c = canonicalize(g);
    auto hit = find_subterm(c, target);
    if (!hit) return c;
    if (*hit == c.root()) return canonicalize(replacement);
    std::vector<TermNode> nodes = c.nodes();
    const auto base = static_cast<NodeId>(nodes.size());
    for (const auto& n : replacement.nodes()) {
        TermNode copy = n;
        for (auto& ch : copy.children) ch += base;
        nodes.push_back(std::move(copy));
    }
    const NodeId rep_root = replacement.root() + base;
    for (NodeId i = 0; i < base; ++i)
        for (auto& ch : nodes[i].children)
            if (ch == *hit) ch = rep_root;
    return canonicalize(nodes, c.root());
}

TermGraph context_at(const TermGraph& g, const Position& gamma, VarIndex var) {
    if (gamma.empty()) return TermGraph::variable(var);
    std::vector<TermNode> nodes = g.nodes();
    std::vector<NodeId> path{g.root()};
    for (auto step : gamma) {
        const auto& node = g.node(path.back());
        if (step < 1 || step > node.children.size()) throw PositionError("position not in the domain of the term");
        path.push_back(node.children[step - 1]);
    }
    const auto hole = static_cast<NodeId>(nodes.size());
    nodes.push_back(TermNode{Label::variable(var), {}});
    // Fresh copies of the nodes strictly above the hole, linked along gamma.
    NodeId below = hole;
    for (std::size_t j = gamma.size(); j-- > 0;) {
        TermNode copy = g.node(path[j]);
        copy.children[gamma[j] - 1] = below;
        below = static_cast<NodeId>(nodes.size());
        nodes.push_back(std::move(copy));
    }
    return canonicalize(nodes, below);
}

std::optional<Substitution> match(std::span<const TermGraph> patterns, std::span<const TermGraph> terms) {
    if (patterns.size() != terms.size()) throw std::invalid_argument("pattern/term count mismatch");
    // Joint node space for the terms, so subterm equality is a class comparison.
    std::vector<TermNode> tnodes;
    std::vector<NodeId> troots;
    for (const auto& t : terms) {
        const auto offset = static_cast<NodeId>(tnodes.size());
        for (const auto& n : t.nodes()) {
            TermNode copy = n;
            for (auto& c : copy.children) c += offset;
            tnodes.push_back(std::move(copy));
        }
        troots.push_back(t.root() + offset);
    }
    const auto tcls = partition(tnodes);
    std::vector<TermNode> pnodes;
    std::vector<NodeId> proots;
    for (const auto& p : patterns) {
        const auto offset = static_cast<NodeId>(pnodes.size());
        for (const auto& n : p.nodes()) {
            TermNode copy = n;
            for (auto& c : copy.children) c += offset;
            pnodes.push_back(std::move(copy));
        }
        proots.push_back(p.root() + offset);
    }

    std::map<VarIndex, NodeId> binding;  // variable -> term node (joint space)
    std::unordered_map<std::uint64_t, char> visited;
    std::vector<std::pair<NodeId, NodeId>> stack;
    for (std::size_t k = 0; k < patterns.size(); ++k) stack.emplace_back(proots[k], troots[k]);
    while (!stack.empty()) {
        auto [p, t] = stack.back();
        stack.pop_back();
        const std::uint64_t key = (static_cast<std::uint64_t>(p) << 32) | t;
        if (!visited.emplace(key, 1).second) continue;
        const auto& pn = pnodes[p];
        if (pn.label.is_variable()) {
            auto [it, inserted] = binding.emplace(pn.label.index, t);
            if (!inserted && tcls[it->second] != tcls[t]) return std::nullopt;
            continue;
        }
        const auto& tn = tnodes[t];
        if (pn.label != tn.label || pn.children.size() != tn.children.size()) return std::nullopt;
        for (std::size_t i = 0; i < pn.children.size(); ++i) stack.emplace_back(pn.children[i], tn.children[i]);
    }
    Substitution sigma;
    for (const auto& [v, t] : binding) sigma.emplace(v, canonicalize(tnodes, t));
    return sigma;
}

std::optional<Substitution> match(const TermGraph& pattern, const TermGraph& term) {
    return match(std::span<const TermGraph>(&pattern, 1), std::span<const TermGraph>(&term, 1));
}

}  // namespace fog
