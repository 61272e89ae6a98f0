#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fog {

using NonterminalId = std::uint32_t;
using VarIndex = std::uint32_t;  // 1-based, x1, x2, ...
using NodeId = std::uint32_t;

/// A node label: either a nonterminal (arity given by the ambient signature)
/// or a variable x_i (arity 0).
struct Label {
    enum class Kind : std::uint8_t { nonterminal, variable };

    Kind kind = Kind::nonterminal;
    std::uint32_t index = 0;

    static constexpr Label nonterminal(NonterminalId id) { return {Kind::nonterminal, id}; }
    static constexpr Label variable(VarIndex i) { return {Kind::variable, i}; }

    constexpr bool is_variable() const { return kind == Kind::variable; }
    constexpr bool is_nonterminal() const { return kind == Kind::nonterminal; }

    auto operator<=>(const Label&) const = default;
};

struct TermNode {
    Label label;
    std::vector<NodeId> children;

    bool operator==(const TermNode&) const = default;
};

/// Position in a term: sequence of 1-based child indices.
using Position = std::vector<std::uint32_t>;

class PositionError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

class InfiniteTermError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Finite rooted labelled multigraph presenting a regular (possibly infinite)
/// term. Values produced by the operations below are canonical: minimal
/// (bisimulation-collapsed), every node reachable, root at index 0, nodes
/// numbered in breadth-first order by edge label. On canonical graphs
/// structural equality coincides with term equality.
class TermGraph {
public:
    TermGraph() = default;
    TermGraph(std::vector<TermNode> nodes, NodeId root);

    static TermGraph variable(VarIndex i);
    static TermGraph constant(NonterminalId id);
    static TermGraph apply(NonterminalId id, std::span<const TermGraph> args);

    const std::vector<TermNode>& nodes() const { return nodes_; }
    const TermNode& node(NodeId n) const { return nodes_[n]; }
    NodeId root() const { return root_; }
    const Label& root_label() const { return nodes_[root_].label; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }

    bool is_variable() const { return !empty() && root_label().is_variable(); }
    bool is_ground() const;
    bool contains_variable(VarIndex i) const;
    /// Variable indices occurring in the term (reachable from the root), sorted.
    std::vector<VarIndex> variables() const;
    VarIndex max_variable() const;
    bool is_finite() const;

    std::size_t hash() const;

    bool operator==(const TermGraph&) const = default;

private:
    std::vector<TermNode> nodes_;
    NodeId root_ = 0;
};

struct TermGraphHash {
    std::size_t operator()(const TermGraph& g) const { return g.hash(); }
};

/// Finite map variable-index -> term; unmapped variables are left in place.
using Substitution = std::map<VarIndex, TermGraph>;

struct PrefixForm {
    TermGraph head;                 // finite, over x1..xn
    std::vector<TermGraph> tails;   // ground, in position order
    std::uint32_t depth = 0;
};

/// Unique minimal presentation: unreachable nodes dropped, bisimilar nodes
/// merged, BFS numbering from the root.
TermGraph canonicalize(const TermGraph& g);
TermGraph canonicalize(std::span<const TermNode> nodes, NodeId root);

/// Number of nodes of the least presentation.
std::size_t pressize(const TermGraph& g);

bool term_equal(const TermGraph& g1, const TermGraph& g2);

/// Throws PositionError if gamma is not in the domain of the term.
TermGraph subterm_at(const TermGraph& g, const Position& gamma);
TermGraph subterm_at_node(const TermGraph& g, NodeId n);

/// Simultaneous substitution E sigma.
TermGraph substitute(const TermGraph& g, const Substitution& sigma);
/// Composition: substitute(substitute(E, s1), s2) == substitute(E, compose(s1, s2)).
Substitution compose(const Substitution& s1, const Substitution& s2);
/// F(G1..Gn) := F[G1/x1, ..., Gn/xn].
TermGraph instantiate(const TermGraph& f, std::span<const TermGraph> args);

/// H[H/x_i]^omega: every edge into an x_i-labelled node is redirected to the root.
TermGraph limit_substitute(const TermGraph& h, VarIndex i);

PrefixForm d_prefix(const TermGraph& v, std::uint32_t d);

/// Maximal position length; throws InfiniteTermError for cyclic terms.
std::uint32_t depth_size(const TermGraph& g);

// Subterm surgery used by the deduction engine. `target` must be canonical.

/// Node of canonical `g` presenting `target`, if target is a subterm of g.
std::optional<NodeId> find_subterm(const TermGraph& g, const TermGraph& target);
/// E(x_var) such that E[target/x_var] == g and every occurrence of target is abstracted.
TermGraph abstract_subterm(const TermGraph& g, const TermGraph& target, VarIndex var = 1);
/// Replace every occurrence of `target` in g by `replacement`.
TermGraph replace_subterm(const TermGraph& g, const TermGraph& target, const TermGraph& replacement);
/// E(x_var) with x_var at exactly position gamma and g elsewhere.
TermGraph context_at(const TermGraph& g, const Position& gamma, VarIndex var = 1);

/// Simultaneous matching: sigma with pattern_k sigma == term_k for all k.
/// Terms must be ground. Returns nullopt when no matcher exists.
std::optional<Substitution> match(std::span<const TermGraph> patterns, std::span<const TermGraph> terms);
std::optional<Substitution> match(const TermGraph& pattern, const TermGraph& term);

}  // namespace fog
