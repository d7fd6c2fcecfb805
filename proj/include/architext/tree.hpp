#ifndef ARCHITEXT_TREE_HPP
#define ARCHITEXT_TREE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "architext/label.hpp"
#include "architext/position.hpp"

namespace architext {

struct PositionNotInDomain : std::runtime_error {
    explicit PositionNotInDomain(const Position& p)
        : std::runtime_error("position not in domain: " + p.to_string()) {}
};

/// Recursive node value, used to build and rewrite trees. Converting a Node
/// back to a Tree renumbers everything, so domain invariants hold by
/// construction.
struct Node {
    NodeLabel label;
    std::vector<Node> children;

    Node() = default;
    Node(NodeLabel l, std::vector<Node> c = {}) : label(std::move(l)), children(std::move(c)) {}

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& c : children) n += c.size();
        return n;
    }
    bool operator==(const Node& o) const { return label == o.label && children == o.children; }
};

/// A possibly empty sequence of trees.
using Hedge = std::vector<Node>;

/// An ordered labelled tree over an explicit position domain.
/// The domain is closed under prefixes and left siblings; the root is at the
/// empty position and carries the reserved Root label. Immutable by
/// convention: operations return new trees.
class Tree {
public:
    /// The empty tree: a lone root.
    Tree() { nodes_.emplace(Position::root(), NodeLabel::root()); }

    /// Builds a tree whose root children are the given hedge.
    static Tree from_hedge(const Hedge& sentences);

    /// Builds from a root-labelled Node. Requires node.label.kind == Root.
    static Tree from_node(const Node& root);

    const std::map<Position, NodeLabel>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }

    bool contains(const Position& p) const { return nodes_.count(p) != 0; }

    const NodeLabel& label(const Position& p) const {
        auto it = nodes_.find(p);
        if (it == nodes_.end()) throw PositionNotInDomain(p);
        return it->second;
    }

    std::size_t child_count(const Position& p) const;
    std::vector<Position> children(const Position& p) const;
    bool is_leaf(const Position& p) const { return child_count(p) == 0; }

    /// All positions in preorder (the map's own order).
    std::vector<Position> positions() const;

    /// Leaf positions, left to right.
    std::vector<Position> leaves() const;

    /// Converts the subtree at p into a standalone Node value.
    Node to_node(const Position& p = Position::root()) const;

    bool operator==(const Tree& o) const { return nodes_ == o.nodes_; }
    bool operator!=(const Tree& o) const { return nodes_ != o.nodes_; }

    /// Verifies prefix-closure, left-sibling-closure, root labelling and
    /// token-at-leaves by full domain scan. Throws std::logic_error.
    void check_invariants() const;

private:
    std::map<Position, NodeLabel> nodes_;
};

/// A tree fragment as defined for sub-trees: positions keep the original
/// prefix, so a fragment is generally not itself a tree.
struct Fragment {
    Position root;
    std::map<Position, NodeLabel> nodes;
};

/// Reference to the sub-tree of `tree` at `at`.
struct SubTreeRef {
    const Tree* tree = nullptr;
    Position at;

    std::size_t depth() const { return at.depth(); }
};

/// Domain restricted to `at` and its descendants, labels copied unchanged.
Fragment subtree(const Tree& tree, const Position& at);

/// The i-th tree-ancestor of `ref`; ancestor(ref, 0) == ref.
SubTreeRef ancestor(const SubTreeRef& ref, std::size_t i);

/// Replaces the children of `at` by the hedge; descendants renumbered.
Tree splice_children(const Tree& tree, const Position& at, const Hedge& replacement);

} // namespace architext

#endif
