#include "architext/tree.hpp"

#include <algorithm>

namespace architext {

namespace {

void insert_node(std::map<Position, NodeLabel>& out, const Position& at, const Node& node) {
    out.emplace(at, node.label);
    for (std::uint32_t i = 0; i < node.children.size(); ++i)
        insert_node(out, at.child(i), node.children[i]);
}

} // namespace

Tree Tree::from_hedge(const Hedge& sentences) {
    Node root(NodeLabel::root(), sentences);
    return from_node(root);
}

Tree Tree::from_node(const Node& root) {
    if (root.label.kind != LabelKind::Root)
        throw std::invalid_argument("tree root must carry the Root label");
    Tree t;
    t.nodes_.clear();
    insert_node(t.nodes_, Position::root(), root);
    return t;
}

std::size_t Tree::child_count(const Position& p) const {
    if (!contains(p)) throw PositionNotInDomain(p);
    std::size_t n = 0;
    while (contains(p.child(static_cast<std::uint32_t>(n)))) ++n;
    return n;
}

std::vector<Position> Tree::children(const Position& p) const {
    std::size_t n = child_count(p);
    std::vector<Position> out;
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(p.child(i));
    return out;
}

std::vector<Position> Tree::positions() const {
    std::vector<Position> out;
    out.reserve(nodes_.size());
    for (const auto& [p, _] : nodes_) out.push_back(p);
    return out;
}

std::vector<Position> Tree::leaves() const {
    std::vector<Position> out;
    for (const auto& [p, _] : nodes_)
        if (!contains(p.child(0))) out.push_back(p);
    return out;
}

Node Tree::to_node(const Position& p) const {
    Node n(label(p));
    for (const Position& c : children(p)) n.children.push_back(to_node(c));
    return n;
}

void Tree::check_invariants() const {
    if (nodes_.empty()) throw std::logic_error("empty domain");
    for (const auto& [p, l] : nodes_) {
        if (p.is_root()) {
            if (l.kind != LabelKind::Root) throw std::logic_error("root label missing at e");
            continue;
        }
        if (l.kind == LabelKind::Root) throw std::logic_error("Root label away from e");
        if (!contains(p.parent()))
            throw std::logic_error("domain not prefix-closed at " + p.to_string());
        if (p.last_index() > 0) {
            Position left = p.parent().child(p.last_index() - 1);
            if (!contains(left))
                throw std::logic_error("domain not left-sibling-closed at " + p.to_string());
        }
        if (l.kind == LabelKind::Token && contains(p.child(0)))
            throw std::logic_error("token label at internal node " + p.to_string());
    }
}

Fragment subtree(const Tree& tree, const Position& at) {
    if (!tree.contains(at)) throw PositionNotInDomain(at);
    Fragment f;
    f.root = at;
    for (const auto& [p, l] : tree.nodes())
        if (at.is_prefix_of(p)) f.nodes.emplace(p, l);
    return f;
}

SubTreeRef ancestor(const SubTreeRef& ref, std::size_t i) {
    if (i > ref.at.depth())
        throw std::out_of_range("ancestor index exceeds depth of " + ref.at.to_string());
    return SubTreeRef{ref.tree, ref.at.ancestor(i)};
}

Tree splice_children(const Tree& tree, const Position& at, const Hedge& replacement) {
    if (!tree.contains(at)) throw PositionNotInDomain(at);
    Node root = tree.to_node();
    Node* target = &root;
    for (std::uint32_t idx : at.seq()) target = &target->children[idx];
    target->children = replacement;
    return Tree::from_node(root);
}

} // namespace architext
