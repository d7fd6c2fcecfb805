#include "architext/pattern.hpp"

namespace architext {

namespace {

bool match_node(const Node& node, const Pattern& pat, Substitution& sub);

// Matches items[ii..] against hedge[hi..]; shortest hedge binding tried first.
bool match_seq(const std::vector<Node>& hedge, std::size_t hi,
               const std::vector<Pattern>& items, std::size_t ii, Substitution& sub) {
    if (ii == items.size()) return hi == hedge.size();
    const Pattern& item = items[ii];
    if (item.kind == Pattern::Kind::HedgeVar) {
        for (std::size_t take = 0; take + hi <= hedge.size(); ++take) {
            Substitution trial = sub;
            Hedge bound(hedge.begin() + hi, hedge.begin() + hi + take);
            auto [it, fresh] = trial.hedges.emplace(item.var, bound);
            if (!fresh && it->second != bound) continue;
            if (match_seq(hedge, hi + take, items, ii + 1, trial)) {
                sub = std::move(trial);
                return true;
            }
        }
        return false;
    }
    if (hi >= hedge.size()) return false;
    Substitution trial = sub;
    if (!match_node(hedge[hi], item, trial)) return false;
    if (!match_seq(hedge, hi + 1, items, ii + 1, trial)) return false;
    sub = std::move(trial);
    return true;
}

bool match_node(const Node& node, const Pattern& pat, Substitution& sub) {
    switch (pat.kind) {
        case Pattern::Kind::HedgeVar:
            return false; // hedge variables only occur inside child lists
        case Pattern::Kind::Concrete:
            if (node.label != pat.label) return false;
            if (!pat.children) {
                auto [it, fresh] = sub.captures.emplace(pat.label.render(), node);
                return fresh || it->second == node;
            }
            return match_seq(node.children, 0, *pat.children, 0, sub);
        case Pattern::Kind::LabelVar: {
            auto [it, fresh] = sub.labels.emplace(pat.var, node.label);
            if (!fresh && it->second != node.label) return false;
            if (!pat.children) return true;
            return match_seq(node.children, 0, *pat.children, 0, sub);
        }
    }
    return false;
}

void instantiate_into(const Pattern& pat, const Substitution& sub, std::vector<Node>& out) {
    switch (pat.kind) {
        case Pattern::Kind::HedgeVar: {
            auto it = sub.hedges.find(pat.var);
            if (it == sub.hedges.end())
                throw std::logic_error("rhs variable unbound: " + pat.var);
            for (const Node& n : it->second) out.push_back(n);
            return;
        }
        case Pattern::Kind::Concrete: {
            if (!pat.children) {
                auto it = sub.captures.find(pat.label.render());
                if (it != sub.captures.end()) {
                    out.push_back(it->second);
                } else {
                    out.push_back(Node(pat.label));
                }
                return;
            }
            Node n(pat.label);
            for (const Pattern& c : *pat.children) instantiate_into(c, sub, n.children);
            out.push_back(std::move(n));
            return;
        }
        case Pattern::Kind::LabelVar: {
            auto it = sub.labels.find(pat.var);
            if (it == sub.labels.end())
                throw std::logic_error("rhs label variable unbound: " + pat.var);
            Node n(it->second);
            if (pat.children)
                for (const Pattern& c : *pat.children) instantiate_into(c, sub, n.children);
            out.push_back(std::move(n));
            return;
        }
    }
}

} // namespace

std::optional<Substitution> match_pattern(const Tree& tree, const Position& at,
                                          const Pattern& lhs) {
    Node node = tree.to_node(at);
    Substitution sub;
    if (!match_node(node, lhs, sub)) return std::nullopt;
    return sub;
}

Node instantiate(const Pattern& rhs, const Substitution& sub) {
    std::vector<Node> out;
    instantiate_into(rhs, sub, out);
    if (out.size() != 1) throw std::logic_error("rhs must instantiate to a single tree");
    return out[0];
}

std::optional<Tree> apply_rule(const Tree& tree, const Position& at, const RewriteRule& rule) {
    if (!tree.contains(at)) throw PositionNotInDomain(at);
    auto sub = match_pattern(tree, at, rule.lhs);
    if (!sub) return std::nullopt;
    if (rule.guard && !rule.guard(*sub)) return std::nullopt;
    Node replacement = instantiate(rule.rhs, *sub);
    if (at.is_root()) {
        if (replacement.label.kind != LabelKind::Root) return std::nullopt;
        return Tree::from_node(replacement);
    }
    Node root = tree.to_node();
    Node* parent = &root;
    for (std::size_t d = 0; d + 1 < at.seq().size(); ++d) parent = &parent->children[at.seq()[d]];
    parent->children[at.seq().back()] = std::move(replacement);
    return Tree::from_node(root);
}

} // namespace architext
