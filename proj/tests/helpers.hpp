#ifndef ARCHITEXT_TEST_HELPERS_HPP
#define ARCHITEXT_TEST_HELPERS_HPP

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "architext/bracketed.hpp"
#include "architext/grammar.hpp"
#include "architext/tree.hpp"

namespace test_helpers {

using namespace architext;

/// Instance tree from bracketed text; "(ROOT ...)" or sentence lines.
inline Tree instance(const std::string& text) { return parse_instance(text); }

/// Sentence node from one bracketed expression.
inline Node sentence(const std::string& text) { return parse_bracketed(text); }

/// Random trees for property tests: syntactic labels from a small alphabet
/// so labels repeat, no tokens (every node is schema-level). Sibling order
/// follows a fixed label order, as in treebank derivations; out-of-order
/// siblings would not be derivations of any single rule.
inline Node random_tree(std::mt19937_64& rng, std::size_t max_nodes) {
    const char* alphabet[] = {"a", "b", "c", "d", "e", "f"};
    std::size_t budget = 2 + rng() % (max_nodes - 1);
    std::function<Node(std::size_t&, std::size_t)> build = [&](std::size_t& left,
                                                               std::size_t depth) {
        Node n(NodeLabel::syn(alphabet[rng() % 6]));
        --left;
        if (depth >= 5) return n;
        while (left > 0 && n.children.size() < 4 && rng() % 100 < 55)
            n.children.push_back(build(left, depth + 1));
        std::stable_sort(n.children.begin(), n.children.end(),
                         [](const Node& a, const Node& b) { return a.label < b.label; });
        return n;
    };
    Node root(NodeLabel::root());
    while (budget > 0) root.children.push_back(build(budget, 1));
    std::stable_sort(root.children.begin(), root.children.end(),
                     [](const Node& a, const Node& b) { return a.label < b.label; });
    return root;
}

/// Canonical, id-free view of a grammar for comparison up to renaming:
/// groups keyed by entity-name set, relations by their group keys,
/// collections by member keys, the root rule as a multiset of keys.
struct CanonicalGrammar {
    std::set<std::string> groups;
    std::set<std::string> rels;
    std::set<std::string> colls;
    std::multiset<std::string> root;

    bool operator==(const CanonicalGrammar& o) const {
        return groups == o.groups && rels == o.rels && colls == o.colls && root == o.root;
    }
};

inline CanonicalGrammar canonicalize(const CondensedGrammar& g) {
    std::map<std::string, std::string> group_key, rel_key, coll_key;
    for (const auto& r : g.rules) {
        if (r.lhs.kind != LabelKind::Group) continue;
        std::set<std::string> names;
        for (const auto& s : r.rhs) names.insert(s.label.text);
        std::string key = "G{";
        for (const auto& n : names) key += n + ",";
        key += "}";
        group_key[r.lhs.text] = key;
    }
    for (const auto& r : g.rules) {
        if (r.lhs.kind != LabelKind::Rel) continue;
        std::set<std::string> sides;
        for (const auto& s : r.rhs) sides.insert(group_key.count(s.label.text)
                                                     ? group_key[s.label.text]
                                                     : "?" + s.label.text);
        std::string key = "R{";
        for (const auto& s : sides) key += s + ";";
        key += "}";
        rel_key[r.lhs.text] = key;
    }
    for (const auto& r : g.rules) {
        if (r.lhs.kind != LabelKind::Coll || r.rhs.size() != 1) continue;
        const auto& m = r.rhs[0].label;
        std::string inner = m.kind == LabelKind::Group
                                ? (group_key.count(m.text) ? group_key[m.text] : "?" + m.text)
                                : (rel_key.count(m.text) ? rel_key[m.text] : "?" + m.text);
        coll_key[r.lhs.text] = "C{" + inner + "}";
    }
    CanonicalGrammar out;
    for (const auto& [_, k] : group_key) out.groups.insert(k);
    for (const auto& [_, k] : rel_key) out.rels.insert(k);
    for (const auto& [_, k] : coll_key) out.colls.insert(k);
    if (!g.rules.empty() && g.rules.front().lhs.kind == LabelKind::Root) {
        for (const auto& s : g.rules.front().rhs) {
            switch (s.label.kind) {
                case LabelKind::Entity: out.root.insert("E{" + s.label.text + "}"); break;
                case LabelKind::Group: out.root.insert(group_key[s.label.text]); break;
                case LabelKind::Rel: out.root.insert(rel_key[s.label.text]); break;
                case LabelKind::Coll: out.root.insert(coll_key[s.label.text]); break;
                default: out.root.insert("?"); break;
            }
        }
    }
    return out;
}

} // namespace test_helpers

#endif
