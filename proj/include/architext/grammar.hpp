#ifndef ARCHITEXT_GRAMMAR_HPP
#define ARCHITEXT_GRAMMAR_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "architext/similarity.hpp"
#include "architext/tree.hpp"

namespace architext {

/// One right-hand-side symbol of a condensed CFG rule; `plus` marks one or
/// more repetitions.
struct Symbol {
    NodeLabel label;
    bool plus = false;

    bool operator==(const Symbol& o) const { return label == o.label && plus == o.plus; }
};

struct Rule {
    NodeLabel lhs;
    std::vector<Symbol> rhs;
    bool entity_data = false; // ENT_x -> <data>

    bool operator==(const Rule& o) const {
        return lhs == o.lhs && rhs == o.rhs && entity_data == o.entity_data;
    }
};

/// Condensed context-free grammar; the first rule (when present) expands the
/// root symbol. One rule per left-hand side.
struct CondensedGrammar {
    std::vector<Rule> rules;

    const Rule* rule_for(const NodeLabel& lhs) const {
        for (const auto& r : rules)
            if (r.lhs == lhs) return &r;
        return nullptr;
    }
    bool operator==(const CondensedGrammar& o) const { return rules == o.rules; }
};

/// Quotient tree: a tree over equivalence classes with per-occurrence
/// repetition marks.
struct QuotientTree {
    std::map<Position, NodeLabel> labels;
    std::set<Position> repeated;

    bool contains(const Position& p) const { return labels.count(p) != 0; }
};

/// Classes containing at least one child of an element of `block`.
std::set<std::size_t> succ(const Tree& tree, const Partition& partition, std::size_t block);

/// Builds the quotient tree: the root block expands at the root; each class
/// expands once (at its first position in breadth order) with its successor
/// classes as children, ordered by first appearance below the expanding
/// class; later occurrences are leaves. A child class is marked repeated
/// when some member of the expanding class has two or more children in it.
QuotientTree quotient(const Tree& tree, const Partition& partition);

/// Extracts the condensed grammar of the instance: label partition over the
/// token-stripped tree (entities are the terminal layer), quotient tree, one
/// rule per class with successors.
CondensedGrammar extract_grammar(const Tree& tree);

/// Derivation check. With allow_missing, a node may realize any subsequence
/// of its rule's right-hand side; a plus symbol matches one or more
/// consecutive repetitions.
bool accepts(const CondensedGrammar& grammar, const Tree& tree, bool allow_missing);

/// Line-oriented text format: "LHS -> S1 S2+ ...", '#' comments, the root
/// symbol rendered ROOT, entity bodies as "<data>". Round-trips bit-exactly.
std::string write_grammar(const CondensedGrammar& grammar);
CondensedGrammar parse_grammar(const std::string& text);

} // namespace architext

#endif
