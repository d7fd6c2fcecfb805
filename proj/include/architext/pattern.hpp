#ifndef ARCHITEXT_PATTERN_HPP
#define ARCHITEXT_PATTERN_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "architext/tree.hpp"

namespace architext {

/// Pattern over labels and variables. A pattern child list is a sequence of
/// items; a hedge variable matches any (possibly empty) run of sibling trees.
/// A label item with no child list captures the whole matched sub-tree under
/// that label; with a child list it matches structurally.
struct Pattern {
    enum class Kind {
        HedgeVar,   // binds a hedge
        Concrete,   // concrete label, children matched per `children` if given
        LabelVar,   // binds the node label, children matched per `children`
    };

    Kind kind = Kind::Concrete;
    std::string var;                          // HedgeVar / LabelVar name
    NodeLabel label;                          // Concrete label
    std::optional<std::vector<Pattern>> children; // nullopt on Concrete = capture sub-tree

    static Pattern hedge_var(std::string name) {
        Pattern p;
        p.kind = Kind::HedgeVar;
        p.var = std::move(name);
        return p;
    }
    static Pattern node(NodeLabel l, std::vector<Pattern> ch) {
        Pattern p;
        p.kind = Kind::Concrete;
        p.label = std::move(l);
        p.children = std::move(ch);
        return p;
    }
    /// Matches any node with this label, capturing the entire sub-tree.
    static Pattern capture(NodeLabel l) {
        Pattern p;
        p.kind = Kind::Concrete;
        p.label = std::move(l);
        return p;
    }
    static Pattern label_var(std::string name, std::vector<Pattern> ch) {
        Pattern p;
        p.kind = Kind::LabelVar;
        p.var = std::move(name);
        p.children = std::move(ch);
        return p;
    }
};

/// Bindings produced by a successful match.
struct Substitution {
    std::map<std::string, Hedge> hedges;        // hedge variables
    std::map<std::string, NodeLabel> labels;    // label variables
    std::map<std::string, Node> captures;       // captured sub-trees, keyed by rendered label

    const Hedge& hedge(const std::string& name) const { return hedges.at(name); }
};

/// Position-directed rewriting rule with an optional guard on the bindings.
struct RewriteRule {
    Pattern lhs;
    Pattern rhs;
    std::function<bool(const Substitution&)> guard; // empty = always true
};

/// Matches the sub-tree at `at` against the pattern; leftmost-shortest hedge
/// bindings make the match deterministic.
std::optional<Substitution> match_pattern(const Tree& tree, const Position& at,
                                          const Pattern& lhs);

/// Instantiates a pattern under a substitution.
Node instantiate(const Pattern& rhs, const Substitution& sub);

/// Applies the rule at `at`. Returns the rewritten tree, or nullopt when the
/// pattern does not match or the guard rejects. The input is not mutated.
std::optional<Tree> apply_rule(const Tree& tree, const Position& at, const RewriteRule& rule);

} // namespace architext

#endif
