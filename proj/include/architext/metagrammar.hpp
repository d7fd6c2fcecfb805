#ifndef ARCHITEXT_METAGRAMMAR_HPP
#define ARCHITEXT_METAGRAMMAR_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "architext/grammar.hpp"

namespace architext {

/// Synthesized name lists. Primed variants hold the names referenced by the
/// root rule.
struct MetaAttributes {
    std::set<std::string> eL, gL, rL, cgL, crL;
    std::set<std::string> eLp, gLp, rLp, cgLp, crLp;
};

/// One violated semantic constraint of the meta-grammar. `meta_rule` indexes
/// the meta-grammar production whose constraint failed:
///   1 start (closure: referenced names are defined)
///   2 root rule shape            3-8 root list (per-kind uniqueness, shape)
///   9-12 rule list (per-kind name uniqueness + per-rule closure)
///   13 group shape  14 coll-of-groups shape  15 coll-of-relations shape
///   16 relation shape (two distinct groups)  17-18 entity list  19 entity rule
struct Violation {
    int meta_rule = 0;
    std::string message;
    std::size_t rule_index = 0; // 0-based index into grammar.rules
    std::vector<NodeLabel> culprits;
    std::optional<NodeLabel> parent_context; // culprits matter under this label
};

struct ValidationReport {
    bool valid = false;
    std::vector<Violation> violations;
    MetaAttributes attributes;
};

/// Bottom-up S-attribute evaluation of the grammar against the fixed
/// meta-grammar. Entity names referenced by groups or the root rule are
/// implicitly defined; explicit "ENT_x -> <data>" rules are checked for
/// uniqueness.
ValidationReport validate(const CondensedGrammar& grammar);

/// Instance positions whose labels participate in a violated constraint or
/// are not yet categorized (syntactic or auxiliary nodes).
std::set<Position> validity_frontier(const CondensedGrammar& grammar, const Tree& instance);

} // namespace architext

#endif
