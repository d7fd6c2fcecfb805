#include "architext/metagrammar.hpp"

namespace architext {

namespace {

struct Checker {
    const CondensedGrammar& g;
    ValidationReport report;

    void fail(int meta_rule, std::size_t rule_index, std::string message,
              std::vector<NodeLabel> culprits = {},
              std::optional<NodeLabel> context = std::nullopt) {
        report.violations.push_back(
            {meta_rule, std::move(message), rule_index, std::move(culprits), std::move(context)});
    }

    void run() {
        auto& a = report.attributes;
        if (g.rules.empty()) {
            fail(2, 0, "grammar has no root rule");
            return;
        }

        // Body rules first: synthesize the defined-name lists bottom-up.
        for (std::size_t i = 1; i < g.rules.size(); ++i) body_rule(i);

        // Root rule.
        const Rule& root = g.rules.front();
        if (root.lhs.kind != LabelKind::Root) {
            fail(2, 0, "first rule must expand ROOT");
        } else {
            std::set<std::string> coll_refs;
            for (const auto& s : root.rhs) {
                switch (s.label.kind) {
                    case LabelKind::Entity:
                        if (s.plus) fail(4, 0, "'+' not allowed in the root rule", {s.label});
                        if (!a.eLp.insert(s.label.text).second)
                            fail(4, 0, "entity " + s.label.render() + " repeated in root rule",
                                 {s.label});
                        break;
                    case LabelKind::Group:
                        if (s.plus) fail(5, 0, "'+' not allowed in the root rule", {s.label});
                        if (!a.gLp.insert(s.label.text).second)
                            fail(5, 0, "group " + s.label.render() + " repeated in root rule",
                                 {s.label});
                        break;
                    case LabelKind::Rel:
                        if (s.plus) fail(6, 0, "'+' not allowed in the root rule", {s.label});
                        if (!a.rLp.insert(s.label.text).second)
                            fail(6, 0, "relation " + s.label.render() + " repeated in root rule",
                                 {s.label});
                        break;
                    case LabelKind::Coll:
                        if (s.plus) fail(7, 0, "'+' not allowed in the root rule", {s.label});
                        if (!coll_refs.insert(s.label.text).second)
                            fail(7, 0, "collection " + s.label.render() + " repeated in root rule",
                                 {s.label});
                        break;
                    default:
                        fail(2, 0,
                             "root rule may reference only entities, groups, relations and "
                             "collections, found " +
                                 s.label.render(),
                             {s.label});
                }
            }
            // Closure of the root references (meta-rule 1).
            for (const auto& n : a.gLp)
                if (!a.gL.count(n))
                    fail(1, 0, "root references undefined GROUP_" + n, {NodeLabel::group(n)});
            for (const auto& n : a.rLp)
                if (!a.rL.count(n))
                    fail(1, 0, "root references undefined REL_" + n, {NodeLabel::rel(n)});
            for (const auto& n : coll_refs) {
                if (a.cgL.count(n)) {
                    a.cgLp.insert(n);
                } else if (a.crL.count(n)) {
                    a.crLp.insert(n);
                } else {
                    a.cgLp.insert(n);
                    fail(1, 0, "root references undefined COLL_" + n, {NodeLabel::coll(n)});
                }
            }
            // Referenced entities are implicitly defined.
            a.eL.insert(a.eLp.begin(), a.eLp.end());
        }

        report.valid = report.violations.empty();
    }

    void body_rule(std::size_t i) {
        auto& a = report.attributes;
        const Rule& r = g.rules[i];
        switch (r.lhs.kind) {
            case LabelKind::Entity: {
                if (!a.eL.insert(r.lhs.text).second)
                    fail(9, i, "entity name " + r.lhs.render() + " already defined", {r.lhs});
                if (!r.entity_data)
                    fail(19, i, r.lhs.render() + " must expand to <data>", {r.lhs});
                break;
            }
            case LabelKind::Group: {
                if (r.rhs.empty())
                    fail(17, i, r.lhs.render() + " must contain at least one entity", {r.lhs});
                std::set<std::string> members;
                for (const auto& s : r.rhs) {
                    if (s.label.kind != LabelKind::Entity) {
                        fail(13, i,
                             r.lhs.render() + " may contain only entities, found " +
                                 s.label.render(),
                             {s.label}, r.lhs);
                        continue;
                    }
                    if (s.plus)
                        fail(13, i, "'+' not allowed inside " + r.lhs.render(), {s.label}, r.lhs);
                    if (!members.insert(s.label.text).second)
                        fail(18, i, s.label.render() + " repeated inside " + r.lhs.render(),
                             {s.label}, r.lhs);
                    a.eL.insert(s.label.text); // implicit entity definition
                }
                if (!a.gL.insert(r.lhs.text).second)
                    fail(10, i, "group name " + r.lhs.render() + " already defined", {r.lhs});
                break;
            }
            case LabelKind::Rel: {
                bool shape_ok = r.rhs.size() == 2;
                for (const auto& s : r.rhs)
                    if (s.label.kind != LabelKind::Group || s.plus) shape_ok = false;
                if (!shape_ok) {
                    fail(16, i, r.lhs.render() + " must relate exactly two groups", {r.lhs});
                } else {
                    if (r.rhs[0].label.text == r.rhs[1].label.text)
                        fail(16, i, r.lhs.render() + " must relate two distinct groups",
                             {r.rhs[0].label}, r.lhs);
                    for (const auto& s : r.rhs)
                        if (!defined_group(s.label.text))
                            fail(11, i, r.lhs.render() + " references undefined " + s.label.render(),
                                 {s.label}, r.lhs);
                }
                if (!a.rL.insert(r.lhs.text).second)
                    fail(11, i, "relation name " + r.lhs.render() + " already defined", {r.lhs});
                break;
            }
            case LabelKind::Coll: {
                // name registration first, so a shape violation does not
                // cascade into closure failures elsewhere
                bool rel_flavoured = !r.rhs.empty() && r.rhs[0].label.kind == LabelKind::Rel;
                if (coll_name_taken(r.lhs.text))
                    fail(12, i, "collection name " + r.lhs.render() + " already defined",
                         {r.lhs});
                else
                    (rel_flavoured ? a.crL : a.cgL).insert(r.lhs.text);
                if (r.rhs.size() != 1 || !r.rhs[0].plus) {
                    fail(rel_flavoured ? 15 : 14, i,
                         r.lhs.render() + " must contain one repeated group or relation",
                         {r.lhs});
                    break;
                }
                const Symbol& m = r.rhs[0];
                if (m.label.kind == LabelKind::Group) {
                    if (!defined_group(m.label.text))
                        fail(12, i, r.lhs.render() + " references undefined " + m.label.render(),
                             {m.label}, r.lhs);
                } else if (m.label.kind == LabelKind::Rel) {
                    if (!defined_rel(m.label.text))
                        fail(12, i, r.lhs.render() + " references undefined " + m.label.render(),
                             {m.label}, r.lhs);
                } else {
                    fail(14, i, r.lhs.render() + " member must be a group or a relation",
                         {m.label}, r.lhs);
                }
                break;
            }
            case LabelKind::Root:
                fail(2, i, "only the first rule may expand ROOT");
                break;
            default:
                fail(1, i, "rule for " + r.lhs.render() + " is not derivable by the meta-grammar",
                     {r.lhs});
        }
    }

    // Group/relation definitions anywhere in the grammar (order-free closure).
    bool defined_group(const std::string& n) const {
        for (const auto& r : g.rules)
            if (r.lhs.kind == LabelKind::Group && r.lhs.text == n) return true;
        return false;
    }
    bool defined_rel(const std::string& n) const {
        for (const auto& r : g.rules)
            if (r.lhs.kind == LabelKind::Rel && r.lhs.text == n) return true;
        return false;
    }
    bool coll_name_taken(const std::string& n) const {
        return report.attributes.cgL.count(n) || report.attributes.crL.count(n);
    }
};

} // namespace

ValidationReport validate(const CondensedGrammar& grammar) {
    Checker c{grammar, {}};
    c.run();
    return c.report;
}

std::set<Position> validity_frontier(const CondensedGrammar& grammar, const Tree& instance) {
    std::set<Position> out;
    for (const auto& [p, l] : instance.nodes())
        if (l.is_uncategorized()) out.insert(p);

    ValidationReport report = validate(grammar);
    for (const auto& v : report.violations) {
        for (const auto& culprit : v.culprits) {
            for (const auto& [p, l] : instance.nodes()) {
                if (l != culprit) continue;
                if (v.parent_context) {
                    if (!p.is_root() && instance.label(p.parent()) == *v.parent_context)
                        out.insert(p);
                } else {
                    out.insert(p);
                }
            }
        }
    }
    return out;
}

} // namespace architext
