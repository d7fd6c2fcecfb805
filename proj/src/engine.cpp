#include "architext/engine.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>

namespace architext {

namespace {

Node* navigate(Node& root, const Position& p) {
    Node* n = &root;
    for (std::uint32_t i : p.seq()) n = &n->children[i];
    return n;
}

bool node_contains_structure(const Node& n) {
    if (n.label.kind == LabelKind::Group || n.label.kind == LabelKind::Rel ||
        n.label.kind == LabelKind::Coll)
        return true;
    for (const auto& c : n.children)
        if (node_contains_structure(c)) return true;
    return false;
}

// Positions having a categorized ancestor (entity/group/rel/coll) are off
// limits for restructuring.
bool has_categorized_ancestor(const Tree& tree, const Position& p) {
    Position q = p;
    while (!q.is_root()) {
        q = q.parent();
        LabelKind k = tree.label(q).kind;
        if (k == LabelKind::Entity || k == LabelKind::Group || k == LabelKind::Rel ||
            k == LabelKind::Coll)
            return true;
    }
    return false;
}

void collect_entity_names(const Node& n, std::set<std::string>& out) {
    if (n.label.kind == LabelKind::Entity) out.insert(n.label.text);
    for (const auto& c : n.children) collect_entity_names(c, out);
}

std::string join(const std::set<std::string>& parts) {
    std::string out;
    for (const auto& s : parts) {
        if (!out.empty()) out += '|';
        out += s;
    }
    return out;
}

// Keeps only entity sub-trees as children, promoting through intermediate
// nodes; non-entity leaves are dropped.
void flatten_to_entities(Node& group) {
    std::vector<Node> out;
    std::function<void(Node&)> take = [&](Node& n) {
        for (auto& c : n.children) {
            if (c.label.kind == LabelKind::Entity)
                out.push_back(std::move(c));
            else if (!c.children.empty())
                take(c);
        }
    };
    take(group);
    group.children = std::move(out);
}

std::vector<std::uint32_t> ancestor_chain(const EquivContext& ctx, std::uint32_t cand_feature,
                                          const Position& parent) {
    std::vector<std::uint32_t> chain{cand_feature};
    Position q = parent;
    chain.push_back(ctx.engine->feature(q));
    while (!q.is_root()) {
        q = q.parent();
        chain.push_back(ctx.engine->feature(q));
    }
    return chain;
}

bool under_any(const std::vector<Position>& roots, const Position& p) {
    for (const auto& r : roots)
        if (r.is_prefix_of(p)) return true;
    return false;
}

// Support of a hypothetical sub-tree, measured against group occurrences:
// itself plus the group-labelled positions tau-similar to it, skipping the
// occurrences inside consumed sub-trees. Counted over the distinct group
// chains, then adjusted for the (few) consumed positions.
std::size_t group_support_of_chain(const EquivContext& ctx, const std::vector<std::uint32_t>& chain,
                                   const std::vector<Position>& consumed) {
    std::size_t count = 1;
    for (std::size_t c = 0; c < ctx.group_chains.size(); ++c)
        if (ctx.engine->sim_chains(chain, ctx.group_chains[c]) >= ctx.params.tau)
            count += ctx.group_chain_count[c];
    for (const auto& v : ctx.group_positions) {
        if (!under_any(consumed, v)) continue;
        if (ctx.engine->sim_chain(chain, v) >= ctx.params.tau) --count;
    }
    return count;
}

// Support of an existing sub-tree: the size of {p} plus its tau-similar
// group occurrences. A group's own chain bucket already includes it.
std::size_t group_support_of(const EquivContext& ctx, const Position& p) {
    std::vector<std::uint32_t> chain = ctx.engine->chain_at(p);
    std::size_t count = ctx.tree->label(p).kind == LabelKind::Group ? 0 : 1;
    for (std::size_t c = 0; c < ctx.group_chains.size(); ++c)
        if (ctx.engine->sim_chains(chain, ctx.group_chains[c]) >= ctx.params.tau)
            count += ctx.group_chain_count[c];
    return count;
}

} // namespace

const char* edit_op_name(EditOp op) {
    switch (op) {
        case EditOp::FindGroups: return "findGroups";
        case EditOp::FindSubgroups: return "findSubgroups";
        case EditOp::MergeGroups: return "mergeGroups";
        case EditOp::FindCollectionsOfGroups: return "findCollectionsOfGroups";
        case EditOp::FindRelationships: return "findRelationships";
        case EditOp::FindCollectionsOfRelationships: return "findCollectionsOfRelationships";
        case EditOp::ReduceBottom: return "reduceBottom";
        case EditOp::ReduceTop: return "reduceTop";
        case EditOp::None: return "none";
    }
    return "none";
}

namespace {

void finish_context(EquivContext& ctx, const Tree& tree) {
    ctx.engine = std::make_shared<SimEngine>(tree, ctx.params.f);
    std::map<std::vector<std::uint32_t>, std::size_t> buckets;
    for (const auto& [p, l] : tree.nodes()) {
        if (l.kind != LabelKind::Group) continue;
        ctx.group_positions.push_back(p);
        auto [it, fresh] = buckets.emplace(ctx.engine->chain_at(p), ctx.group_chains.size());
        if (fresh) {
            ctx.group_chains.push_back(it->first);
            ctx.group_chain_count.push_back(0);
        }
        ++ctx.group_chain_count[it->second];
    }
}

} // namespace

EquivContext EquivContext::compute(const Tree& tree, const SimParams& params) {
    EquivContext ctx;
    ctx.tree = &tree;
    ctx.params = params;
    for (const auto& [p, l] : tree.nodes())
        if (!tree.is_leaf(p)) ctx.scope.push_back(p);
    ctx.partition = equivalence_classes(tree, ctx.scope, params);
    finish_context(ctx, tree);
    return ctx;
}

EquivContext EquivContext::from_partition(const Tree& tree, const SimParams& params,
                                          Partition partition) {
    EquivContext ctx;
    ctx.tree = &tree;
    ctx.params = params;
    for (const auto& [p, l] : tree.nodes())
        if (!tree.is_leaf(p)) ctx.scope.push_back(p);
    ctx.partition = std::move(partition);
    finish_context(ctx, tree);
    return ctx;
}

std::size_t support(const Tree&, const Partition& partition, std::size_t block) {
    if (block >= partition.blocks.size()) throw std::out_of_range("no such block");
    return partition.blocks[block].size();
}

// ---------------------------------------------------------------------------
// findGroups

std::optional<Tree> find_groups(const Tree& tree, const Partition& partition,
                                std::size_t min_support, NameRegistry& registry) {
    // Positions with a group/rel/coll somewhere below.
    std::set<Position> structure_above;
    for (const auto& [p, l] : tree.nodes()) {
        if (l.kind == LabelKind::Group || l.kind == LabelKind::Rel || l.kind == LabelKind::Coll) {
            Position q = p;
            while (!q.is_root()) {
                q = q.parent();
                structure_above.insert(q);
            }
        }
    }

    auto is_candidate = [&](const Position& p) {
        if (p.is_root()) return false;
        if (!tree.label(p).is_uncategorized()) return false;
        if (structure_above.count(p)) return false;
        if (has_categorized_ancestor(tree, p)) return false;
        for (const Position& c : tree.children(p))
            if (tree.label(c).kind == LabelKind::Entity) return true;
        return false;
    };

    struct Qualifying {
        std::vector<Position> members;
        std::size_t min_depth;
    };
    std::vector<Qualifying> classes;
    for (const auto& block : partition.blocks) {
        std::vector<Position> members;
        for (const auto& p : block)
            if (is_candidate(p)) members.push_back(p);
        if (members.size() < min_support) continue;
        std::size_t d = members.front().depth();
        for (const auto& m : members) d = std::min(d, m.depth());
        classes.push_back({std::move(members), d});
    }
    if (classes.empty()) return std::nullopt;

    // Deepest classes first, ties by smallest member.
    std::stable_sort(classes.begin(), classes.end(), [](const Qualifying& a, const Qualifying& b) {
        if (a.min_depth != b.min_depth) return a.min_depth > b.min_depth;
        return a.members.front() < b.members.front();
    });

    Node root = tree.to_node();
    bool modified = false;
    std::vector<Position> new_groups;
    auto live_path_clear = [&root](const Position& p) {
        const Node* n = &root;
        for (std::uint32_t i : p.seq()) {
            LabelKind k = n->label.kind;
            if (k == LabelKind::Entity || k == LabelKind::Group || k == LabelKind::Rel ||
                k == LabelKind::Coll)
                return false;
            n = &n->children[i];
        }
        return true;
    };
    for (const auto& qc : classes) {
        std::string id;
        for (const auto& m : qc.members) {
            Node* n = navigate(root, m);
            if (!n->label.is_uncategorized()) continue;
            if (node_contains_structure(*n)) continue; // labelled by a deeper class already
            if (!live_path_clear(m)) continue;         // an ancestor became a group already
            if (id.empty()) {
                std::set<std::string> names;
                for (const auto& q : qc.members) collect_entity_names(tree.to_node(q), names);
                id = registry.group_id("G|" + join(names));
            }
            n->label = NodeLabel::group(id);
            new_groups.push_back(m);
            modified = true;
        }
    }
    if (!modified) return std::nullopt;
    for (const auto& m : new_groups) flatten_to_entities(*navigate(root, m));
    return Tree::from_node(root);
}

// ---------------------------------------------------------------------------
// findSubgroups

std::vector<std::vector<std::size_t>> subgroup_subsets(std::size_t m) {
    std::vector<std::vector<std::size_t>> out;
    if (m < 2) return out;
    for (std::size_t size = m - 1; size >= 1; --size) {
        // lexicographic combinations of {0..m-1} of the given size
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            out.push_back(idx);
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == m - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (size == 1) break;
    }
    return out;
}

std::optional<Tree> find_subgroups(const EquivContext& ctx, std::size_t min_support,
                                   NameRegistry& registry) {
    const Tree& tree = *ctx.tree;
    for (const auto& [st, label] : tree.nodes()) {
        bool eligible = label.kind == LabelKind::Group || label.is_uncategorized();
        if (!eligible || st.is_root()) continue;
        if (has_categorized_ancestor(tree, st)) continue;
        std::vector<Position> kids = tree.children(st);
        std::vector<std::size_t> ents;
        for (std::size_t i = 0; i < kids.size(); ++i)
            if (tree.label(kids[i]).kind == LabelKind::Entity) ents.push_back(i);
        if (ents.size() < 2) continue;

        std::size_t original = group_support_of(ctx, st);
        for (const auto& subset : subgroup_subsets(ents.size())) {
            std::set<std::string> names;
            Node cand(NodeLabel::group("?"));
            for (std::size_t k : subset) {
                Node e = tree.to_node(kids[ents[k]]);
                collect_entity_names(e, names);
                cand.children.push_back(std::move(e));
            }
            cand.label = NodeLabel::group(registry.peek_group("G|" + join(names)));
            auto chain = ancestor_chain(ctx, ctx.engine->intern_node(cand), st);
            std::size_t cand_support = group_support_of_chain(ctx, chain, {st});
            if (cand_support > original && cand_support >= min_support) {
                Node root = tree.to_node();
                Node* n = navigate(root, st);
                std::string id = registry.group_id("G|" + join(names));
                Node group(NodeLabel::group(id));
                std::set<std::size_t> taken;
                for (std::size_t k : subset) taken.insert(ents[k]);
                std::vector<Node> rest;
                for (std::size_t i = 0; i < n->children.size(); ++i) {
                    if (taken.count(i))
                        group.children.push_back(std::move(n->children[i]));
                    else
                        rest.push_back(std::move(n->children[i]));
                }
                std::vector<Node> repl;
                repl.push_back(std::move(group));
                for (auto& r : rest) repl.push_back(std::move(r));
                n->label = NodeLabel::unlabelled();
                n->children = std::move(repl);
                return Tree::from_node(root);
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// mergeGroups

std::vector<std::vector<Position>> merge_combinations(const Tree& tree, const Partition& partition,
                                                      const Position& st) {
    std::vector<Position> groups, ents;
    for (const Position& c : tree.children(st)) {
        LabelKind k = tree.label(c).kind;
        if (k == LabelKind::Group) groups.push_back(c);
        if (k == LabelKind::Entity) ents.push_back(c);
    }
    // Class ids; uncovered positions count as singleton classes.
    std::map<Position, std::size_t> cls;
    std::size_t synthetic = partition.blocks.size();
    std::set<std::size_t> group_classes;
    for (const auto& g : groups) {
        std::size_t c = partition.covers(g) ? partition.block_of(g) : synthetic++;
        cls[g] = c;
        group_classes.insert(c);
    }
    std::size_t max_size = group_classes.size() + ents.size();

    std::vector<Position> pool = groups;
    pool.insert(pool.end(), ents.begin(), ents.end());
    std::sort(pool.begin(), pool.end());
    if (pool.size() > 12) {
        // enumerate per-class representatives to keep this bounded
        std::set<std::size_t> seen;
        std::vector<Position> reduced;
        for (const auto& g : groups)
            if (seen.insert(cls[g]).second) reduced.push_back(g);
        reduced.insert(reduced.end(), ents.begin(), ents.end());
        std::sort(reduced.begin(), reduced.end());
        if (reduced.size() > 12) reduced.resize(12);
        pool = std::move(reduced);
    }

    std::vector<std::vector<Position>> out;
    std::size_t n = pool.size();
    for (std::size_t size = std::min(max_size, n); size >= 2; --size) {
        std::vector<std::size_t> idx(size);
        for (std::size_t i = 0; i < size; ++i) idx[i] = i;
        while (true) {
            // reject combinations holding two equivalent groups
            std::set<std::size_t> used;
            bool ok = true;
            for (std::size_t i : idx) {
                auto it = cls.find(pool[i]);
                if (it != cls.end() && !used.insert(it->second).second) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                std::vector<Position> combo;
                for (std::size_t i : idx) combo.push_back(pool[i]);
                out.push_back(std::move(combo));
            }
            std::size_t i = size;
            while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (size == 2) break;
    }
    return out;
}

std::optional<Tree> merge_groups(const EquivContext& ctx, NameRegistry& registry) {
    const Tree& tree = *ctx.tree;
    for (const auto& [st, label] : tree.nodes()) {
        if (!(label.is_uncategorized() || label.kind == LabelKind::Root)) continue;
        if (has_categorized_ancestor(tree, st)) continue;
        std::vector<Position> kids = tree.children(st);
        std::size_t n_groups = 0, n_ents = 0;
        for (const auto& c : kids) {
            LabelKind k = tree.label(c).kind;
            if (k == LabelKind::Group) ++n_groups;
            if (k == LabelKind::Entity) ++n_ents;
        }
        if (n_groups < 1 || n_groups + n_ents < 2) continue;

        for (const auto& combo : merge_combinations(tree, ctx.partition, st)) {
            bool has_group = false;
            for (const auto& m : combo)
                if (tree.label(m).kind == LabelKind::Group) has_group = true;
            if (!has_group) continue;

            // Candidate merged group: entity children of the members.
            std::set<std::string> names;
            Node cand(NodeLabel::group("?"));
            for (const auto& m : combo) {
                Node mn = tree.to_node(m);
                collect_entity_names(mn, names);
                if (mn.label.kind == LabelKind::Group) {
                    for (auto& c : mn.children) cand.children.push_back(std::move(c));
                } else {
                    cand.children.push_back(std::move(mn));
                }
            }
            cand.label = NodeLabel::group(registry.peek_group("G|" + join(names)));
            auto chain = ancestor_chain(ctx, ctx.engine->intern_node(cand), st);
            std::size_t cand_support = group_support_of_chain(ctx, chain, combo);
            std::size_t original = 0;
            for (const auto& m : combo)
                if (tree.label(m).kind == LabelKind::Group)
                    original = std::max(original, group_support_of(ctx, m));
            if (cand_support <= original) continue;

            Node root = tree.to_node();
            Node* stn = navigate(root, st);
            std::string id = registry.group_id("G|" + join(names));
            Node merged(NodeLabel::group(id));
            std::set<std::uint32_t> taken;
            for (const auto& m : combo) taken.insert(m.last_index());
            std::vector<Node> rest;
            for (std::uint32_t i = 0; i < stn->children.size(); ++i) {
                Node& child = stn->children[i];
                if (taken.count(i)) {
                    if (child.label.kind == LabelKind::Group) {
                        for (auto& c : child.children) merged.children.push_back(std::move(c));
                    } else {
                        merged.children.push_back(std::move(child));
                    }
                } else {
                    rest.push_back(std::move(child));
                }
            }
            std::vector<Node> repl;
            repl.push_back(std::move(merged));
            for (auto& r : rest) repl.push_back(std::move(r));
            stn->children = std::move(repl);
            return Tree::from_node(root);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// findRelations

namespace {

bool coll_of_groups(const Node& n) {
    if (n.label.kind != LabelKind::Coll || n.children.empty()) return false;
    for (const auto& c : n.children)
        if (c.label.kind != LabelKind::Group) return false;
    return true;
}

void relations_walk(Node& n, NameRegistry& registry, bool& modified) {
    for (auto& c : n.children) relations_walk(c, registry, modified);
    if (n.label.kind == LabelKind::Entity) return;

    std::vector<Node> out;
    out.reserve(n.children.size());
    for (auto& child : n.children) {
        if (child.label.is_uncategorized() && child.children.size() == 2) {
            Node& a = child.children[0];
            Node& b = child.children[1];
            if (a.label.kind == LabelKind::Group && b.label.kind == LabelKind::Group &&
                a.label.text != b.label.text) {
                std::string lo = std::min(a.label.text, b.label.text);
                std::string hi = std::max(a.label.text, b.label.text);
                child.label = NodeLabel::rel(registry.rel_id("R|" + lo + "," + hi));
                out.push_back(std::move(child));
                modified = true;
                continue;
            }
            bool a_group = a.label.kind == LabelKind::Group;
            bool b_group = b.label.kind == LabelKind::Group;
            if ((a_group && coll_of_groups(b)) || (b_group && coll_of_groups(a))) {
                Node& group = a_group ? a : b;
                Node& coll = a_group ? b : a;
                for (auto& member : coll.children) {
                    std::string lo = std::min(group.label.text, member.label.text);
                    std::string hi = std::max(group.label.text, member.label.text);
                    Node rel(NodeLabel::rel(registry.rel_id("R|" + lo + "," + hi)));
                    if (a_group) {
                        rel.children.push_back(group);
                        rel.children.push_back(std::move(member));
                    } else {
                        rel.children.push_back(std::move(member));
                        rel.children.push_back(group);
                    }
                    out.push_back(std::move(rel));
                }
                modified = true;
                continue;
            }
        }
        out.push_back(std::move(child));
    }
    n.children = std::move(out);
}

} // namespace

std::optional<Tree> find_relations(const Tree& tree, NameRegistry& registry) {
    Node root = tree.to_node();
    bool modified = false;
    relations_walk(root, registry, modified);
    if (!modified) return std::nullopt;
    return Tree::from_node(root);
}

// ---------------------------------------------------------------------------
// findCollections

namespace {

struct CollState {
    bool modified = false;
    LabelKind member_kind;
    const Partition* partition;
    NameRegistry* registry;
};

void collections_walk(Node& n, const Position& pos, CollState& s) {
    for (std::uint32_t i = 0; i < n.children.size(); ++i)
        collections_walk(n.children[i], pos.child(i), s);
    if (!(n.label.is_uncategorized() || n.label.kind == LabelKind::Root)) return;

    struct Entry {
        Node node;
        bool is_coll = false;    // collection of the target kind
        bool is_stray = false;   // bare child of the target kind
        std::optional<std::size_t> cls;
        std::size_t order = 0;
    };
    std::vector<Entry> entries;
    bool any_target = false;
    for (std::uint32_t i = 0; i < n.children.size(); ++i) {
        Entry e;
        e.order = i;
        Node& child = n.children[i];
        Position cp = pos.child(i);
        if (child.label.kind == s.member_kind) {
            e.is_stray = true;
            if (s.partition->covers(cp)) e.cls = s.partition->block_of(cp);
            any_target = true;
        } else if (child.label.kind == LabelKind::Coll && !child.children.empty()) {
            bool of_kind = true;
            for (const auto& m : child.children)
                if (m.label.kind != s.member_kind) of_kind = false;
            if (of_kind) {
                e.is_coll = true;
                Position mp = cp.child(0);
                if (s.partition->covers(mp)) e.cls = s.partition->block_of(mp);
                any_target = true;
            }
        }
        e.node = std::move(child);
        entries.push_back(std::move(e));
    }
    if (!any_target) {
        for (std::size_t i = 0; i < entries.size(); ++i) n.children[i] = std::move(entries[i].node);
        return;
    }

    bool changed = false;

    // Step 1: wrap stray siblings sharing a class, two or more, in a new
    // collection (appended after the surviving children).
    std::map<std::size_t, std::vector<std::size_t>> stray_by_class;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].is_stray && entries[i].cls) stray_by_class[*entries[i].cls].push_back(i);
    std::vector<Entry> created;
    std::set<std::size_t> consumed;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> wrap_order(
        stray_by_class.begin(), stray_by_class.end());
    std::sort(wrap_order.begin(), wrap_order.end(),
              [](const auto& a, const auto& b) { return a.second.front() < b.second.front(); });
    for (const auto& [cls, idxs] : wrap_order) {
        if (idxs.size() < 2) continue;
        std::set<std::string> member_ids;
        for (std::size_t i : idxs) member_ids.insert(entries[i].node.label.text);
        std::string prefix = s.member_kind == LabelKind::Group ? "CG|" : "CR|";
        Node coll(NodeLabel::coll(s.registry->coll_id(prefix + join(member_ids))));
        for (std::size_t i : idxs) {
            coll.children.push_back(std::move(entries[i].node));
            consumed.insert(i);
        }
        Entry e;
        e.node = std::move(coll);
        e.is_coll = true;
        e.cls = cls;
        e.order = entries.size() + created.size();
        created.push_back(std::move(e));
        changed = true;
    }

    std::vector<Entry> kept;
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (!consumed.count(i)) kept.push_back(std::move(entries[i]));
    for (auto& e : created) kept.push_back(std::move(e));

    // Step 2: merge sibling collections whose members share a class.
    std::map<std::size_t, std::size_t> first_coll_by_class;
    std::set<std::size_t> dead;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!kept[i].is_coll || !kept[i].cls) continue;
        auto [it, fresh] = first_coll_by_class.emplace(*kept[i].cls, i);
        if (!fresh) {
            Node& target = kept[it->second].node;
            for (auto& m : kept[i].node.children) target.children.push_back(std::move(m));
            dead.insert(i);
            changed = true;
        }
    }

    // Step 3: absorb stray children equivalent to an existing collection.
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!kept[i].is_stray || !kept[i].cls || dead.count(i)) continue;
        auto it = first_coll_by_class.find(*kept[i].cls);
        if (it == first_coll_by_class.end()) continue;
        kept[it->second].node.children.push_back(std::move(kept[i].node));
        dead.insert(i);
        changed = true;
    }

    if (!changed) {
        // restore original order untouched
        std::sort(kept.begin(), kept.end(),
                  [](const Entry& a, const Entry& b) { return a.order < b.order; });
        n.children.clear();
        for (auto& e : kept) n.children.push_back(std::move(e.node));
        return;
    }
    std::vector<Node> out;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (!dead.count(i)) out.push_back(std::move(kept[i].node));
    n.children = std::move(out);
    s.modified = true;
}

} // namespace

std::optional<Tree> find_collections(const Tree& tree, const Partition& partition,
                                     CollectionKind kind, NameRegistry& registry) {
    CollState s;
    s.member_kind = kind == CollectionKind::Groups ? LabelKind::Group : LabelKind::Rel;
    s.partition = &partition;
    s.registry = &registry;
    Node root = tree.to_node();
    collections_walk(root, Position::root(), s);
    if (!s.modified) return std::nullopt;
    return Tree::from_node(root);
}

// ---------------------------------------------------------------------------
// reduce(bottom) / reduce(top)

namespace {

void reduce_bottom_walk(Node& n, bool& modified) {
    for (auto& c : n.children) reduce_bottom_walk(c, modified);
    for (auto& c : n.children) {
        while (c.label.is_uncategorized() && c.children.size() == 1 &&
               c.children[0].label.kind == LabelKind::Entity) {
            Node promoted = std::move(c.children[0]);
            c = std::move(promoted);
            modified = true;
        }
    }
}

void reduce_top_walk(Node& n, bool& modified) {
    for (auto& c : n.children) reduce_top_walk(c, modified);
    std::vector<Node> out;
    out.reserve(n.children.size());
    for (auto& c : n.children) {
        if (c.label.is_uncategorized() && !c.children.empty()) {
            for (auto& gc : c.children) out.push_back(std::move(gc));
            modified = true;
        } else {
            out.push_back(std::move(c));
        }
    }
    n.children = std::move(out);
}

} // namespace

std::optional<Tree> reduce_bottom(const Tree& tree) {
    Node root = tree.to_node();
    bool modified = false;
    reduce_bottom_walk(root, modified);
    if (!modified) return std::nullopt;
    return Tree::from_node(root);
}

std::optional<Tree> reduce_top(const Tree& tree) {
    for (const Position& leaf : tree.leaves()) {
        if (leaf.is_root()) continue;
        LabelKind k = tree.label(leaf.parent()).kind;
        if (k == LabelKind::Syntactic || k == LabelKind::Aux) return std::nullopt;
    }
    Node root = tree.to_node();
    bool modified = false;
    reduce_top_walk(root, modified);
    if (!modified) return std::nullopt;
    return Tree::from_node(root);
}

// ---------------------------------------------------------------------------
// the loop

namespace {

IterationMetrics compute_metrics(const Tree& tree, const CondensedGrammar& grammar,
                                 const Partition& partition) {
    IterationMetrics m;
    m.nb_prod = grammar.rules.size();
    m.nb_equiv_classes = partition.blocks.size();
    std::set<std::string> group_ids, rel_ids, coll_ids;
    std::size_t groups = 0, rels = 0, colls = 0;
    for (const auto& [p, l] : tree.nodes()) {
        switch (l.kind) {
            case LabelKind::Syntactic:
            case LabelKind::Aux:
                ++m.nb_unlabelled;
                break;
            case LabelKind::Group:
                ++groups;
                group_ids.insert(l.text);
                break;
            case LabelKind::Rel:
                ++rels;
                rel_ids.insert(l.text);
                break;
            case LabelKind::Coll:
                ++colls;
                coll_ids.insert(l.text);
                break;
            default:
                break;
        }
    }
    m.nb_group_kinds = group_ids.size();
    m.nb_rel_kinds = rel_ids.size();
    m.nb_coll_kinds = coll_ids.size();
    m.mean_group_instances = group_ids.empty() ? 0.0 : double(groups) / double(group_ids.size());
    m.mean_rel_instances = rel_ids.empty() ? 0.0 : double(rels) / double(rel_ids.size());
    m.mean_coll_instances = coll_ids.empty() ? 0.0 : double(colls) / double(coll_ids.size());
    return m;
}

} // namespace

StructuringResult structure(const Tree& instance, const StructuringConfig& config) {
    if (config.sim.f.kind == SimilarityKind::Custom)
        throw std::invalid_argument("structure() requires a built-in similarity kind");

    StructuringResult result;
    result.instance = instance;

    // The empty instance is trivially structured: nothing to describe.
    if (instance.size() == 1) {
        result.valid = true;
        result.logs.push_back({0, EditOp::None, IterationMetrics{}});
        return result;
    }

    NameRegistry registry;
    Tree current = instance;
    CondensedGrammar grammar = extract_grammar(current);
    ValidationReport report = validate(grammar);
    std::size_t frontier = validity_frontier(grammar, current).size();

    Tree best_instance = current;
    CondensedGrammar best_grammar = grammar;
    std::size_t best_frontier = frontier;
    std::size_t best_iteration = 0;

    std::size_t it = 0;
    EditOp last_op = EditOp::None;
    while (true) {
        EquivContext ctx = EquivContext::compute(current, config.sim);
        result.logs.push_back({it, last_op, compute_metrics(current, grammar, ctx.partition)});
        if (report.valid || it >= config.max_cycles) break;

        std::optional<Tree> next;
        EditOp op = EditOp::None;
        if ((next = find_groups(current, ctx.partition, config.min_support, registry)))
            op = EditOp::FindGroups;
        else if ((next = find_subgroups(ctx, config.min_support, registry)))
            op = EditOp::FindSubgroups;
        else if ((next = merge_groups(ctx, registry)))
            op = EditOp::MergeGroups;
        else if ((next = find_collections(current, ctx.partition, CollectionKind::Groups, registry)))
            op = EditOp::FindCollectionsOfGroups;
        else if ((next = find_relations(current, registry)))
            op = EditOp::FindRelationships;
        else if ((next = find_collections(current, ctx.partition, CollectionKind::Relations,
                                          registry)))
            op = EditOp::FindCollectionsOfRelationships;
        else if ((next = reduce_bottom(current)))
            op = EditOp::ReduceBottom;
        else if ((next = reduce_top(current)))
            op = EditOp::ReduceTop;

        if (op == EditOp::None) break; // no operation applies: stuck

        current = std::move(*next);
        last_op = op;
        ++it;
        grammar = extract_grammar(current);
        report = validate(grammar);
        frontier = validity_frontier(grammar, current).size();
        if (frontier < best_frontier) {
            best_frontier = frontier;
            best_instance = current;
            best_grammar = grammar;
            best_iteration = it;
        }
    }

    result.iterations_used = it;
    result.valid = report.valid;
    if (report.valid) {
        result.instance = current;
        result.grammar = grammar;
        result.best_iteration = it;
        result.frontier_size = frontier;
    } else {
        result.instance = best_instance;
        result.grammar = best_grammar;
        result.best_iteration = best_iteration;
        result.frontier_size = best_frontier;
    }
    return result;
}

std::string metrics_csv(const std::vector<IterationLog>& logs) {
    std::string out =
        "iteration,op,nb_prod,nb_unlabelled,nb_group,nb_rel,nb_coll,nb_equiv,"
        "mean_group_inst,mean_rel_inst,mean_coll_inst\n";
    char buf[256];
    for (const auto& log : logs) {
        int op = log.op == EditOp::None ? -1 : static_cast<int>(log.op);
        std::snprintf(buf, sizeof(buf), "%zu,%d,%zu,%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f\n",
                      log.iteration, op, log.metrics.nb_prod, log.metrics.nb_unlabelled,
                      log.metrics.nb_group_kinds, log.metrics.nb_rel_kinds,
                      log.metrics.nb_coll_kinds, log.metrics.nb_equiv_classes,
                      log.metrics.mean_group_instances, log.metrics.mean_rel_instances,
                      log.metrics.mean_coll_instances);
        out += buf;
    }
    return out;
}

} // namespace architext
