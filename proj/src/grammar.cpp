#include "architext/grammar.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "architext/bracketed.hpp"

namespace architext {

namespace {

Node strip_tokens(const Node& n) {
    Node out(n.label);
    for (const auto& c : n.children)
        if (c.label.kind != LabelKind::Token) out.children.push_back(strip_tokens(c));
    return out;
}

struct Expansion {
    std::size_t cls;
    // successor class, repeated mark, in first-appearance order below cls
    std::vector<std::pair<std::size_t, bool>> children;
};

// Breadth-first class expansion shared by quotient() and extract_grammar().
struct ClassHierarchy {
    std::vector<Expansion> expansions; // in breadth order, root class first
    std::vector<NodeLabel> class_label;

    ClassHierarchy(const Tree& tree, const Partition& partition) {
        const auto& blocks = partition.blocks;
        class_label.reserve(blocks.size());
        for (const auto& b : blocks) class_label.push_back(tree.label(b.front()));

        auto root_it = partition.class_of.find(Position::root());
        if (root_it == partition.class_of.end())
            throw std::invalid_argument("partition has no block containing the root");

        // Per class: successors merged across the members' child sequences
        // into a common supersequence (so each member realizes a subsequence
        // of the rule), plus repetition marks. Order: topological on the
        // observed precedences, ties by first appearance; should the members
        // disagree cyclically, first appearance wins for the remainder.
        auto successors_of = [&](std::size_t cls) {
            std::vector<std::size_t> order;              // first-appearance rank
            std::map<std::size_t, std::size_t> rank;     // class -> rank
            std::map<std::size_t, bool> plus;
            std::set<std::pair<std::size_t, std::size_t>> before;
            for (const Position& u : blocks[cls]) {
                std::map<std::size_t, std::size_t> local_count;
                std::vector<std::size_t> seq;
                for (const Position& v : tree.children(u)) {
                    auto it = partition.class_of.find(v);
                    if (it == partition.class_of.end()) continue;
                    std::size_t c = it->second;
                    ++local_count[c];
                    if (!rank.count(c)) {
                        rank.emplace(c, order.size());
                        order.push_back(c);
                        plus[c] = false;
                    }
                    if (seq.empty() || seq.back() != c) seq.push_back(c);
                }
                for (std::size_t i = 0; i < seq.size(); ++i)
                    for (std::size_t j = i + 1; j < seq.size(); ++j)
                        if (seq[i] != seq[j]) before.emplace(seq[i], seq[j]);
                for (const auto& [c, k] : local_count)
                    if (k >= 2) plus[c] = true;
            }
            // Kahn's algorithm, smallest first-appearance rank first.
            std::vector<std::pair<std::size_t, bool>> out;
            std::set<std::size_t> pending(order.begin(), order.end());
            while (!pending.empty()) {
                std::size_t chosen = *pending.begin();
                bool found = false;
                std::size_t best_rank = order.size();
                for (std::size_t c : pending) {
                    bool blocked = false;
                    for (std::size_t p : pending)
                        if (p != c && before.count({p, c})) blocked = true;
                    if (!blocked && rank[c] < best_rank) {
                        best_rank = rank[c];
                        chosen = c;
                        found = true;
                    }
                }
                if (!found) {
                    // cyclic disagreement: take the earliest seen
                    for (std::size_t c : pending)
                        if (rank[c] < best_rank) {
                            best_rank = rank[c];
                            chosen = c;
                        }
                }
                pending.erase(chosen);
                out.emplace_back(chosen, plus[chosen]);
            }
            // a collection means repetition even when one member is present
            if (class_label[cls].kind == LabelKind::Coll)
                for (auto& [_, p] : out) p = true;
            return out;
        };

        std::vector<bool> expanded(blocks.size(), false);
        std::deque<std::size_t> queue;
        queue.push_back(root_it->second);
        expanded[root_it->second] = true;
        while (!queue.empty()) {
            std::size_t cls = queue.front();
            queue.pop_front();
            Expansion e{cls, successors_of(cls)};
            for (const auto& [c, _] : e.children) {
                if (!expanded[c]) {
                    expanded[c] = true;
                    queue.push_back(c);
                }
            }
            expansions.push_back(std::move(e));
        }
    }
};

} // namespace

std::set<std::size_t> succ(const Tree& tree, const Partition& partition, std::size_t block) {
    if (block >= partition.blocks.size()) throw std::out_of_range("no such block");
    std::set<std::size_t> out;
    for (const Position& u : partition.blocks[block])
        for (const Position& v : tree.children(u)) {
            auto it = partition.class_of.find(v);
            if (it != partition.class_of.end()) out.insert(it->second);
        }
    return out;
}

QuotientTree quotient(const Tree& tree, const Partition& partition) {
    ClassHierarchy h(tree, partition);
    std::map<std::size_t, const Expansion*> by_class;
    for (const auto& e : h.expansions) by_class.emplace(e.cls, &e);

    QuotientTree q;
    auto root_cls = partition.class_of.at(Position::root());
    q.labels.emplace(Position::root(), h.class_label[root_cls]);

    // Re-walk breadth-first, expanding each class at its first position only.
    std::deque<std::pair<std::size_t, Position>> queue;
    queue.emplace_back(root_cls, Position::root());
    std::set<std::size_t> placed{root_cls};
    std::map<std::size_t, Position> expansion_pos{{root_cls, Position::root()}};
    while (!queue.empty()) {
        auto [cls, pos] = queue.front();
        queue.pop_front();
        if (expansion_pos.at(cls) != pos) continue; // duplicate occurrence: leaf
        const Expansion& e = *by_class.at(cls);
        std::uint32_t idx = 0;
        for (const auto& [child_cls, plus] : e.children) {
            Position cp = pos.child(idx++);
            q.labels.emplace(cp, h.class_label[child_cls]);
            if (plus) q.repeated.insert(cp);
            if (!placed.count(child_cls)) {
                placed.insert(child_cls);
                expansion_pos.emplace(child_cls, cp);
            }
            queue.emplace_back(child_cls, cp);
        }
    }
    return q;
}

CondensedGrammar extract_grammar(const Tree& tree) {
    Tree schema = Tree::from_node(strip_tokens(tree.to_node()));
    Partition labels = label_classes(schema);
    ClassHierarchy h(schema, labels);

    CondensedGrammar g;
    for (const auto& e : h.expansions) {
        if (e.children.empty()) continue;
        Rule r;
        r.lhs = h.class_label[e.cls];
        for (const auto& [cls, plus] : e.children)
            r.rhs.push_back(Symbol{h.class_label[cls], plus});
        g.rules.push_back(std::move(r));
    }
    return g;
}

namespace {

bool match_rhs(const std::vector<Symbol>& rhs, const std::vector<NodeLabel>& kids,
               bool allow_missing) {
    std::size_t ns = rhs.size(), nk = kids.size();
    // memo: 0 unknown, 1 yes, 2 no
    std::vector<std::vector<unsigned char>> memo(ns + 1,
                                                 std::vector<unsigned char>(nk + 1, 0));
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t si,
                                                           std::size_t ci) -> bool {
        if (si == ns) return ci == nk;
        auto& m = memo[si][ci];
        if (m) return m == 1;
        bool ok = false;
        if (allow_missing && go(si + 1, ci)) ok = true;
        if (!ok && ci < nk && kids[ci] == rhs[si].label) {
            if (rhs[si].plus && go(si, ci + 1)) ok = true;
            if (!ok && go(si + 1, ci + 1)) ok = true;
        }
        m = ok ? 1 : 2;
        return ok;
    };
    return go(0, 0);
}

bool accepts_node(const CondensedGrammar& g, const Node& n, bool allow_missing) {
    const Rule* r = g.rule_for(n.label);
    if (!r || r->entity_data) {
        // terminal: no children allowed in the schema view
        return n.children.empty();
    }
    if (n.children.empty()) {
        // incomplete derivation cut at this node
        if (!allow_missing) return false;
    } else {
        std::vector<NodeLabel> kids;
        kids.reserve(n.children.size());
        for (const auto& c : n.children) kids.push_back(c.label);
        if (!match_rhs(r->rhs, kids, allow_missing)) return false;
    }
    for (const auto& c : n.children)
        if (!accepts_node(g, c, allow_missing)) return false;
    return true;
}

} // namespace

bool accepts(const CondensedGrammar& grammar, const Tree& tree, bool allow_missing) {
    Node schema = strip_tokens(tree.to_node());
    return accepts_node(grammar, schema, allow_missing);
}

std::string write_grammar(const CondensedGrammar& grammar) {
    std::string out;
    for (const auto& r : grammar.rules) {
        out += r.lhs.render();
        out += " ->";
        if (r.entity_data) {
            out += " <data>";
        } else {
            for (const auto& s : r.rhs) {
                out += ' ';
                out += s.label.render();
                if (s.plus) out += '+';
            }
        }
        out += '\n';
    }
    return out;
}

CondensedGrammar parse_grammar(const std::string& text) {
    CondensedGrammar g;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::size_t arrow = line.find("->");
        if (arrow == std::string::npos)
            throw ParseError("grammar line " + std::to_string(lineno) + ": missing '->'");
        std::istringstream lhs_in(line.substr(0, arrow));
        std::string lhs_atom;
        lhs_in >> lhs_atom;
        std::string extra;
        if (lhs_atom.empty() || (lhs_in >> extra))
            throw ParseError("grammar line " + std::to_string(lineno) + ": bad left-hand side");
        Rule r;
        r.lhs = NodeLabel::parse(lhs_atom, false);
        std::istringstream rhs_in(line.substr(arrow + 2));
        std::string tok;
        while (rhs_in >> tok) {
            if (tok == "<data>") {
                r.entity_data = true;
                continue;
            }
            bool plus = false;
            if (tok.size() > 1 && tok.back() == '+') {
                plus = true;
                tok.pop_back();
            }
            r.rhs.push_back(Symbol{NodeLabel::parse(tok, false), plus});
        }
        if (r.entity_data && (!r.rhs.empty() || r.lhs.kind != LabelKind::Entity))
            throw ParseError("grammar line " + std::to_string(lineno) + ": bad <data> rule");
        if (!r.entity_data && r.rhs.empty())
            throw ParseError("grammar line " + std::to_string(lineno) + ": empty right-hand side");
        g.rules.push_back(std::move(r));
    }
    return g;
}

} // namespace architext
