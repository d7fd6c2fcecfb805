#include "architext/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace architext {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (true) {
        std::size_t j = line.find('\t', i);
        if (j == std::string::npos) {
            out.push_back(line.substr(i));
            break;
        }
        out.push_back(line.substr(i, j - i));
        i = j + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().pop_back();
    return out;
}

std::size_t count_leaves(const Node& n) {
    if (n.children.empty()) return 1;
    std::size_t total = 0;
    for (const auto& c : n.children) total += count_leaves(c);
    return total;
}

struct LeafSpan {
    std::size_t first = 0;
    std::size_t count = 0;
    std::size_t end() const { return first + count; } // exclusive
};

LeafSpan leaf_span(const Node& n, std::size_t first) {
    if (n.children.empty()) return {first, 1};
    std::size_t count = 0;
    for (const auto& c : n.children) count += leaf_span(c, first + count).count;
    return {first, count};
}

bool contains_kind(const Node& n, LabelKind k) {
    if (n.label.kind == k) return true;
    for (const auto& c : n.children)
        if (contains_kind(c, k)) return true;
    return false;
}

} // namespace

std::map<std::size_t, std::vector<NamedEntity>> read_entities_file(const std::string& path,
                                                                   std::size_t sentence_count) {
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open entities file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw CorpusError("entities file is empty: " + path);
    auto header = split_tabs(line);
    if (header != std::vector<std::string>{"sentence", "entity", "start", "end"})
        throw CorpusError("entities file must start with header 'sentence\\tentity\\tstart\\tend'");

    std::map<std::size_t, std::vector<NamedEntity>> out;
    std::set<std::tuple<std::size_t, std::string, std::size_t, std::size_t>> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_tabs(line);
        if (cols.size() == 1 && cols[0].empty()) continue;
        if (cols.size() != 4)
            throw CorpusError("entities line " + std::to_string(lineno) + ": expected 4 columns");
        std::size_t sent, start, end;
        try {
            sent = std::stoul(cols[0]);
            start = std::stoul(cols[2]);
            end = std::stoul(cols[3]);
        } catch (const std::exception&) {
            throw CorpusError("entities line " + std::to_string(lineno) + ": bad integer");
        }
        if (cols[1].empty())
            throw CorpusError("entities line " + std::to_string(lineno) + ": empty entity name");
        if (sent >= sentence_count)
            throw CorpusError("entities line " + std::to_string(lineno) + ": sentence " +
                              cols[0] + " out of range");
        if (start > end)
            throw CorpusError("entities line " + std::to_string(lineno) + ": start > end");
        if (!seen.insert({sent, cols[1], start, end}).second)
            throw CorpusError("entities line " + std::to_string(lineno) + ": duplicate annotation");
        out[sent].push_back(NamedEntity{cols[1], start, end});
    }
    return out;
}

Tree read_corpus(const std::string& trees_path, const std::string& entities_path,
                 const CorpusConfig&) {
    auto sentences = read_trees_file(trees_path);
    auto entities = read_entities_file(entities_path, sentences.size());
    for (const auto& [sent, list] : entities) {
        std::size_t tokens = count_leaves(sentences[sent]);
        for (const auto& e : list)
            if (e.end_token >= tokens)
                throw CorpusError("entity range out of bounds in sentence " + std::to_string(sent));
    }
    return Tree::from_hedge(sentences);
}

namespace {

// Interposes an entity node above the consecutive child range covering the
// token span [start, end]. Descends to the deepest node containing the whole
// span, then dissolves boundary children straddling the span until the range
// is exact. Returns false when the span cannot be isolated.
bool wrap_span(Node& node, std::size_t node_first, std::size_t start, std::size_t end,
               const std::string& name) {
    while (true) {
        // Child leaf spans.
        std::vector<LeafSpan> spans;
        std::size_t at = node_first;
        for (const auto& c : node.children) {
            spans.push_back(leaf_span(c, at));
            at = spans.back().end();
        }
        // Children overlapping the span.
        std::size_t lo = node.children.size(), hi = 0;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            if (spans[i].end() > start && spans[i].first <= end) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
        if (lo > hi) return false;
        if (lo == hi && !node.children[lo].children.empty() &&
            node.children[lo].label.kind != LabelKind::Entity) {
            // A single internal child contains the whole span: descend.
            node_first = spans[lo].first;
            return wrap_span(node.children[lo], node_first, start, end, name);
        }
        if (spans[lo].first == start && spans[hi].end() == end + 1) {
            Node ent(NodeLabel::entity(name));
            ent.children.assign(node.children.begin() + lo, node.children.begin() + hi + 1);
            node.children.erase(node.children.begin() + lo, node.children.begin() + hi + 1);
            node.children.insert(node.children.begin() + lo, std::move(ent));
            return true;
        }
        // A boundary child straddles the span: dissolve it and retry, unless
        // it is an entity or a bare token (overlapping annotations).
        bool dissolved = false;
        for (std::size_t i : {lo, hi}) {
            const LeafSpan& s = spans[i];
            bool straddles = s.first < start || s.end() > end + 1;
            if (!straddles) continue;
            if (node.children[i].children.empty() ||
                node.children[i].label.kind == LabelKind::Entity)
                return false;
            Node child = node.children[i];
            node.children.erase(node.children.begin() + i);
            node.children.insert(node.children.begin() + i, child.children.begin(),
                                 child.children.end());
            dissolved = true;
            break;
        }
        if (!dissolved) return false;
    }
}

} // namespace

Node insert_entities(const AnnotatedSentence& sentence, std::vector<std::string>* warnings) {
    Node tree = sentence.tree;
    std::size_t tokens = count_leaves(tree);
    // Inner (shorter) spans first so nesting stays well-formed.
    std::vector<NamedEntity> order = sentence.entities;
    std::stable_sort(order.begin(), order.end(), [](const NamedEntity& a, const NamedEntity& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.start_token < b.start_token;
    });
    for (const auto& e : order) {
        if (e.end_token >= tokens) throw CorpusError("entity range out of bounds: " + e.name);
        if (!wrap_span(tree, 0, e.start_token, e.end_token, e.name) && warnings)
            warnings->push_back("entity " + e.name + " [" + std::to_string(e.start_token) + "," +
                                std::to_string(e.end_token) + "] is not a contiguous sub-tree; skipped");
    }
    return tree;
}

namespace {

bool is_inner_unit(const Node& n) {
    return n.label.kind == LabelKind::Entity || n.label.is_aux_er();
}

// Replaces every maximal entity/ER unit by its token-level content.
void flatten_content(const Node& n, std::vector<Node>& out) {
    for (const auto& c : n.children) {
        if (c.label.kind == LabelKind::Entity) {
            flatten_content(c, out);
        } else if (c.label.is_aux_er()) {
            // An ER stands for its flattened entity (first child).
            flatten_content(c.children.front(), out);
        } else if (contains_kind(c, LabelKind::Entity)) {
            Node copy(c.label);
            flatten_content(c, copy.children);
            out.push_back(std::move(copy));
        } else {
            out.push_back(c);
        }
    }
}

// Collects the maximal entity/ER units strictly below `n`.
void collect_units(const Node& n, std::vector<Node>& out) {
    for (const auto& c : n.children) {
        if (is_inner_unit(c)) {
            out.push_back(c);
        } else {
            collect_units(c, out);
        }
    }
}

bool dominates_entity(const Node& n) {
    for (const auto& c : n.children)
        if (contains_kind(c, LabelKind::Entity)) return true;
    return false;
}

// Innermost nesting first: rewrites the deepest entity that still dominates
// another entity, then repeats.
bool unnest_once(Node& n) {
    for (auto& c : n.children)
        if (unnest_once(c)) return true;
    if (n.label.kind != LabelKind::Entity || !dominates_entity(n)) return false;

    Node flat(n.label);
    flatten_content(n, flat.children);
    Node ec(NodeLabel::aux(AuxKind::EC));
    collect_units(n, ec.children);
    Node er(NodeLabel::aux(AuxKind::ER));
    er.children.push_back(std::move(flat));
    er.children.push_back(std::move(ec));
    n = std::move(er);
    return true;
}

} // namespace

Node unnest_entities(const Node& tree) {
    Node out = tree;
    while (unnest_once(out)) {
    }
    return out;
}

Tree unnest_entities(const Tree& tree) {
    return Tree::from_node(unnest_entities(tree.to_node()));
}

namespace {

bool is_conj(const Node& n, const CorpusConfig& cfg) {
    return n.label.kind == LabelKind::Syntactic && cfg.conjunction_tags.count(n.label.text);
}

bool has_cc_child(const Node& n, const CorpusConfig& cfg) {
    for (const auto& c : n.children)
        if (c.label.kind == LabelKind::Syntactic && cfg.cc_tags.count(c.label.text)) return true;
    return false;
}

bool flatten_once(Node& n, const CorpusConfig& cfg) {
    for (auto& c : n.children)
        if (flatten_once(c, cfg)) return true;
    bool coordination = is_conj(n, cfg) || has_cc_child(n, cfg);
    if (!coordination) return false;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        const Node& c = n.children[i];
        bool nested = is_conj(n, cfg) ? is_conj(c, cfg)
                                      : (c.label == n.label && has_cc_child(c, cfg));
        if (nested) {
            Node child = n.children[i];
            n.children.erase(n.children.begin() + i);
            n.children.insert(n.children.begin() + i, child.children.begin(), child.children.end());
            return true;
        }
    }
    return false;
}

} // namespace

Node flatten_conjunctions(const Node& tree, const CorpusConfig& config) {
    Node out = tree;
    while (flatten_once(out, config)) {
    }
    return out;
}

Tree flatten_conjunctions(const Tree& tree, const CorpusConfig& config) {
    return Tree::from_node(flatten_conjunctions(tree.to_node(), config));
}

namespace {

// Step 1: drop children whose subtree holds no entity.
bool prune_entity_free(Node& n) {
    if (n.label.kind == LabelKind::Entity) return true;
    std::vector<Node> kept;
    for (auto& c : n.children)
        if (prune_entity_free(c)) kept.push_back(std::move(c));
    n.children = std::move(kept);
    return !n.children.empty() || n.label.kind == LabelKind::Entity;
}

bool collapsible(const Node& n, const CorpusConfig& cfg) {
    if (n.children.size() != 1) return false;
    if (n.label.kind != LabelKind::Syntactic) return false;
    return cfg.keep_tags.count(n.label.text) == 0;
}

bool collapse_unary(Node& n, const CorpusConfig& cfg) {
    bool changed = false;
    for (auto& c : n.children)
        if (collapse_unary(c, cfg)) changed = true;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (collapsible(n.children[i], cfg)) {
            Node child = std::move(n.children[i].children[0]);
            n.children[i] = std::move(child);
            changed = true;
        }
    }
    return changed;
}

} // namespace

Tree simplify(const Tree& tree, const CorpusConfig& config) {
    Node root = tree.to_node();
    if (!contains_kind(root, LabelKind::Entity)) return Tree{};
    prune_entity_free(root);
    while (collapse_unary(root, config)) {
    }
    return Tree::from_node(root);
}

Tree ingest(const std::string& trees_path, const std::string& entities_path,
            const CorpusConfig& config) {
    auto trees = read_trees_file(trees_path);
    auto entities = read_entities_file(entities_path, trees.size());
    std::vector<AnnotatedSentence> sentences;
    sentences.reserve(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i) {
        AnnotatedSentence s;
        s.tree = std::move(trees[i]);
        auto it = entities.find(i);
        if (it != entities.end()) s.entities = it->second;
        std::size_t tokens = count_leaves(s.tree);
        for (const auto& e : s.entities)
            if (e.end_token >= tokens)
                throw CorpusError("entity range out of bounds in sentence " + std::to_string(i));
        sentences.push_back(std::move(s));
    }
    return ingest_sentences(sentences, config);
}

Tree ingest_sentences(const std::vector<AnnotatedSentence>& sentences, const CorpusConfig& config,
                      std::vector<std::string>* warnings) {
    Hedge enriched;
    enriched.reserve(sentences.size());
    for (const auto& s : sentences) {
        AnnotatedSentence flat{flatten_conjunctions(s.tree, config), s.entities};
        Node with_entities = insert_entities(flat, warnings);
        enriched.push_back(unnest_entities(with_entities));
    }
    return simplify(Tree::from_hedge(enriched), config);
}

namespace {

void collect_tokens(const Node& n, std::string& out) {
    if (n.label.kind == LabelKind::Token) {
        if (!out.empty()) out += ' ';
        out += n.label.text;
        return;
    }
    for (const auto& c : n.children) collect_tokens(c, out);
}

void signature_walk(const Node& n, std::multiset<std::pair<std::string, std::string>>& out) {
    if (n.label.kind == LabelKind::Entity) {
        std::string text;
        collect_tokens(n, text);
        out.emplace(n.label.text, text);
        // keep walking: nested entities (pre-unnesting) count too
    }
    for (const auto& c : n.children) signature_walk(c, out);
}

} // namespace

std::multiset<std::pair<std::string, std::string>> entity_signature(const Node& tree) {
    std::multiset<std::pair<std::string, std::string>> out;
    signature_walk(tree, out);
    return out;
}

std::multiset<std::pair<std::string, std::string>> entity_signature(const Tree& tree) {
    return entity_signature(tree.to_node());
}

} // namespace architext
