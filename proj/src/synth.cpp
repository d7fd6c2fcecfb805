#include "architext/synth.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "architext/bracketed.hpp"

namespace architext {

const PlantedGroup* PlantedSchema::group(const std::string& id) const {
    for (const auto& g : groups)
        if (g.id == id) return &g;
    return nullptr;
}

const PlantedRelation* PlantedSchema::relation(const std::string& id) const {
    for (const auto& r : relations)
        if (r.id == id) return &r;
    return nullptr;
}

PlantedSchema parse_schema(const std::string& text) {
    PlantedSchema schema;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#') continue;
        auto bad = [&](const std::string& why) {
            throw ParseError("schema line " + std::to_string(lineno) + ": " + why);
        };
        if (head == "group") {
            PlantedGroup g;
            std::string eq;
            if (!(ls >> g.id >> eq) || eq != "=") bad("expected 'group <id> = <entities>'");
            std::string e;
            while (ls >> e) g.entities.push_back(e);
            if (g.entities.empty()) bad("group needs at least one entity");
            if (schema.group(g.id)) bad("duplicate group id " + g.id);
            schema.groups.push_back(std::move(g));
        } else if (head == "relation") {
            PlantedRelation r;
            std::string eq;
            if (!(ls >> r.id >> eq >> r.left >> r.right) || eq != "=")
                bad("expected 'relation <id> = <group> <group>'");
            if (!schema.group(r.left) || !schema.group(r.right))
                bad("relation references undefined group");
            if (r.left == r.right) bad("relation needs two distinct groups");
            if (schema.relation(r.id)) bad("duplicate relation id " + r.id);
            schema.relations.push_back(std::move(r));
        } else if (head == "template") {
            SentenceTemplate t;
            std::string kind;
            if (!(ls >> t.weight >> kind >> t.target) || t.weight == 0)
                bad("expected 'template <weight> group|relation <id>'");
            if (kind == "group") {
                t.is_relation = false;
                if (!schema.group(t.target)) bad("template references undefined group");
            } else if (kind == "relation") {
                t.is_relation = true;
                if (!schema.relation(t.target)) bad("template references undefined relation");
            } else {
                bad("template kind must be group or relation");
            }
            schema.templates.push_back(t);
        } else if (head == "noise") {
            std::string which;
            if (!(ls >> which)) bad("expected noise parameter");
            if (which == "dropout") {
                if (!(ls >> schema.noise.dropout) || schema.noise.dropout < 0.0 ||
                    schema.noise.dropout >= 1.0)
                    bad("dropout must be in [0,1)");
            } else if (which == "extra_depth") {
                if (!(ls >> schema.noise.extra_depth_min >> schema.noise.extra_depth_max) ||
                    schema.noise.extra_depth_min > schema.noise.extra_depth_max)
                    bad("expected 'noise extra_depth <min> <max>'");
            } else if (which == "shuffle") {
                if (!(ls >> schema.noise.shuffle) || schema.noise.shuffle < 0.0 ||
                    schema.noise.shuffle > 1.0)
                    bad("shuffle must be in [0,1]");
            } else {
                bad("unknown noise parameter " + which);
            }
        } else {
            bad("unknown directive " + head);
        }
    }
    if (schema.templates.empty()) throw ParseError("schema defines no sentence templates");
    return schema;
}

namespace {

const char* kPhraseTags[] = {"NP",  "NML",  "QP",  "ADJP", "PP",   "VP",  "ADVP", "WHNP",
                             "PRT", "INTJ", "UCP", "NX",   "NAC",  "LST", "CONJP", "FRAG"};
const char* kPreTags[] = {"NN", "NNS", "JJ", "CD"};
const char* kWrapTags[] = {"X", "PRN", "SBAR", "SINV"};

struct EntityDraw {
    std::string name;
    std::vector<std::string> tokens;
    bool annotated = true;
};

// One phrase: a tag node holding the group's entity tokens (with
// preterminals), plus the token-index span of each entity.
struct PhraseDraw {
    Node node;
    std::vector<EntityDraw> entities;
};

PhraseDraw draw_phrase(const PlantedGroup& g, const NoiseModel& noise, std::mt19937_64& rng) {
    PhraseDraw out;
    std::vector<std::string> order = g.entities;
    if (noise.shuffle > 0.0 && std::uniform_real_distribution<>(0, 1)(rng) < noise.shuffle)
        std::shuffle(order.begin(), order.end(), rng);
    Node phrase(NodeLabel::syn(kPhraseTags[rng() % 16]));
    for (const auto& name : order) {
        EntityDraw e;
        e.name = name;
        std::size_t n_tokens = 1 + rng() % 2;
        for (std::size_t t = 0; t < n_tokens; ++t)
            e.tokens.push_back(name + "_w" + std::to_string(rng() % 5));
        if (noise.dropout > 0.0 && std::uniform_real_distribution<>(0, 1)(rng) < noise.dropout)
            e.annotated = false;
        for (const auto& tok : e.tokens) {
            Node pre(NodeLabel::syn(kPreTags[rng() % 4]));
            pre.children.push_back(Node(NodeLabel::token(tok)));
            phrase.children.push_back(std::move(pre));
        }
        out.entities.push_back(std::move(e));
    }
    std::size_t wraps =
        noise.extra_depth_min +
        (noise.extra_depth_max > noise.extra_depth_min
             ? rng() % (noise.extra_depth_max - noise.extra_depth_min + 1)
             : 0);
    Node current = std::move(phrase);
    for (std::size_t w = 0; w < wraps; ++w) {
        Node wrap(NodeLabel::syn(kWrapTags[rng() % 4]));
        wrap.children.push_back(std::move(current));
        current = std::move(wrap);
    }
    out.node = std::move(current);
    return out;
}

// The ideally structured node for a drawn phrase: a group holding the
// annotated entities.
Node canonical_group(const std::string& group_id, const PhraseDraw& phrase) {
    Node g(NodeLabel::group(group_id));
    for (const auto& e : phrase.entities) {
        if (!e.annotated) continue;
        Node ent(NodeLabel::entity(e.name));
        for (const auto& t : e.tokens) ent.children.push_back(Node(NodeLabel::token(t)));
        g.children.push_back(std::move(ent));
    }
    return g;
}

void append_annotations(std::string& tsv, std::size_t sentence, std::size_t& next_token,
                        const PhraseDraw& phrase) {
    for (const auto& e : phrase.entities) {
        std::size_t start = next_token;
        next_token += e.tokens.size();
        if (!e.annotated) continue;
        tsv += std::to_string(sentence) + '\t' + e.name + '\t' + std::to_string(start) + '\t' +
               std::to_string(next_token - 1) + '\n';
    }
}

} // namespace

GeneratedCorpus generate(const PlantedSchema& schema, std::size_t n_sentences,
                         std::uint64_t seed) {
    if (n_sentences == 0) throw std::invalid_argument("need at least one sentence");
    GeneratedCorpus out;
    out.entities_text = "sentence\tentity\tstart\tend\n";

    std::size_t total_weight = 0;
    for (const auto& t : schema.templates) total_weight += t.weight;

    // Canonical structured sentences, keyed by kind for collection building.
    struct KindBucket {
        bool is_relation;
        std::string target;
        std::vector<Node> members;
    };
    std::vector<KindBucket> buckets;
    auto bucket_for = [&](bool is_rel, const std::string& target) -> KindBucket& {
        for (auto& b : buckets)
            if (b.is_relation == is_rel && b.target == target) return b;
        buckets.push_back({is_rel, target, {}});
        return buckets.back();
    };

    for (std::size_t i = 0; i < n_sentences; ++i) {
        std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + i + 1);
        std::size_t pick = rng() % total_weight;
        const SentenceTemplate* tpl = nullptr;
        for (const auto& t : schema.templates) {
            if (pick < t.weight) {
                tpl = &t;
                break;
            }
            pick -= t.weight;
        }

        Node sentence(NodeLabel::syn("S"));
        std::size_t next_token = 0;
        if (!tpl->is_relation) {
            const PlantedGroup* g = schema.group(tpl->target);
            PhraseDraw phrase = draw_phrase(*g, schema.noise, rng);
            Node canon = canonical_group(g->id, phrase);
            sentence.children.push_back(std::move(phrase.node));
            append_annotations(out.entities_text, i, next_token, phrase);
            if (!canon.children.empty())
                bucket_for(false, g->id).members.push_back(std::move(canon));
        } else {
            const PlantedRelation* r = schema.relation(tpl->target);
            PhraseDraw left = draw_phrase(*schema.group(r->left), schema.noise, rng);
            PhraseDraw right = draw_phrase(*schema.group(r->right), schema.noise, rng);
            Node verb(NodeLabel::syn("VBZ"));
            verb.children.push_back(Node(NodeLabel::token("rel_w" + std::to_string(rng() % 3))));
            sentence.children.push_back(std::move(left.node));
            sentence.children.push_back(std::move(verb));
            sentence.children.push_back(std::move(right.node));
            append_annotations(out.entities_text, i, next_token, left);
            ++next_token; // the verb token
            append_annotations(out.entities_text, i, next_token, right);

            Node lg = canonical_group(r->left, left);
            Node rg = canonical_group(r->right, right);
            Node rel(NodeLabel::rel(r->id));
            if (!lg.children.empty()) rel.children.push_back(std::move(lg));
            if (!rg.children.empty()) rel.children.push_back(std::move(rg));
            if (!rel.children.empty())
                bucket_for(true, r->id).members.push_back(std::move(rel));
        }
        out.trees_text += write_bracketed(sentence);
        out.trees_text += '\n';
    }

    // Ground-truth grammar and the canonical instance.
    Hedge root_children;
    CondensedGrammar g;
    Rule root_rule;
    root_rule.lhs = NodeLabel::root();
    std::vector<Rule> body;
    std::set<std::string> groups_defined;
    auto define_group = [&](const std::string& id) {
        if (!groups_defined.insert(id).second) return;
        const PlantedGroup* pg = schema.group(id);
        Rule r;
        r.lhs = NodeLabel::group(id);
        for (const auto& e : pg->entities) r.rhs.push_back(Symbol{NodeLabel::entity(e), false});
        body.push_back(std::move(r));
    };

    std::size_t next_coll = 0;
    for (auto& b : buckets) {
        NodeLabel member_label =
            b.is_relation ? NodeLabel::rel(b.target) : NodeLabel::group(b.target);
        if (b.is_relation) {
            const PlantedRelation* pr = schema.relation(b.target);
            Rule r;
            r.lhs = member_label;
            r.rhs.push_back(Symbol{NodeLabel::group(pr->left), false});
            r.rhs.push_back(Symbol{NodeLabel::group(pr->right), false});
            body.push_back(std::move(r));
            define_group(pr->left);
            define_group(pr->right);
        } else {
            define_group(b.target);
        }
        if (b.members.size() >= 2) {
            std::string coll_id = std::to_string(next_coll++);
            Rule r;
            r.lhs = NodeLabel::coll(coll_id);
            r.rhs.push_back(Symbol{member_label, true});
            body.push_back(std::move(r));
            root_rule.rhs.push_back(Symbol{NodeLabel::coll(coll_id), false});
            Node coll(NodeLabel::coll(coll_id));
            for (auto& m : b.members) coll.children.push_back(std::move(m));
            root_children.push_back(std::move(coll));
        } else {
            root_rule.rhs.push_back(Symbol{member_label, false});
            for (auto& m : b.members) root_children.push_back(std::move(m));
        }
    }
    g.rules.push_back(std::move(root_rule));
    for (auto& r : body) g.rules.push_back(std::move(r));
    out.ground_truth = std::move(g);
    out.canonical_instance = Tree::from_hedge(root_children);
    return out;
}

} // namespace architext
