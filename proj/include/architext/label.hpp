#ifndef ARCHITEXT_LABEL_HPP
#define ARCHITEXT_LABEL_HPP

#include <stdexcept>
#include <string>

namespace architext {

enum class LabelKind {
    Root,       // the reserved root symbol
    Syntactic,  // part-of-speech / phrase tag, or "_" for unlabelled nodes
    Entity,     // named entity, carries the entity name
    Group,      // named set of entities
    Rel,        // relation between two groups
    Coll,       // collection of equivalent groups or relations
    Token,      // leaf word
    Aux,        // ER / EC nodes introduced by entity unnesting
};

enum class AuxKind { ER, EC };

/// Tagged node label. Equality is exact (kind + text), case-sensitive.
struct NodeLabel {
    LabelKind kind = LabelKind::Root;
    std::string text; // tag, name, id, token text, or "ER"/"EC"

    static NodeLabel root() { return {LabelKind::Root, ""}; }
    static NodeLabel syn(std::string tag) { return {LabelKind::Syntactic, std::move(tag)}; }
    static NodeLabel entity(std::string name) { return {LabelKind::Entity, std::move(name)}; }
    static NodeLabel group(std::string id) { return {LabelKind::Group, std::move(id)}; }
    static NodeLabel rel(std::string id) { return {LabelKind::Rel, std::move(id)}; }
    static NodeLabel coll(std::string id) { return {LabelKind::Coll, std::move(id)}; }
    static NodeLabel token(std::string text) { return {LabelKind::Token, std::move(text)}; }
    static NodeLabel aux(AuxKind k) { return {LabelKind::Aux, k == AuxKind::ER ? "ER" : "EC"}; }

    /// Placeholder for nodes created by rewriting that carry no category yet.
    static NodeLabel unlabelled() { return syn("_"); }

    bool is(LabelKind k) const { return kind == k; }
    bool is_aux_er() const { return kind == LabelKind::Aux && text == "ER"; }
    bool is_aux_ec() const { return kind == LabelKind::Aux && text == "EC"; }

    /// Not yet one of the target-grammar categories (entity/group/rel/coll).
    bool is_uncategorized() const {
        return kind == LabelKind::Syntactic || kind == LabelKind::Aux;
    }

    bool operator==(const NodeLabel& o) const { return kind == o.kind && text == o.text; }
    bool operator!=(const NodeLabel& o) const { return !(*this == o); }
    bool operator<(const NodeLabel& o) const {
        if (kind != o.kind) return kind < o.kind;
        return text < o.text;
    }

    /// Canonical rendering: ROOT, ENT_x, GROUP_k, REL_k, COLL_k, ER, EC,
    /// raw tag, or raw token text.
    std::string render() const;

    /// Inverse of render() for non-leaf atoms; leaf atoms become tokens.
    static NodeLabel parse(const std::string& atom, bool is_leaf);
};

} // namespace architext

#endif
