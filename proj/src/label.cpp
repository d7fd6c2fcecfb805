#include "architext/label.hpp"

namespace architext {

std::string NodeLabel::render() const {
    switch (kind) {
        case LabelKind::Root: return "ROOT";
        case LabelKind::Syntactic: return text;
        case LabelKind::Entity: return "ENT_" + text;
        case LabelKind::Group: return "GROUP_" + text;
        case LabelKind::Rel: return "REL_" + text;
        case LabelKind::Coll: return "COLL_" + text;
        case LabelKind::Token: return text;
        case LabelKind::Aux: return text;
    }
    return text;
}

namespace {
bool strip_prefix(const std::string& s, const char* prefix, std::string& rest) {
    std::size_t n = std::char_traits<char>::length(prefix);
    if (s.size() <= n || s.compare(0, n, prefix) != 0) return false;
    rest = s.substr(n);
    return true;
}
} // namespace

NodeLabel NodeLabel::parse(const std::string& atom, bool is_leaf) {
    if (is_leaf) return NodeLabel::token(atom);
    if (atom == "ROOT") return NodeLabel::root();
    std::string rest;
    if (strip_prefix(atom, "ENT_", rest)) return NodeLabel::entity(rest);
    if (strip_prefix(atom, "GROUP_", rest)) return NodeLabel::group(rest);
    if (strip_prefix(atom, "REL_", rest)) return NodeLabel::rel(rest);
    if (strip_prefix(atom, "COLL_", rest)) return NodeLabel::coll(rest);
    if (atom == "ER") return NodeLabel::aux(AuxKind::ER);
    if (atom == "EC") return NodeLabel::aux(AuxKind::EC);
    if (atom.empty()) throw std::invalid_argument("empty node label");
    return NodeLabel::syn(atom);
}

} // namespace architext
