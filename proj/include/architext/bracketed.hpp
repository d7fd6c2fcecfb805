#ifndef ARCHITEXT_BRACKETED_HPP
#define ARCHITEXT_BRACKETED_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "architext/tree.hpp"

namespace architext {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses one bracketed s-expression, e.g. "(S (NP (DT The)))".
/// Leaf atoms become tokens; parenthesised atoms become node labels.
/// Backslash escapes protect whitespace, parentheses, '#' and '\'.
Node parse_bracketed(const std::string& line);

/// Canonical single-line rendering; inverse of parse_bracketed.
std::string write_bracketed(const Node& node);

/// Parses a whole instance: either a single "(ROOT ...)" expression or one
/// sentence expression per line merged under a fresh root. '#' starts a
/// comment line.
Tree parse_instance(const std::string& text);

/// Renders an instance as "(ROOT sentence...)" on one line.
std::string write_instance(const Tree& tree);

/// Reads one bracketed sentence per line, skipping comments and blanks.
std::vector<Node> read_trees_file(const std::string& path);

} // namespace architext

#endif
