#include "architext/bracketed.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace architext {

namespace {

bool needs_escape(char c) {
    return c == '(' || c == ')' || c == '\\' || c == '#' || std::isspace(static_cast<unsigned char>(c));
}

std::string escape_atom(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (needs_escape(c)) out += '\\';
        out += c;
    }
    return out;
}

struct Cursor {
    const std::string& text;
    std::size_t i = 0;

    void skip_ws() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }
    bool done() const { return i >= text.size(); }
    char peek() const { return text[i]; }

    std::string atom() {
        std::string out;
        while (i < text.size()) {
            char c = text[i];
            if (c == '\\' && i + 1 < text.size()) {
                out += text[i + 1];
                i += 2;
                continue;
            }
            if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) break;
            out += c;
            ++i;
        }
        if (out.empty()) throw ParseError("expected atom at offset " + std::to_string(i));
        return out;
    }
};

Node parse_expr(Cursor& cur) {
    cur.skip_ws();
    if (cur.done()) throw ParseError("unexpected end of input");
    if (cur.peek() != '(') {
        // bare atom: a token leaf
        return Node(NodeLabel::token(cur.atom()));
    }
    ++cur.i; // consume '('
    cur.skip_ws();
    if (cur.done() || cur.peek() == '(' || cur.peek() == ')')
        throw ParseError("expected node label after '('");
    std::string head = cur.atom();
    std::vector<Node> children;
    while (true) {
        cur.skip_ws();
        if (cur.done()) throw ParseError("missing ')'");
        if (cur.peek() == ')') {
            ++cur.i;
            break;
        }
        children.push_back(parse_expr(cur));
    }
    Node n(NodeLabel::parse(head, false), std::move(children));
    if (n.label.kind == LabelKind::Root)
        throw ParseError("ROOT is reserved for the instance root");
    return n;
}

void write_expr(const Node& node, std::string& out) {
    if (node.label.kind == LabelKind::Token) {
        out += escape_atom(node.label.text);
        return;
    }
    out += '(';
    out += escape_atom(node.label.render());
    for (const Node& c : node.children) {
        out += ' ';
        write_expr(c, out);
    }
    out += ')';
}

std::vector<std::string> content_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::size_t end = line.find_last_not_of(" \t\r");
        lines.push_back(line.substr(start, end - start + 1));
    }
    return lines;
}

} // namespace

Node parse_bracketed(const std::string& line) {
    Cursor cur{line};
    Node n = parse_expr(cur);
    cur.skip_ws();
    if (!cur.done()) throw ParseError("trailing input after expression");
    return n;
}

std::string write_bracketed(const Node& node) {
    std::string out;
    write_expr(node, out);
    return out;
}

Tree parse_instance(const std::string& text) {
    auto lines = content_lines(text);
    if (lines.empty()) return Tree{};
    // A single expression headed by the reserved ROOT atom is a full instance.
    if (lines.size() == 1 && lines[0][0] == '(') {
        Cursor probe{lines[0]};
        ++probe.i;
        probe.skip_ws();
        if (!probe.done() && probe.peek() != '(' && probe.peek() != ')' &&
            probe.atom() == "ROOT") {
            Cursor cur{lines[0], probe.i};
            Hedge children;
            while (true) {
                cur.skip_ws();
                if (cur.done()) throw ParseError("missing ')'");
                if (cur.peek() == ')') {
                    ++cur.i;
                    break;
                }
                children.push_back(parse_expr(cur));
            }
            cur.skip_ws();
            if (!cur.done()) throw ParseError("trailing input after instance");
            return Tree::from_hedge(children);
        }
    }
    Hedge sentences;
    for (const auto& l : lines) sentences.push_back(parse_bracketed(l));
    return Tree::from_hedge(sentences);
}

std::string write_instance(const Tree& tree) {
    std::string out = "(ROOT";
    Node root = tree.to_node();
    for (const Node& c : root.children) {
        out += ' ';
        write_expr(c, out);
    }
    out += ')';
    return out;
}

std::vector<Node> read_trees_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trees file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::vector<Node> out;
    for (const auto& line : content_lines(buf.str())) out.push_back(parse_bracketed(line));
    return out;
}

} // namespace architext
