#ifndef ARCHITEXT_POSITION_HPP
#define ARCHITEXT_POSITION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace architext {

/// A position in an ordered tree: a sequence of child indices.
/// The empty sequence is the root. Lexicographic order on sequences
/// (a proper prefix sorts before its extensions) equals preorder.
class Position {
public:
    Position() = default;
    explicit Position(std::vector<std::uint32_t> seq) : seq_(std::move(seq)) {}

    static Position root() { return Position{}; }

    bool is_root() const { return seq_.empty(); }
    std::size_t depth() const { return seq_.size(); }

    Position child(std::uint32_t i) const {
        std::vector<std::uint32_t> s = seq_;
        s.push_back(i);
        return Position(std::move(s));
    }

    /// Parent position. Undefined for the root.
    Position parent() const {
        std::vector<std::uint32_t> s(seq_.begin(), seq_.end() - 1);
        return Position(std::move(s));
    }

    /// Drops the last `i` indices. Requires i <= depth().
    Position ancestor(std::size_t i) const {
        std::vector<std::uint32_t> s(seq_.begin(), seq_.end() - i);
        return Position(std::move(s));
    }

    /// Index of this node among its siblings. Undefined for the root.
    std::uint32_t last_index() const { return seq_.back(); }

    bool is_prefix_of(const Position& other) const {
        if (seq_.size() > other.seq_.size()) return false;
        for (std::size_t i = 0; i < seq_.size(); ++i)
            if (seq_[i] != other.seq_[i]) return false;
        return true;
    }

    bool is_strict_prefix_of(const Position& other) const {
        return seq_.size() < other.seq_.size() && is_prefix_of(other);
    }

    const std::vector<std::uint32_t>& seq() const { return seq_; }

    bool operator==(const Position& o) const { return seq_ == o.seq_; }
    bool operator!=(const Position& o) const { return seq_ != o.seq_; }
    bool operator<(const Position& o) const { return seq_ < o.seq_; }
    bool operator<=(const Position& o) const { return seq_ <= o.seq_; }
    bool operator>(const Position& o) const { return seq_ > o.seq_; }
    bool operator>=(const Position& o) const { return seq_ >= o.seq_; }

    /// Renders "0.1.2"; the root renders as "e".
    std::string to_string() const {
        if (seq_.empty()) return "e";
        std::string out;
        for (std::size_t i = 0; i < seq_.size(); ++i) {
            if (i) out += '.';
            out += std::to_string(seq_[i]);
        }
        return out;
    }

    /// Parses the to_string format. "e" (or "") is the root.
    static Position parse(const std::string& text);

private:
    std::vector<std::uint32_t> seq_;
};

} // namespace architext

#endif
