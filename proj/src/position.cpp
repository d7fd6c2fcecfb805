#include "architext/position.hpp"

#include <stdexcept>

namespace architext {

Position Position::parse(const std::string& text) {
    if (text.empty() || text == "e") return Position::root();
    std::vector<std::uint32_t> seq;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t j = text.find('.', i);
        if (j == std::string::npos) j = text.size();
        if (j == i) throw std::invalid_argument("bad position: " + text);
        seq.push_back(static_cast<std::uint32_t>(std::stoul(text.substr(i, j - i))));
        i = j + 1;
    }
    return Position(std::move(seq));
}

} // namespace architext
