#include "pltl/word.hpp"

#include "pltl/errors.hpp"

#include <cctype>

namespace pltl {

std::vector<Letter> parse_letters(std::string_view text) {
    std::vector<Letter> out;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    while (i < text.size()) {
        if (text[i] != '{') throw UsageError("expected '{' at offset " + std::to_string(i) + " in word");
        ++i;
        Letter l;
        std::string cur;
        for (;; ++i) {
            if (i == text.size()) throw UsageError("unterminated letter in word");
            char c = text[i];
            if (c == ',' || c == '}' || std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) l.insert(cur);
                cur.clear();
                if (c == '}') break;
                continue;
            }
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw UsageError(std::string("invalid character '") + c + "' in word");
            cur += c;
        }
        ++i;
        out.push_back(std::move(l));
        skip();
    }
    return out;
}

std::string to_string(const Letter& l) {
    std::string s = "{";
    bool first = true;
    for (const auto& a : l) {
        if (!first) s += ',';
        s += a;
        first = false;
    }
    return s + "}";
}

std::string to_string(const std::vector<Letter>& w) {
    std::string s;
    for (const auto& l : w) s += to_string(l);
    return s;
}

} // namespace pltl
