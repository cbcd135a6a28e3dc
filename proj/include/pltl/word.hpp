#ifndef PLTL_WORD_HPP
#define PLTL_WORD_HPP

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pltl {

using Letter = std::set<std::string>;

// stem . loop^omega; loop is nonempty.
struct LassoWord {
    std::vector<Letter> stem;
    std::vector<Letter> loop;
};

// "{a,b}{}{c}" -> three letters. Throws UsageError on malformed input.
std::vector<Letter> parse_letters(std::string_view text);
std::string to_string(const Letter& l);
std::string to_string(const std::vector<Letter>& w);

} // namespace pltl

#endif
