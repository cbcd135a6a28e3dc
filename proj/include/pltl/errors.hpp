#ifndef PLTL_ERRORS_HPP
#define PLTL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pltl {

// Malformed formula or chain text. `position` is a byte offset (formulas)
// or a line number (chain files).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg), position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Formula lies outside the fragment an engine supports.
class FragmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid model (bad row sums, unknown ids, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exploration exceeded a configured cap. Never a verdict.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inconsistent arguments (dimension mismatch, missing variable, ...).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pltl

#endif
