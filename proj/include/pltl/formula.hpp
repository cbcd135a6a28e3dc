#ifndef PLTL_FORMULA_HPP
#define PLTL_FORMULA_HPP

#include "pltl/valuation.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pltl {

enum class Op {
    Atom,
    NegAtom,
    Not,
    And,
    Or,
    Next,
    Until,
    Release,
    Always,
    Eventually,
    BoundedEventually,  // F[<=x] / F[<=c]
    BoundedAlways,      // G[<=c]
};

// Either a parameter name or a constant.
struct Bound {
    std::string var;  // empty for constants
    std::uint64_t value = 0;

    bool is_param() const { return !var.empty(); }
    static Bound param(std::string name) { return {std::move(name), 0}; }
    static Bound constant(std::uint64_t c) { return {{}, c}; }
    bool operator==(const Bound&) const = default;
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. `lhs` is the only child of unary operators.
struct Formula {
    Op op;
    std::string name;  // Atom / NegAtom
    Bound bound;       // bounded operators
    FormulaPtr lhs;
    FormulaPtr rhs;
    std::size_t pos = 0;  // offset in the source text

    bool is_literal() const { return op == Op::Atom || op == Op::NegAtom; }
    bool is_binary() const { return op == Op::And || op == Op::Or || op == Op::Until || op == Op::Release; }
};

FormulaPtr make_atom(std::string name, std::size_t pos = 0);
FormulaPtr make_neg_atom(std::string name, std::size_t pos = 0);
FormulaPtr make_unary(Op op, FormulaPtr child, std::size_t pos = 0);
FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs, std::size_t pos = 0);
FormulaPtr make_bounded(Op op, Bound bound, FormulaPtr child, std::size_t pos = 0);

// ── Front end ──

// Throws ParseError (with offset) on malformed input.
FormulaPtr parse_formula(std::string_view text);

// Fully parenthesised binaries; the output re-parses to the same tree.
std::string to_string(const FormulaPtr& f);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// ── Normalisation ──

bool is_nnf(const FormulaPtr& f);

// Pushes negation to atoms. Throws FragmentError when a parameterised
// eventuality would end up under negation.
FormulaPtr to_nnf(const FormulaPtr& f);

// F[<=c] p -> p | X F[<=c-1] p, G[<=c] p -> p & X G[<=c-1] p, down to c = 0.
// Parameterised bounds are left untouched.
FormulaPtr rewrite_constant_bounds(const FormulaPtr& f);

// Replaces each parameter with its value. Throws UsageError on a missing one.
FormulaPtr substitute(const FormulaPtr& f, const Valuation& v);

// Every F[<=x] becomes F.
FormulaPtr strip_params(const FormulaPtr& f);

// ── Queries ──

std::size_t size(const FormulaPtr& f);
std::vector<std::string> variables(const FormulaPtr& f);  // sorted, unique
std::vector<std::string> atoms(const FormulaPtr& f);      // sorted, unique

// Distinct subformulas in post-order (children before parents, f last).
std::vector<FormulaPtr> closure(const FormulaPtr& f);

enum class FragmentClass { Reach, Buchi, GeneralizedBuchi, FX, Diamond, FullPLTL };

std::string to_string(FragmentClass c);

// Most specific class; expects NNF (anything else is FullPLTL).
FragmentClass classify(const FormulaPtr& f);

// ── Renaming ──

struct RenamedFormula {
    FormulaPtr formula;
    // renamed variable -> user variable; identity for variables occurring once
    std::map<std::string, std::string> origin;

    // Lifts a valuation over user variables to the renamed ones.
    Valuation expand(const Valuation& user) const;
};

// Variables occurring more than once become "x#1", "x#2", ... in left-to-right order.
RenamedFormula rename_apart(const FormulaPtr& f);

} // namespace pltl

#endif
