#ifndef PLTL_ORACLE_HPP
#define PLTL_ORACLE_HPP

// Validation machinery independent of the automata pipeline.

#include "pltl/formula.hpp"
#include "pltl/markov.hpp"
#include "pltl/valuation.hpp"
#include "pltl/word.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pltl {

enum class Verdict3 { True, False, Unknown };

std::string to_string(Verdict3 v);

// Kleene evaluation on a finite prefix; positions past the end are unknown.
// True means every infinite extension satisfies psi, False that none does.
// psi must be variable-free; throws FragmentError otherwise.
Verdict3 eval_prefix(const std::vector<Letter>& u, const FormulaPtr& psi);

// Exact verdict for stem . loop^omega. Unbounded operators are fixpoints on
// the lasso graph; bounded ones follow the successor function.
bool eval_lasso(const LassoWord& w, const FormulaPtr& psi);

struct SampleResult {
    std::uint64_t samples = 0;
    std::uint64_t certified_true = 0;
    std::uint64_t certified_false = 0;
    std::uint64_t unknown = 0;
    std::uint64_t seed = 0;
    std::string rng = "mt19937_64";

    double fraction() const { return samples ? double(certified_true) / double(samples) : 0.0; }
};

// Fraction of sampled length-`horizon` paths whose prefix verdict for v(phi)
// is certainly true. A positive fraction proves Pr(M |= v(phi)) > 0.
SampleResult sample_lower_bound(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v,
                                std::uint64_t samples, std::size_t horizon, std::uint64_t seed);

// Exhaustive scan of {0..n}^d with the diamond point checker.
MinimalSet brute_force_min_set(const MarkovChain& m, const FormulaPtr& phi, std::uint64_t n,
                               std::uint64_t max_points = 2'000'000);

// ── 3-SAT fixtures ──

struct Cnf {
    unsigned vars = 0;
    std::vector<std::vector<int>> clauses;  // signed literals, 1-based
};

// "c" comment lines, "p cnf n k" header, clauses of signed integers each
// terminated by 0. Throws ParseError (line number as position).
Cnf parse_dimacs(std::string_view text);
std::string format_dimacs(const Cnf& cnf);

bool sat_brute_force(const Cnf& cnf);

struct SatFixture {
    MarkovChain chain;
    FormulaPtr formula;
};

// Chain over s0..sn, t1..tn, ~t1..~tn (3n+1 states): s_{i-1} branches 1/2 to
// t_i and ~t_i, both move to s_i, s_n loops. ck labels the literal states of
// clause k. Formula F[<=y1] c1 & ... & F[<=yk] ck; satisfiable iff V>0 nonempty.
SatFixture gen_3sat_fixture(const Cnf& cnf);

} // namespace pltl

#endif
