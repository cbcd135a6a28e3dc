#ifndef PLTL_MARKOV_HPP
#define PLTL_MARKOV_HPP

#include "pltl/graph.hpp"
#include "pltl/rational.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pltl {

using StateId = NodeId;
using StateSet = std::vector<bool>;  // indicator over states
using Matrix = std::vector<std::vector<Rational>>;

struct Transition {
    StateId to;
    Rational p;
};

// Finite DTMC with exact rational probabilities. Rows are sparse, sorted by
// target and contain only positive entries.
class MarkovChain {
public:
    MarkovChain() = default;
    explicit MarkovChain(std::size_t m) : rows_(m), labels_(m) {}

    std::size_t size() const { return rows_.size(); }
    StateId initial() const { return init_; }
    void set_initial(StateId s);

    // Replaces an existing entry; p = 0 removes it.
    void set_transition(StateId from, StateId to, const Rational& p);
    void add_label(StateId s, const std::string& name);

    const std::vector<Transition>& row(StateId s) const { return rows_.at(s); }
    Rational prob(StateId from, StateId to) const;
    const std::vector<std::string>& labels(StateId s) const { return labels_.at(s); }
    bool has_label(StateId s, const std::string& name) const;
    std::vector<std::string> propositions() const;  // sorted union of labels

    // Throws ModelError unless every row is stochastic.
    void validate() const;

    Digraph support() const;

private:
    std::vector<std::vector<Transition>> rows_;
    std::vector<std::vector<std::string>> labels_;
    StateId init_ = 0;
};

// Line format: "states m", "init s", "label s name...", "trans s t p".
// Throws ParseError (line number as position) on syntax errors and ModelError
// on semantic ones.
MarkovChain parse_chain(std::string_view text);
MarkovChain load_chain(const std::string& path);
std::string format_chain(const MarkovChain& m);

StateSet label_set(const MarkovChain& m, const std::string& prop);

struct SccDecomposition {
    std::vector<std::vector<StateId>> components;  // each sorted
    std::vector<std::size_t> comp_of;
    std::vector<bool> bottom;
    std::vector<bool> trivial;  // single state without self-loop
    std::vector<std::vector<std::size_t>> successors;  // condensation edges
};

SccDecomposition scc_decompose(const MarkovChain& m);

StateSet reachable_states(const MarkovChain& m);  // from the initial state
StateSet can_reach(const MarkovChain& m, const StateSet& target);

// mu_n for n = 0..steps: probability of reaching `target` within n steps.
std::vector<Rational> bounded_reach_series(const MarkovChain& m, const StateSet& target, std::size_t steps);
Rational bounded_reach_prob(const MarkovChain& m, const StateSet& target, std::size_t n);

// Incremental mu_n; one sparse matrix-vector product per step.
class ReachIterator {
public:
    ReachIterator(const MarkovChain& m, const StateSet& target);
    std::size_t step() const { return n_; }
    const Rational& value() const { return x_[init_]; }
    void advance();

private:
    const MarkovChain* m_;
    StateSet target_;
    std::vector<Rational> x_;
    StateId init_;
    std::size_t n_ = 0;
};

// Exact Pr(F target) by Gaussian elimination over the states that can reach it.
Rational unbounded_reach_prob(const MarkovChain& m, const StateSet& target);

// Unit-weight shortest path lengths; kUnreachable if none. d(s,s) = 0.
std::vector<std::vector<std::size_t>> all_pairs_distance(const MarkovChain& m);

// tau(Q) = 1 - min over row pairs (i, j), i = j included, of sum_k min(Q_ik, Q_jk).
// Throws ModelError on a zero row.
Rational ergodicity_coefficient(const Matrix& q);

} // namespace pltl

#endif
