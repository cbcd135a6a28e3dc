#ifndef PLTL_FX_HPP
#define PLTL_FX_HPP

#include "pltl/diamond.hpp"
#include "pltl/formula.hpp"
#include "pltl/markov.hpp"
#include "pltl/valuation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pltl {

// Disjunction-free formulas whose disjunction is equivalent to phi (NNF,
// pLTL(F,X), constant bounds already unfolded).
std::vector<FormulaPtr> dnf_split(const FormulaPtr& phi);

// Deterministic automaton over 2^atoms with an absorbing final state; a
// word is accepted once the final state is reached. Transitions are explicit
// per letter (bit i of a letter = atoms[i]); missing guards go to a
// non-final absorbing sink.
struct Dba {
    std::vector<std::string> atoms;
    std::vector<std::vector<std::uint32_t>> delta;  // [state][letter]
    std::uint32_t initial = 0;
    std::uint32_t final_state = 0;
    std::uint32_t sink = kNoSink;

    static constexpr std::uint32_t kNoSink = UINT32_MAX;

    std::size_t size() const { return delta.size(); }
    // States other than the rejecting sink.
    std::size_t live_size() const { return size() - (sink == kNoSink ? 0 : 1); }
    std::uint32_t letter_count() const { return std::uint32_t{1} << atoms.size(); }
    std::uint32_t letter_of(const std::vector<std::string>& labels) const;
    // Longest simple initial-to-final path (self-loops excluded).
    std::size_t diameter() const;
    // Reachability is a partial order: no cycles besides self-loops.
    bool partially_ordered() const;
};

// For parameter-free, disjunction-free LTL(F,X) built from literals, X,
// conjunction and F(l1 & ... & lk & F psi1 & ... & F psij). Throws
// FragmentError on other shapes (e.g. F(a & X b)), for which the reading of
// the first matching position would not be exact.
Dba build_dba(const FormulaPtr& phi_bar);

struct FxWitness {
    Valuation valuation;         // v-bar
    std::vector<StateId> path;   // finite path of M certifying v-bar(phi)
    std::size_t disjunct = 0;    // index into dnf_split
};

struct FxStats {
    std::size_t disjuncts = 0;
    std::size_t dba_states = 0;      // over all built automata
    std::size_t fallback_disjuncts = 0;  // handled by the diamond engine
};

// m * max(|phi|, largest disjunct) for the NNF formula with constants unfolded.
std::uint64_t fx_bound(const MarkovChain& m, const FormulaPtr& phi);

// true = V>0 empty. On nonempty, `witness` receives v-bar and a path whose
// prefix verdict for v-bar(phi) is certainly true.
bool emptiness_pos_fx(const MarkovChain& m, const FormulaPtr& phi, FxWitness* witness = nullptr,
                      FxStats* stats = nullptr, std::size_t max_nodes = kDefaultMaxProductNodes);
// true = V=1 empty; almost-sure check at v-bar.
bool emptiness_as1_fx(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats = nullptr,
                      std::size_t max_nodes = kDefaultMaxProductNodes);
// Bisection over {0..v-bar}^d with the diamond checker.
MinimalSet min_set_fx(const MarkovChain& m, const FormulaPtr& phi, BisectionStats* stats = nullptr,
                      std::size_t max_nodes = kDefaultMaxProductNodes);

} // namespace pltl

#endif
