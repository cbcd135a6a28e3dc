#ifndef PLTL_DIAMOND_HPP
#define PLTL_DIAMOND_HPP

// Qualitative checking of full pLTL-diamond formulas against a Markov chain.
//
// G is the tableau automaton over consistent sets of subformulas. States are
// built lazily and only track the subformulas whose truth value is needed at
// the current position (the root initially, plus whatever the previous state
// referenced through X, U, R, G, F or F[<=x]). Every tracked value equals the
// truth value on the word, so for each word at most one run survives: the
// automaton is unambiguous, which the product analysis relies on.
//
// F[<=x] psi is handled with two counters in B(v):
//   n  consecutive positions where F[<=x] psi is claimed but psi is not yet
//      seen; must stay <= v(x),
//   f  remaining positions in which psi is forbidden because F[<=x] psi was
//      claimed false; G records only whether f > 0 (the "forbid" flag).

#include "pltl/formula.hpp"
#include "pltl/graph.hpp"
#include "pltl/markov.hpp"
#include "pltl/valuation.hpp"
#include "pltl/word.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace pltl {

using LetterMask = std::uint32_t;  // bit per atom of the formula
using GStateId = std::uint32_t;

struct GState {
    std::uint64_t active = 0;  // tracked subformulas
    std::uint64_t value = 0;   // subset of active: those claimed true
    std::uint32_t forbid = 0;  // per parameter: psi currently forbidden
};

// ── G ──

class GAutomaton {
public:
    // `phi` must be NNF, variables renamed apart, constant bounds unfolded.
    // Throws FragmentError outside pLTL-diamond and ResourceLimit beyond 64
    // subformulas or 32 atoms/parameters.
    explicit GAutomaton(const FormulaPtr& phi);

    const FormulaPtr& formula() const { return phi_; }
    const std::vector<FormulaPtr>& closure() const { return cl_; }
    const std::vector<std::string>& atoms() const { return atoms_; }
    const std::vector<std::string>& params() const { return params_; }

    std::size_t acc_b_count() const { return accb_.size(); }  // k, possibly 0
    std::size_t acc_p_count() const { return params_.size(); }

    std::size_t state_count() const { return states_.size(); }
    const GState& state(GStateId q) const { return states_[q]; }

    bool in_acc_b(GStateId q, std::size_t i) const;  // q in F_i
    bool in_acc_p(GStateId q, std::size_t j) const;  // q in F_{x_j}
    bool claims_false(GStateId q, std::size_t j) const;  // F[<=x_j] tracked and false

    LetterMask letter_of(const std::vector<std::string>& labels) const;
    LetterMask letter_of(const Letter& l) const;

    // Initial states whose literals agree with `letter`.
    const std::vector<GStateId>& initial(LetterMask letter);
    // Successors whose literals agree with `letter` (the letter of the target
    // position). `keep_forbid` selects which forbid flags of q stay raised.
    const std::vector<GStateId>& successors(GStateId q, LetterMask letter, std::uint32_t keep_forbid);

    std::string describe(GStateId q) const;

private:
    struct Element;
    struct NextReq {
        std::uint64_t active = 0, must1 = 0, must0 = 0;
        bool conflict = false;
    };

    GStateId intern(const GState& s);
    NextReq next_requirements(const GState& s) const;
    std::vector<GStateId> expand(std::uint64_t req_active, std::uint64_t must1, std::uint64_t must0,
                                 std::uint32_t keep_forbid, LetterMask letter);

    FormulaPtr phi_;
    std::vector<FormulaPtr> cl_;
    std::vector<Element> el_;
    std::vector<std::string> atoms_;
    std::vector<std::string> params_;
    std::vector<std::size_t> accb_;    // closure index of each U/R/G/F element
    std::vector<std::size_t> param_el_;  // closure index of each F[<=x] element
    std::uint64_t temporal_mask_ = 0;

    std::vector<GState> states_;
    std::vector<NextReq> next_;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>, GStateId> ids_;
    std::unordered_map<LetterMask, std::vector<GStateId>> initial_cache_;
    std::map<std::tuple<GStateId, LetterMask, std::uint32_t>, std::vector<GStateId>> succ_cache_;
};

// ── U: round-robin index over Acc_B ──

class UAutomaton {
public:
    explicit UAutomaton(std::shared_ptr<GAutomaton> g) : g_(std::move(g)) {}

    GAutomaton& g() const { return *g_; }
    std::shared_ptr<GAutomaton> g_ptr() const { return g_; }
    // max(k, 1)
    std::uint32_t index_count() const { return static_cast<std::uint32_t>(std::max<std::size_t>(g_->acc_b_count(), 1)); }
    std::uint32_t next_index(GStateId q, std::uint32_t i) const;
    bool accepting(GStateId q, std::uint32_t i) const;

private:
    std::shared_ptr<GAutomaton> g_;
};

std::shared_ptr<GAutomaton> build_g(const FormulaPtr& phi);
UAutomaton degeneralize(std::shared_ptr<GAutomaton> g);

// ── B(v): counter instantiation ──

using BStateId = std::uint32_t;

class InstancedNba {
public:
    // `v` indexed like g().params().
    InstancedNba(UAutomaton u, std::vector<std::uint64_t> v);

    const UAutomaton& u() const { return u_; }
    const std::vector<std::uint64_t>& valuation() const { return v_; }
    std::size_t state_count() const { return gq_.size(); }

    const std::vector<BStateId>& initial(LetterMask letter);
    const std::vector<BStateId>& successors(BStateId b, LetterMask letter);
    bool accepting(BStateId b) const;
    GStateId g_state(BStateId b) const { return gq_[b]; }
    std::string describe(BStateId b) const;

private:
    BStateId intern(GStateId q, std::uint32_t idx, const std::vector<std::uint32_t>& counters);

    UAutomaton u_;
    std::vector<std::uint64_t> v_;
    std::size_t d_;
    std::vector<GStateId> gq_;
    std::vector<std::uint32_t> idx_;
    std::vector<std::uint32_t> counters_;  // 2d per state: n..., f...
    std::unordered_map<std::string, BStateId> ids_;
    std::unordered_map<LetterMask, std::vector<BStateId>> initial_cache_;
    std::unordered_map<std::uint64_t, std::vector<BStateId>> succ_cache_;
};

InstancedNba instantiate(const UAutomaton& u, const std::vector<std::uint64_t>& v);

// ── Product with a Markov chain ──

struct ProductGraph {
    std::vector<StateId> mstate;
    std::vector<BStateId> bstate;
    Digraph edges;
    std::vector<NodeId> initial;
    std::vector<bool> accepting;

    std::size_t size() const { return mstate.size(); }
};

inline constexpr std::size_t kDefaultMaxProductNodes = 10'000'000;

ProductGraph product(const MarkovChain& m, InstancedNba& b, std::size_t max_nodes = kDefaultMaxProductNodes);

struct SccAnalysis {
    SccResult scc;
    std::vector<bool> accepting;  // per component
    std::vector<bool> complete;   // per component (computed for accepting ones only)
    std::vector<bool> live;       // per node: reaches a complete accepting component
};

// Complete: every finite path of M from a state of the component can be
// followed by some automaton run that stays inside it (fiber-subset search).
SccAnalysis complete_accepting_scc(const ProductGraph& pg, const MarkovChain& m);

// Lasso of M-states realising a trace accepted by B(v) inside a complete
// accepting component.
struct StateLasso {
    std::vector<StateId> stem;
    std::vector<StateId> loop;
};

// ── Checker ──

struct DiamondStats {
    std::size_t g_states = 0;
    std::size_t b_states = 0;
    std::size_t product_nodes = 0;
    std::size_t product_edges = 0;
    std::size_t components = 0;
};

// Prepares a formula once (renaming apart, unfolding constant bounds) and
// answers qualitative queries for any valuation over the user variables.
class DiamondChecker {
public:
    DiamondChecker(const MarkovChain& m, const FormulaPtr& phi, std::size_t max_nodes = kDefaultMaxProductNodes);

    const std::vector<std::string>& variables() const { return user_vars_; }
    // m * |phi| * 2^|phi|, saturating at 2^30.
    std::uint64_t vbar() const { return vbar_; }

    bool check_pos(const Valuation& v, DiamondStats* stats = nullptr, StateLasso* witness = nullptr);
    bool check_as1(const Valuation& v, DiamondStats* stats = nullptr);
    bool check_pos(const Point& p) { return check_pos(to_valuation(p, user_vars_)); }
    bool check_as1(const Point& p) { return check_as1(to_valuation(p, user_vars_)); }

    std::shared_ptr<GAutomaton> g() const { return g_; }
    std::vector<std::uint64_t> internal_valuation(const Valuation& user) const;

private:
    const MarkovChain* m_;
    FormulaPtr phi_;
    RenamedFormula renamed_;
    std::vector<std::string> user_vars_;
    std::shared_ptr<GAutomaton> g_;
    std::uint64_t vbar_;
    std::size_t max_nodes_;
};

bool check_pos(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v);
bool check_as1(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v);

// Single check at v-bar for every variable.
bool emptiness_pos_diamond(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats = nullptr,
                           std::size_t max_nodes = kDefaultMaxProductNodes);
bool emptiness_as1_diamond(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats = nullptr,
                           std::size_t max_nodes = kDefaultMaxProductNodes);

// Bisection over {0..n}^d with check_pos as oracle; n defaults to v-bar.
MinimalSet min_set_diamond(const MarkovChain& m, const FormulaPtr& phi, std::optional<std::uint64_t> n = std::nullopt,
                           BisectionStats* stats = nullptr, std::size_t max_nodes = kDefaultMaxProductNodes);

// Whether B(v) has an accepting run on the lasso word (v over user variables).
bool accepts_lasso(const FormulaPtr& phi, const Valuation& v, const LassoWord& w);

// Plain-text dump of G, U and B(v) explored over all letters of the formula.
std::string emit_automata(const FormulaPtr& phi, const Valuation& v, std::size_t max_states = 100000);

} // namespace pltl

#endif
