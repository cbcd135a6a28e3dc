#ifndef PLTL_BUCHI_HPP
#define PLTL_BUCHI_HPP

#include "pltl/diamond.hpp"
#include "pltl/formula.hpp"
#include "pltl/markov.hpp"
#include "pltl/reach.hpp"
#include "pltl/valuation.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pltl {

inline constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

// Number of states on a longest a-free path inside B; kInfinite when B has an
// a-free cycle. G F[<=n] a holds almost surely from B iff n >= gap.
std::uint64_t gap_of_bscc(const MarkovChain& m, const std::vector<StateId>& bscc, const std::string& a);

// Edge-length form n_{a,B} = gap - 1; nullopt stands for minus infinity
// (every state of B carries a). Almost sure iff n > n_{a,B}.
std::optional<std::int64_t> n_aB(std::uint64_t gap);

struct BsccGapInfo {
    std::size_t component = 0;
    std::vector<StateId> states;
    std::uint64_t gap = kInfinite;
    bool reachable = false;
    bool accepting = false;  // reachable and gap finite
    std::size_t dist_from_init = kUnreachable;  // d_{a,B}(s0): shortest path to an a-state of B
};

std::vector<BsccGapInfo> bscc_gaps(const MarkovChain& m, const std::string& a);

// Vertex 0 is the source. cost[u][v] == kInfinite means no edge.
struct SkeletonGraph {
    std::vector<std::vector<std::uint64_t>> cost;
    std::vector<bool> target;
    std::size_t size() const { return cost.size(); }
};

// Vertices: the initial state and every reachable a-state. Edge u -> v when
// v is reachable from u; its cost counts the a-free states strictly after u's
// last a on a shortest u-v path: d(u,v) - [a in L(u)].
SkeletonGraph skeleton_graph(const MarkovChain& m, const std::string& a, const BsccGapInfo& bscc,
                             std::vector<StateId>* vertex_states = nullptr);

// Minimum over source-to-target paths of the maximal edge cost (minimax
// Dijkstra). kInfinite when no target is reachable.
std::uint64_t c_min(const SkeletonGraph& g);
// Same quantity by enumerating simple paths; exponential, for checking.
std::uint64_t c_min_brute_force(const SkeletonGraph& g);

MinValue min_val_pos_buchi(const MarkovChain& m, const std::string& a);
// Longest a-free path (in states) over the reachable part; empty when a
// reachable cycle avoids a.
MinValue min_val_as1_buchi(const MarkovChain& m, const std::string& a);

// (variable, atom) per conjunct G F[<=x] a.
std::vector<std::pair<std::string, std::string>> buchi_conjuncts(const FormulaPtr& phi);

// nullopt: V>0 is empty. Otherwise bisection over {0..m*d}^d with the
// diamond checker as oracle.
std::optional<MinimalSet> min_set_pos_genbuchi(const MarkovChain& m, const FormulaPtr& phi,
                                               BisectionStats* stats = nullptr,
                                               std::size_t max_nodes = kDefaultMaxProductNodes);
bool emptiness_pos_genbuchi(const MarkovChain& m, const FormulaPtr& phi);
// Conjuncts must hold almost surely each; the least point is componentwise.
std::optional<MinimalSet> min_set_as1_genbuchi(const MarkovChain& m, const FormulaPtr& phi);

} // namespace pltl

#endif
