#ifndef PLTL_REACH_HPP
#define PLTL_REACH_HPP

#include "pltl/markov.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pltl {

// Minimal n for F[<=x] a; nullopt means the valuation set is empty.
using MinValue = std::optional<std::uint64_t>;

// Shortest path from the initial state to an a-state.
MinValue min_val_pos(const MarkovChain& m, const std::string& a);

// Longest path to an a-state, or empty when an a-avoiding cycle is reachable.
MinValue min_val_as1(const MarkovChain& m, const std::string& a);

struct GeqStats {
    std::uint64_t steps = 0;          // mu_n values computed
    std::optional<double> estimate;   // log-bound starting point, when informative
    bool boundary = false;            // mu_inf == p
};

// Least n with mu_n >= p, for p in (0,1). Throws ResourceLimit when the
// answer exceeds `max_steps`.
MinValue min_val_geq(const MarkovChain& m, const std::string& a, const Rational& p, GeqStats* stats = nullptr,
                     std::uint64_t max_steps = 20000);
MinValue min_val_geq(const MarkovChain& m, const StateSet& target, const Rational& p, GeqStats* stats = nullptr,
                     std::uint64_t max_steps = 20000);

// True iff V>=p(F[<=x] a) is empty.
bool emptiness_geq(const MarkovChain& m, const std::string& a, const Rational& p);

// Transient part of the reachability problem: Q restricted to reachable
// non-target states that can reach the target, and the exit vector r(s) = P(s, T).
struct ExitSystem {
    std::vector<StateId> states;
    Matrix q;
    std::vector<Rational> r;
    Rational b;  // max entry of r
};

ExitSystem exit_system(const MarkovChain& m, const StateSet& target);

// b * (1 - gamma^(n+1)) / (1 - gamma)
Rational ergodicity_bound(const Rational& b, const Rational& gamma, unsigned n);

// log_gamma(1 - (1 - gamma) p / b) in floating point; nullopt when undefined.
std::optional<double> ergodicity_log_estimate(const Rational& b, const Rational& gamma, const Rational& p);

} // namespace pltl

#endif
