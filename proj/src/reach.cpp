#include "pltl/reach.hpp"

#include "pltl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace pltl {

MinValue min_val_pos(const MarkovChain& m, const std::string& a) {
    auto dist = bfs_distance(m.support(), m.initial());
    std::optional<std::uint64_t> best;
    for (StateId s = 0; s < m.size(); ++s)
        if (m.has_label(s, a) && dist[s] != kUnreachable && (!best || dist[s] < *best)) best = dist[s];
    return best;
}

MinValue min_val_as1(const MarkovChain& m, const std::string& a) {
    auto target = label_set(m, a);
    // DFS over the graph with target states as sinks; grey = on the stack.
    enum class Color { White, Grey, Black };
    std::vector<Color> color(m.size(), Color::White);
    std::vector<std::uint64_t> longest(m.size(), 0);
    bool cyclic = false;
    std::function<void(StateId)> visit = [&](StateId s) {
        color[s] = Color::Grey;
        std::uint64_t best = 0;
        if (!target[s]) {
            for (const auto& t : m.row(s)) {
                if (color[t.to] == Color::Grey) {
                    cyclic = true;
                    return;
                }
                if (color[t.to] == Color::White) visit(t.to);
                if (cyclic) return;
                best = std::max(best, longest[t.to] + 1);
            }
        }
        longest[s] = best;
        color[s] = Color::Black;
    };
    visit(m.initial());
    if (cyclic) return std::nullopt;
    return longest[m.initial()];
}

ExitSystem exit_system(const MarkovChain& m, const StateSet& target) {
    auto fwd = reachable_states(m);
    auto back = can_reach(m, target);
    ExitSystem sys;
    std::vector<std::size_t> idx(m.size(), kUnreachable);
    for (StateId s = 0; s < m.size(); ++s)
        if (fwd[s] && back[s] && !target[s]) {
            idx[s] = sys.states.size();
            sys.states.push_back(s);
        }
    const auto n = sys.states.size();
    sys.q.assign(n, std::vector<Rational>(n));
    sys.r.assign(n, Rational(0));
    sys.b = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& t : m.row(sys.states[i])) {
            if (target[t.to])
                sys.r[i] += t.p;
            else if (idx[t.to] != kUnreachable)
                sys.q[i][idx[t.to]] = t.p;
        }
        if (sys.r[i] > sys.b) sys.b = sys.r[i];
    }
    return sys;
}

Rational ergodicity_bound(const Rational& b, const Rational& gamma, unsigned n) {
    return b * (1 - pow(gamma, n + 1)) / (1 - gamma);
}

std::optional<double> ergodicity_log_estimate(const Rational& b, const Rational& gamma, const Rational& p) {
    if (b <= 0 || gamma <= 0 || gamma >= 1) return std::nullopt;
    const double arg = 1.0 - ((1 - gamma) * p / b).convert_to<double>();
    if (!(arg > 0.0 && arg < 1.0)) return std::nullopt;
    const double est = std::log(arg) / std::log(gamma.convert_to<double>());
    if (!std::isfinite(est) || est < 0) return std::nullopt;
    return est;
}

namespace {

// Acyclic transient region: mu reaches mu_inf within its longest path.
bool transient_acyclic(const MarkovChain& m, const StateSet& target) {
    auto sys = exit_system(m, target);
    std::vector<std::vector<NodeId>> adj(sys.states.size());
    for (std::size_t i = 0; i < sys.states.size(); ++i)
        for (std::size_t j = 0; j < sys.states.size(); ++j)
            if (sys.q[i][j] != 0) {
                if (i == j) return false;
                adj[i].push_back(static_cast<NodeId>(j));
            }
    auto scc = tarjan_scc(Digraph::from_lists(adj));
    return scc.count == sys.states.size();
}

} // namespace

MinValue min_val_geq(const MarkovChain& m, const StateSet& target, const Rational& p, GeqStats* stats,
                     std::uint64_t max_steps) {
    GeqStats local;
    GeqStats& st = stats ? *stats : local;
    if (p <= 0 || p >= 1) throw UsageError("threshold p must lie strictly between 0 and 1");
    if (target[m.initial()]) return 0;
    const Rational limit = unbounded_reach_prob(m, target);
    if (limit < p) return std::nullopt;

    ReachIterator it(m, target);
    std::vector<Rational> series{it.value()};
    auto value_at = [&](std::uint64_t n) -> const Rational& {
        if (n > max_steps)
            throw ResourceLimit("bounded reachability needs more than " + std::to_string(max_steps) + " steps");
        while (it.step() < n) {
            it.advance();
            series.push_back(it.value());
        }
        st.steps = series.size();
        return series[n];
    };
    // First index in [lo, hi] with mu >= p, given mu_hi >= p.
    auto search = [&](std::uint64_t lo, std::uint64_t hi) {
        while (lo < hi) {
            auto mid = lo + (hi - lo) / 2;
            if (value_at(mid) >= p)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    };

    const std::uint64_t m_states = m.size();
    if (limit == p) {
        st.boundary = true;
        if (!transient_acyclic(m, target)) return std::nullopt;
        return search(0, m_states);
    }

    // Starting point from the ergodicity estimate; only a hint, verified exactly.
    std::uint64_t hi = m_states;
    auto sys = exit_system(m, target);
    if (!sys.states.empty()) {
        try {
            auto gamma = ergodicity_coefficient(sys.q);
            st.estimate = ergodicity_log_estimate(sys.b, gamma, p);
        } catch (const ModelError&) {
            // a zero row makes the coefficient undefined; gallop from m instead
        }
    }
    if (st.estimate && *st.estimate < static_cast<double>(max_steps))
        hi = std::max<std::uint64_t>(hi, static_cast<std::uint64_t>(std::ceil(*st.estimate)));
    std::uint64_t lo = 0;
    while (value_at(std::min(hi, max_steps + 1)) < p) {
        lo = hi + 1;
        hi *= 2;
    }
    return search(lo, hi);
}

MinValue min_val_geq(const MarkovChain& m, const std::string& a, const Rational& p, GeqStats* stats,
                     std::uint64_t max_steps) {
    return min_val_geq(m, label_set(m, a), p, stats, max_steps);
}

bool emptiness_geq(const MarkovChain& m, const std::string& a, const Rational& p) {
    auto target = label_set(m, a);
    if (target[m.initial()]) return false;
    const Rational limit = unbounded_reach_prob(m, target);
    if (limit > p) return false;
    if (limit < p) return true;
    return !transient_acyclic(m, target);
}

} // namespace pltl
