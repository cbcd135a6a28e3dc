#include "pltl/buchi.hpp"

#include "pltl/diamond.hpp"
#include "pltl/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace pltl {

namespace {

// Longest path (in nodes) of the subgraph induced by `keep`; kInfinite on a cycle.
std::uint64_t longest_path_nodes(const Digraph& g, const std::vector<bool>& keep) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indeg(n, 0);
    std::size_t kept = 0;
    for (std::size_t u = 0; u < n; ++u) {
        if (!keep[u]) continue;
        ++kept;
        for (NodeId v : g.successors(u))
            if (keep[v]) ++indeg[v];
    }
    std::vector<NodeId> order;
    order.reserve(kept);
    for (std::size_t u = 0; u < n; ++u)
        if (keep[u] && indeg[u] == 0) order.push_back(static_cast<NodeId>(u));
    for (std::size_t i = 0; i < order.size(); ++i)
        for (NodeId v : g.successors(order[i]))
            if (keep[v] && --indeg[v] == 0) order.push_back(v);
    if (order.size() != kept) return kInfinite;

    std::vector<std::uint64_t> len(n, 0);
    std::uint64_t best = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::uint64_t l = 1;
        for (NodeId v : g.successors(*it))
            if (keep[v]) l = std::max(l, len[v] + 1);
        len[*it] = l;
        best = std::max(best, l);
    }
    return best;
}

struct SkeletonBase {
    SkeletonGraph graph;  // no targets yet
    std::vector<StateId> states;
};

SkeletonBase skeleton_base(const MarkovChain& m, const std::string& a) {
    const Digraph g = m.support();
    const StateSet reach = reachable_states(m);
    SkeletonBase out;
    out.states.push_back(m.initial());
    for (StateId s = 0; s < m.size(); ++s)
        if (s != m.initial() && reach[s] && m.has_label(s, a)) out.states.push_back(s);

    const std::size_t k = out.states.size();
    out.graph.cost.assign(k, std::vector<std::uint64_t>(k, kInfinite));
    out.graph.target.assign(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        const StateId u = out.states[i];
        const auto dist = bfs_distance(g, u);
        const std::uint64_t own = m.has_label(u, a) ? 1 : 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j || dist[out.states[j]] == kUnreachable) continue;
            out.graph.cost[i][j] = dist[out.states[j]] - own;
        }
    }
    return out;
}

void mark_targets(SkeletonGraph& g, const std::vector<StateId>& states, const MarkovChain& m, const std::string& a,
                  const BsccGapInfo& bscc) {
    std::vector<bool> in_b(m.size(), false);
    for (StateId s : bscc.states) in_b[s] = true;
    for (std::size_t i = 0; i < states.size(); ++i) g.target[i] = in_b[states[i]] && m.has_label(states[i], a);
}

} // namespace

// ── Gaps ──

std::uint64_t gap_of_bscc(const MarkovChain& m, const std::vector<StateId>& bscc, const std::string& a) {
    std::vector<bool> keep(m.size(), false);
    for (StateId s : bscc)
        if (!m.has_label(s, a)) keep[s] = true;
    return longest_path_nodes(m.support(), keep);
}

std::optional<std::int64_t> n_aB(std::uint64_t gap) {
    if (gap == 0) return std::nullopt;
    if (gap == kInfinite) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(gap - 1);
}

std::vector<BsccGapInfo> bscc_gaps(const MarkovChain& m, const std::string& a) {
    const SccDecomposition dec = scc_decompose(m);
    const StateSet reach = reachable_states(m);
    const auto dist = bfs_distance(m.support(), m.initial());
    std::vector<BsccGapInfo> out;
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
        if (!dec.bottom[c]) continue;
        BsccGapInfo info;
        info.component = c;
        info.states = dec.components[c];
        info.gap = gap_of_bscc(m, info.states, a);
        info.reachable = reach[info.states.front()];
        info.accepting = info.reachable && info.gap != kInfinite;
        for (StateId s : info.states)
            if (m.has_label(s, a)) info.dist_from_init = std::min(info.dist_from_init, dist[s]);
        out.push_back(std::move(info));
    }
    return out;
}

// ── Skeleton graph ──

SkeletonGraph skeleton_graph(const MarkovChain& m, const std::string& a, const BsccGapInfo& bscc,
                             std::vector<StateId>* vertex_states) {
    SkeletonBase base = skeleton_base(m, a);
    mark_targets(base.graph, base.states, m, a, bscc);
    if (vertex_states) *vertex_states = base.states;
    return std::move(base.graph);
}

std::uint64_t c_min(const SkeletonGraph& g) {
    const std::size_t k = g.size();
    if (k == 0) return kInfinite;
    // Dense minimax Dijkstra: F(v) = min over paths of the largest edge cost.
    std::vector<std::uint64_t> f(k, kInfinite);
    std::vector<bool> done(k, false);
    f[0] = 0;
    for (std::size_t round = 0; round < k; ++round) {
        std::size_t u = k;
        for (std::size_t v = 0; v < k; ++v)
            if (!done[v] && f[v] != kInfinite && (u == k || f[v] < f[u])) u = v;
        if (u == k) break;
        if (g.target[u]) return f[u];
        done[u] = true;
        for (std::size_t v = 0; v < k; ++v) {
            if (done[v] || g.cost[u][v] == kInfinite) continue;
            f[v] = std::min(f[v], std::max(f[u], g.cost[u][v]));
        }
    }
    return kInfinite;
}

std::uint64_t c_min_brute_force(const SkeletonGraph& g) {
    const std::size_t k = g.size();
    if (k == 0) return kInfinite;
    std::uint64_t best = kInfinite;
    std::vector<bool> on_path(k, false);
    std::function<void(std::size_t, std::uint64_t)> dfs = [&](std::size_t u, std::uint64_t worst) {
        if (g.target[u]) best = std::min(best, worst);
        on_path[u] = true;
        for (std::size_t v = 0; v < k; ++v)
            if (!on_path[v] && g.cost[u][v] != kInfinite) dfs(v, std::max(worst, g.cost[u][v]));
        on_path[u] = false;
    };
    dfs(0, 0);
    return best;
}

// ── Single conjunct ──

MinValue min_val_pos_buchi(const MarkovChain& m, const std::string& a) {
    const auto gaps = bscc_gaps(m, a);
    std::optional<SkeletonBase> base;
    MinValue best;
    for (const auto& b : gaps) {
        if (!b.accepting) continue;
        if (!base) base = skeleton_base(m, a);
        SkeletonGraph g = base->graph;
        mark_targets(g, base->states, m, a, b);
        const std::uint64_t c = c_min(g);
        if (c == kInfinite) continue;
        // Otherwise branch: the direct skeleton edge already gives c <= d_{a,B}(s0) <= gap.
        const std::uint64_t n0 = b.gap < b.dist_from_init ? std::max(b.gap, c) : b.gap;
        if (!best || n0 < *best) best = n0;
    }
    return best;
}

MinValue min_val_as1_buchi(const MarkovChain& m, const std::string& a) {
    const StateSet reach = reachable_states(m);
    std::vector<bool> keep(m.size(), false);
    for (StateId s = 0; s < m.size(); ++s) keep[s] = reach[s] && !m.has_label(s, a);
    const std::uint64_t l = longest_path_nodes(m.support(), keep);
    if (l == kInfinite) return std::nullopt;
    return l;
}

// ── Conjunctions ──

std::vector<std::pair<std::string, std::string>> buchi_conjuncts(const FormulaPtr& phi) {
    std::vector<std::pair<std::string, std::string>> out;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& f) {
        if (f->op == Op::And) {
            walk(f->lhs);
            walk(f->rhs);
            return;
        }
        if (f->op != Op::Always || f->lhs->op != Op::BoundedEventually || !f->lhs->bound.is_param() ||
            f->lhs->lhs->op != Op::Atom)
            throw FragmentError("expected a conjunction of G F[<=x] a, got " + to_string(f));
        out.emplace_back(f->lhs->bound.var, f->lhs->lhs->name);
    };
    walk(phi);
    return out;
}

bool emptiness_pos_genbuchi(const MarkovChain& m, const FormulaPtr& phi) {
    const auto conj = buchi_conjuncts(phi);
    const SccDecomposition dec = scc_decompose(m);
    const StateSet reach = reachable_states(m);
    for (std::size_t c = 0; c < dec.components.size(); ++c) {
        if (!dec.bottom[c] || !reach[dec.components[c].front()]) continue;
        bool all = true;
        for (const auto& [var, a] : conj)
            if (gap_of_bscc(m, dec.components[c], a) == kInfinite) {
                all = false;
                break;
            }
        if (all) return false;
    }
    return true;
}

std::optional<MinimalSet> min_set_pos_genbuchi(const MarkovChain& m, const FormulaPtr& phi,
                                               BisectionStats* stats, std::size_t max_nodes) {
    if (emptiness_pos_genbuchi(m, phi)) return std::nullopt;
    DiamondChecker checker(m, phi, max_nodes);
    const auto& vars = checker.variables();
    const std::size_t d = vars.size();
    std::uint64_t n = static_cast<std::uint64_t>(m.size()) * std::max<std::size_t>(d, 1);
    // Minimal points lie in {0..m*d}^d; the corner check guards that bound.
    if (!checker.check_pos(Point(d, n)))
        throw std::logic_error("generalized Buchi: top corner of {0..m*d}^d fails although V>0 is nonempty");
    auto oracle = [&](const Point& p) { return checker.check_pos(p); };
    return bisection_min_set(oracle, Hypercube::uniform(d, n), vars, stats);
}

std::optional<MinimalSet> min_set_as1_genbuchi(const MarkovChain& m, const FormulaPtr& phi) {
    const auto conj = buchi_conjuncts(phi);
    std::map<std::string, std::uint64_t> need;
    for (const auto& [var, a] : conj) {
        const MinValue v = min_val_as1_buchi(m, a);
        if (!v) return std::nullopt;
        auto& slot = need[var];
        slot = std::max(slot, *v);
    }
    std::vector<std::string> vars;
    Point p;
    for (const auto& [var, v] : need) {
        vars.push_back(var);
        p.push_back(v);
    }
    MinimalSet out(vars);
    out.insert_minimal(p);
    return out;
}

} // namespace pltl
