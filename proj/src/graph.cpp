#include "pltl/graph.hpp"

#include <algorithm>
#include <deque>

namespace pltl {

Digraph Digraph::from_lists(const std::vector<std::vector<NodeId>>& adj) {
    Digraph g;
    g.offset.reserve(adj.size() + 1);
    for (const auto& succ : adj) {
        g.target.insert(g.target.end(), succ.begin(), succ.end());
        g.offset.push_back(g.target.size());
    }
    return g;
}

Digraph reverse(const Digraph& g) {
    const std::size_t n = g.size();
    Digraph r;
    r.offset.assign(n + 1, 0);
    for (auto t : g.target) ++r.offset[t + 1];
    for (std::size_t v = 0; v < n; ++v) r.offset[v + 1] += r.offset[v];
    r.target.resize(g.target.size());
    auto fill = r.offset;
    for (std::size_t v = 0; v < n; ++v)
        for (auto t : g.successors(v)) r.target[fill[t]++] = static_cast<NodeId>(v);
    return r;
}

SccResult tarjan_scc(const Digraph& g) {
    const std::size_t n = g.size();
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> index(n, kNone), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> call;
    SccResult res;
    res.comp.assign(n, kNone);
    NodeId counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kNone) continue;
        call.push_back({static_cast<NodeId>(root), g.offset[root]});
        index[root] = low[root] = counter++;
        stack.push_back(static_cast<NodeId>(root));
        on_stack[root] = true;
        while (!call.empty()) {
            auto& fr = call.back();
            const NodeId v = fr.v;
            if (fr.next < g.offset[v + 1]) {
                const NodeId w = g.target[fr.next++];
                if (index[w] == kNone) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, g.offset[w]});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    res.comp[w] = static_cast<NodeId>(res.count);
                } while (w != v);
                ++res.count;
            }
            call.pop_back();
            if (!call.empty()) {
                const NodeId u = call.back().v;
                low[u] = std::min(low[u], low[v]);
            }
        }
    }
    return res;
}

std::vector<bool> reachable(const Digraph& g, const std::vector<NodeId>& sources) {
    std::vector<bool> seen(g.size(), false);
    std::vector<NodeId> todo;
    for (auto s : sources)
        if (!seen[s]) {
            seen[s] = true;
            todo.push_back(s);
        }
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        for (auto w : g.successors(v))
            if (!seen[w]) {
                seen[w] = true;
                todo.push_back(w);
            }
    }
    return seen;
}

std::vector<std::size_t> bfs_distance(const Digraph& g, NodeId source) {
    std::vector<std::size_t> dist(g.size(), kUnreachable);
    std::deque<NodeId> q{source};
    dist[source] = 0;
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        for (auto w : g.successors(v))
            if (dist[w] == kUnreachable) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

} // namespace pltl
