#ifndef PLTL_GRAPH_HPP
#define PLTL_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace pltl {

using NodeId = std::uint32_t;
inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Compressed adjacency lists.
struct Digraph {
    std::vector<std::size_t> offset{0};  // size() + 1 entries
    std::vector<NodeId> target;

    std::size_t size() const { return offset.size() - 1; }
    std::size_t edge_count() const { return target.size(); }
    std::span<const NodeId> successors(std::size_t v) const {
        return {target.data() + offset[v], target.data() + offset[v + 1]};
    }

    static Digraph from_lists(const std::vector<std::vector<NodeId>>& adj);
};

Digraph reverse(const Digraph& g);

struct SccResult {
    // Component index per node. Tarjan numbering: every edge between
    // different components goes from a higher to a lower index, so
    // component 0 is a sink.
    std::vector<NodeId> comp;
    std::size_t count = 0;
};

// Iterative Tarjan; linear in nodes + edges.
SccResult tarjan_scc(const Digraph& g);

// Nodes reachable from any source (sources included).
std::vector<bool> reachable(const Digraph& g, const std::vector<NodeId>& sources);

// Unit-weight shortest distances from `source`; kUnreachable where unreachable.
std::vector<std::size_t> bfs_distance(const Digraph& g, NodeId source);

} // namespace pltl

#endif
