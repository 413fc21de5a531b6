#ifndef TERMGRAPH_GRAPH_HPP
#define TERMGRAPH_GRAPH_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace termgraph {

using NodeId = std::uint32_t;

struct Edge {
    NodeId src;
    NodeId dst;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class Direction { In, Out };

// Simple directed graph: no self-loops, no parallel edges. Immutable after
// construction, so concurrent readers are safe.
//
// Adjacency lists are sorted. The skeleton list of a node is the sorted
// union of its in- and out-neighbours (the undirected view).
class DirectedGraph {
public:
    DirectedGraph() = default;

    // Builds from raw node-index pairs over `node_count` nodes. Self-loops
    // are dropped and duplicates collapsed. Throws InputError on an index
    // outside [0, node_count).
    DirectedGraph(std::size_t node_count, std::span<const Edge> edges);

    std::size_t node_count() const { return out_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    // Edges sorted by (src, dst).
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const NodeId> out_neighbors(NodeId v) const { return out_[v]; }
    std::span<const NodeId> in_neighbors(NodeId v) const { return in_[v]; }
    std::span<const NodeId> skeleton_neighbors(NodeId v) const { return skel_[v]; }

    bool has_edge(NodeId u, NodeId v) const;
    bool adjacent(NodeId u, NodeId v) const;  // either direction

    // Handle for each node id; empty when the graph was built from indices.
    const std::vector<std::string>& handles() const { return handles_; }
    void set_handles(std::vector<std::string> handles);

    DirectedGraph reversed() const;
    // Node i of the result is node perm^-1(i) of this graph, i.e. edge
    // (u,v) becomes (perm[u], perm[v]).
    DirectedGraph relabeled(std::span<const NodeId> perm) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::vector<std::vector<NodeId>> skel_;
    std::vector<std::string> handles_;
};

// Interns handle strings to dense ids in first-appearance order.
class HandleInterner {
public:
    NodeId intern(std::string_view handle);
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    std::vector<std::string> release() { return std::move(names_); }

private:
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<std::string> names_;
};

using HandlePair = std::pair<std::string, std::string>;

// Self-pairs are dropped before interning, so a handle only seen in
// self-pairs does not become a node.
DirectedGraph build_graph(std::span<const HandlePair> pairs);

// The graph's edges as handle pairs in (src,dst) id order.
std::vector<HandlePair> edge_handle_pairs(const DirectedGraph& g);

std::vector<std::size_t> degree_sequence(const DirectedGraph& g, Direction direction);

// Adjacency bit layout for an ordered node list v_0..v_{k-1}: the k(k-1)
// ordered pairs (i,j), i != j, are taken in row-major order
// (0,1),(0,2),..,(1,0),(1,2),..; the first pair is the most significant
// bit. For k=3: (a,b),(a,c),(b,a),(b,c),(c,a),(c,b) -> bits 5..0.
constexpr int code_bits(int k) { return k * (k - 1); }
constexpr int pair_bit(int k, int i, int j) {
    return code_bits(k) - 1 - (i * (k - 1) + (j < i ? j : j - 1));
}

// Throws std::invalid_argument for k outside [2,4] or repeated nodes.
std::uint32_t induced_subgraph_code(const DirectedGraph& g, std::span<const NodeId> nodes);

// CSV `src_handle,dst_handle` with header, LF line endings.
std::string edge_list_csv(const DirectedGraph& g);
DirectedGraph parse_edge_list_csv(std::string_view text, const std::string& source);

}  // namespace termgraph

#endif
