#include "termgraph/graph.hpp"

#include "termgraph/csv.hpp"
#include "termgraph/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace termgraph {

DirectedGraph::DirectedGraph(std::size_t node_count, std::span<const Edge> edges)
    : out_(node_count), in_(node_count), skel_(node_count) {
    edges_.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.src >= node_count || e.dst >= node_count)
            throw InputError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                             ") out of range for " + std::to_string(node_count) + " nodes");
        if (e.src != e.dst) edges_.push_back(e);
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
    for (const Edge& e : edges_) {
        out_[e.src].push_back(e.dst);
        in_[e.dst].push_back(e.src);
    }
    for (std::size_t v = 0; v < node_count; ++v) {
        std::sort(in_[v].begin(), in_[v].end());
        auto& s = skel_[v];
        s.reserve(out_[v].size() + in_[v].size());
        std::set_union(out_[v].begin(), out_[v].end(), in_[v].begin(), in_[v].end(), std::back_inserter(s));
    }
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
    const auto& o = out_[u];
    return std::binary_search(o.begin(), o.end(), v);
}

bool DirectedGraph::adjacent(NodeId u, NodeId v) const {
    const auto& s = skel_[u];
    return std::binary_search(s.begin(), s.end(), v);
}

void DirectedGraph::set_handles(std::vector<std::string> handles) {
    if (!handles.empty() && handles.size() != node_count())
        throw std::invalid_argument("handle table size does not match node count");
    handles_ = std::move(handles);
}

DirectedGraph DirectedGraph::reversed() const {
    std::vector<Edge> rev;
    rev.reserve(edges_.size());
    for (const Edge& e : edges_) rev.push_back({e.dst, e.src});
    DirectedGraph g(node_count(), rev);
    g.handles_ = handles_;
    return g;
}

DirectedGraph DirectedGraph::relabeled(std::span<const NodeId> perm) const {
    if (perm.size() != node_count()) throw std::invalid_argument("permutation size mismatch");
    std::vector<Edge> mapped;
    mapped.reserve(edges_.size());
    for (const Edge& e : edges_) mapped.push_back({perm[e.src], perm[e.dst]});
    DirectedGraph g(node_count(), mapped);
    if (!handles_.empty()) {
        std::vector<std::string> h(node_count());
        for (std::size_t v = 0; v < node_count(); ++v) h[perm[v]] = handles_[v];
        g.handles_ = std::move(h);
    }
    return g;
}

NodeId HandleInterner::intern(std::string_view handle) {
    auto [it, inserted] = ids_.try_emplace(std::string(handle), static_cast<NodeId>(names_.size()));
    if (inserted) names_.emplace_back(handle);
    return it->second;
}

DirectedGraph build_graph(std::span<const HandlePair> pairs) {
    HandleInterner interner;
    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [src, dst] : pairs) {
        if (src == dst) continue;
        NodeId u = interner.intern(src);
        NodeId v = interner.intern(dst);
        edges.push_back({u, v});
    }
    DirectedGraph g(interner.size(), edges);
    g.set_handles(interner.release());
    return g;
}

std::vector<HandlePair> edge_handle_pairs(const DirectedGraph& g) {
    std::vector<HandlePair> out;
    out.reserve(g.edge_count());
    const auto& h = g.handles();
    for (const Edge& e : g.edges()) {
        if (h.empty())
            out.emplace_back(std::to_string(e.src), std::to_string(e.dst));
        else
            out.emplace_back(h[e.src], h[e.dst]);
    }
    return out;
}

std::vector<std::size_t> degree_sequence(const DirectedGraph& g, Direction direction) {
    std::vector<std::size_t> deg(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        deg[v] = direction == Direction::In ? g.in_neighbors(v).size() : g.out_neighbors(v).size();
    return deg;
}

std::uint32_t induced_subgraph_code(const DirectedGraph& g, std::span<const NodeId> nodes) {
    const int k = static_cast<int>(nodes.size());
    if (k < 2 || k > 4) throw std::invalid_argument("induced_subgraph_code: k must be in [2,4]");
    for (int i = 0; i < k; ++i) {
        if (nodes[i] >= g.node_count()) throw std::invalid_argument("induced_subgraph_code: node out of range");
        for (int j = i + 1; j < k; ++j)
            if (nodes[i] == nodes[j]) throw std::invalid_argument("induced_subgraph_code: duplicate node");
    }
    std::uint32_t code = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && g.has_edge(nodes[i], nodes[j])) code |= 1u << pair_bit(k, i, j);
    return code;
}

std::string edge_list_csv(const DirectedGraph& g) {
    std::string out = "src_handle,dst_handle\n";
    for (const auto& [s, d] : edge_handle_pairs(g)) {
        out += csv::join({s, d});
        out.push_back('\n');
    }
    return out;
}

DirectedGraph parse_edge_list_csv(std::string_view text, const std::string& source) {
    auto rows = csv::parse_with_header(text, {"src_handle", "dst_handle"}, source);
    std::vector<HandlePair> pairs;
    pairs.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0].empty() || rows[i][1].empty())
            throw InputError(source + ": empty handle on line " + std::to_string(i + 2));
        pairs.emplace_back(std::move(rows[i][0]), std::move(rows[i][1]));
    }
    return build_graph(pairs);
}

}  // namespace termgraph
