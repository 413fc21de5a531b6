#include "termgraph/global_metrics.hpp"

#include <algorithm>

namespace termgraph {

Metric density(const DirectedGraph& g) {
    const double n = static_cast<double>(g.node_count());
    if (g.node_count() < 2) return {};
    return {static_cast<double>(g.edge_count()) / (n * (n - 1.0)), true};
}

Metric reciprocity(const DirectedGraph& g) {
    if (g.edge_count() == 0) return {};
    std::size_t mutual = 0;
    for (const Edge& e : g.edges())
        if (g.has_edge(e.dst, e.src)) ++mutual;
    return {static_cast<double>(mutual) / static_cast<double>(g.edge_count()), true};
}

Metric transitivity(const DirectedGraph& g) {
    std::size_t paths = 0;
    std::size_t closed = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        auto in = g.in_neighbors(v);
        auto out = g.out_neighbors(v);
        for (NodeId u : in) {
            auto uo = g.out_neighbors(u);
            for (NodeId w : out) {
                if (w == u) continue;
                ++paths;
                if (std::binary_search(uo.begin(), uo.end(), w)) ++closed;
            }
        }
    }
    if (paths == 0) return {};
    return {static_cast<double>(closed) / static_cast<double>(paths), true};
}

DegreeStats degree_stats(const DirectedGraph& g, Direction direction) {
    if (g.node_count() == 0) return {};
    auto deg = degree_sequence(g, direction);
    auto [lo, hi] = std::minmax_element(deg.begin(), deg.end());
    DegreeStats s;
    s.mean = static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
    s.max = static_cast<double>(*hi);
    s.min = static_cast<double>(*lo);
    s.defined = true;
    return s;
}

GlobalFeatures global_feature_vector(const DirectedGraph& g) {
    GlobalFeatures f;
    const Metric scalars[] = {density(g), reciprocity(g), transitivity(g)};
    for (int i = 0; i < 3; ++i) {
        f.values[i] = scalars[i].value;
        f.defined[i] = scalars[i].defined;
    }
    const DegreeStats dirs[] = {degree_stats(g, Direction::In), degree_stats(g, Direction::Out)};
    for (int d = 0; d < 2; ++d) {
        const std::size_t base = 3 + 3 * d;
        f.values[base] = dirs[d].mean;
        f.values[base + 1] = dirs[d].max;
        f.values[base + 2] = dirs[d].min;
        f.defined[base] = f.defined[base + 1] = f.defined[base + 2] = dirs[d].defined;
    }
    return f;
}

}  // namespace termgraph
