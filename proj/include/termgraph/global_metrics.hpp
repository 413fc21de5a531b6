#ifndef TERMGRAPH_GLOBAL_METRICS_HPP
#define TERMGRAPH_GLOBAL_METRICS_HPP

#include "termgraph/graph.hpp"

#include <array>
#include <string_view>

namespace termgraph {

// A metric value; `defined` is false (and value 0.0) when the denominator was zero.
struct Metric {
    double value = 0.0;
    bool defined = false;
};

Metric density(const DirectedGraph& g);       // |E| / (|V|(|V|-1))
Metric reciprocity(const DirectedGraph& g);   // fraction of edges whose reverse exists
// Ordered 2-paths u->v->w (u != w) closed by u->w, over all such 2-paths.
Metric transitivity(const DirectedGraph& g);

struct DegreeStats {
    double mean = 0.0;
    double max = 0.0;
    double min = 0.0;
    bool defined = false;
};
DegreeStats degree_stats(const DirectedGraph& g, Direction direction);

inline constexpr std::size_t kGlobalFeatureCount = 9;
inline constexpr std::array<std::string_view, kGlobalFeatureCount> kGlobalFeatureNames = {
    "density", "reciprocity", "transitivity", "in_mean", "in_max", "in_min", "out_mean", "out_max", "out_min"};

struct GlobalFeatures {
    std::array<double, kGlobalFeatureCount> values{};
    std::array<bool, kGlobalFeatureCount> defined{};

    double density() const { return values[0]; }
    double reciprocity() const { return values[1]; }
    double transitivity() const { return values[2]; }
};

GlobalFeatures global_feature_vector(const DirectedGraph& g);

}  // namespace termgraph

#endif
