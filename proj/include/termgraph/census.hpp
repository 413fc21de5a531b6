#ifndef TERMGRAPH_CENSUS_HPP
#define TERMGRAPH_CENSUS_HPP

#include "termgraph/graph.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace termgraph {

inline constexpr int kClassCount3 = 13;
inline constexpr int kClassCount4 = 199;
inline constexpr int kClassCount = kClassCount3 + kClassCount4;

// Isomorphism classes of weakly connected digraphs on 3 and 4 nodes.
//
// Every labelled adjacency code (see pair_bit for the layout) is mapped to
// the index of its class, or -1 when the undirected skeleton is
// disconnected. The canonical code of a digraph is the minimum code over
// all k! relabellings; classes are numbered by ascending canonical code,
// size 3 (ids 0..12) before size 4 (ids 13..211).
class ClassTable {
public:
    // Builds by exhaustive canonicalisation. Throws InvariantError when the
    // class counts are not 13 and 199 or a code disagrees with its
    // canonical form.
    static ClassTable build();

    int class_of(int k, std::uint32_t code) const { return k == 3 ? class3_[code] : class4_[code]; }
    int class_size(int class_id) const { return class_id < kClassCount3 ? 3 : 4; }
    std::uint32_t canonical_code(int class_id) const { return canon_[class_id]; }
    // Smallest code over all relabellings of `code`.
    static std::uint32_t canonicalize(int k, std::uint32_t code);
    static bool skeleton_connected(int k, std::uint32_t code);

    // CSV `class_id,k,canonical_code_hex,edge_list`; edge_list is
    // `i>j` pairs joined by ';' over nodes 0..k-1 of the canonical form.
    std::string export_csv() const;
    // SHA-256 of export_csv().
    std::string content_hash() const;

    // Adjacency matrix of a class's canonical form, one row per line.
    std::string render(int class_id) const;

    // Writes the export plus its hash; load verifies the hash and rebuilds
    // if it does not match the freshly built table.
    void save_cache(const std::string& path) const;
    static ClassTable load_cache(const std::string& path);

private:
    std::array<std::int16_t, 64> class3_{};
    std::array<std::int16_t, 4096> class4_{};
    std::array<std::uint32_t, kClassCount> canon_{};
};

// Process-wide table, built on first use.
const ClassTable& class_table();

enum class NormalizationPool { Joint, PerSize };

struct CensusVector {
    std::array<std::uint64_t, kClassCount> counts{};
    std::array<double, kClassCount> normalized{};
    std::uint64_t total = 0;

    // Recomputes total and normalized from counts. Joint divides every
    // entry by the sum of all 212 counts; PerSize divides the size-3 and
    // size-4 blocks by their own sums.
    void normalize(NormalizationPool pool = NormalizationPool::Joint);

    friend bool operator==(const CensusVector&, const CensusVector&) = default;
};

using SubsetVisitor = std::function<void(std::span<const NodeId>)>;

// ESU over the undirected skeleton: every node set of size k whose skeleton
// is connected is visited exactly once. Throws std::invalid_argument unless
// k is 3 or 4.
void enumerate_connected_subsets(const DirectedGraph& g, int k, const SubsetVisitor& visit);
std::vector<std::vector<NodeId>> connected_subsets(const DirectedGraph& g, int k);

// Exact size-3 and size-4 census. Serial reference implementation.
CensusVector census(const DirectedGraph& g);

// Same result as census(), ESU roots spread across `workers` OpenMP threads.
CensusVector census_parallel(const DirectedGraph& g, int workers);

}  // namespace termgraph

#endif
