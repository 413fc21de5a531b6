#include "termgraph/census.hpp"

#include "termgraph/csv.hpp"
#include "termgraph/error.hpp"
#include "termgraph/util.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termgraph {

namespace {

std::uint32_t permute_code(int k, std::uint32_t code, const std::array<int, 4>& perm) {
    std::uint32_t out = 0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j && (code >> pair_bit(k, i, j) & 1u)) out |= 1u << pair_bit(k, perm[i], perm[j]);
    return out;
}

std::string hex_code(std::uint32_t code, int k) {
    static constexpr char hex[] = "0123456789abcdef";
    const int digits = (code_bits(k) + 3) / 4;
    std::string s(digits, '0');
    for (int d = digits - 1; d >= 0; --d, code >>= 4) s[d] = hex[code & 0xF];
    return "0x" + s;
}

}  // namespace

std::uint32_t ClassTable::canonicalize(int k, std::uint32_t code) {
    std::array<int, 4> perm{0, 1, 2, 3};
    std::uint32_t best = code;
    do {
        best = std::min(best, permute_code(k, code, perm));
    } while (std::next_permutation(perm.begin(), perm.begin() + k));
    return best;
}

bool ClassTable::skeleton_connected(int k, std::uint32_t code) {
    unsigned seen = 1, frontier = 1;
    while (frontier) {
        unsigned next = 0;
        for (int i = 0; i < k; ++i) {
            if (!(frontier >> i & 1u)) continue;
            for (int j = 0; j < k; ++j)
                if (i != j && ((code >> pair_bit(k, i, j) & 1u) || (code >> pair_bit(k, j, i) & 1u))) next |= 1u << j;
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << k) - 1;
}

ClassTable ClassTable::build() {
    ClassTable t;
    int next_id = 0;
    for (int k : {3, 4}) {
        const std::uint32_t n_codes = 1u << code_bits(k);
        std::vector<std::uint32_t> canon(n_codes, 0);
        std::vector<std::uint32_t> reps;
        for (std::uint32_t c = 0; c < n_codes; ++c) {
            if (!skeleton_connected(k, c)) continue;
            canon[c] = canonicalize(k, c);
            if (canon[c] == c) reps.push_back(c);  // codes ascend, so reps are sorted
        }
        const int expected = k == 3 ? kClassCount3 : kClassCount4;
        if (static_cast<int>(reps.size()) != expected)
            throw InvariantError("class table: found " + std::to_string(reps.size()) + " size-" + std::to_string(k) +
                                 " classes, expected " + std::to_string(expected));
        std::map<std::uint32_t, int> id_of;
        for (std::uint32_t r : reps) {
            id_of[r] = next_id;
            t.canon_[next_id++] = r;
        }
        for (std::uint32_t c = 0; c < n_codes; ++c) {
            int id = skeleton_connected(k, c) ? id_of.at(canon[c]) : -1;
            (k == 3 ? t.class3_[c] : t.class4_[c]) = static_cast<std::int16_t>(id);
        }
        // Soundness: a code and its canonical form must share a class, and
        // every relabelling of a connected code stays connected and in class.
        for (std::uint32_t c = 0; c < n_codes; ++c) {
            int id = t.class_of(k, c);
            if (id < 0) continue;
            if (t.class_of(k, t.canon_[id]) != id || canon[c] != t.canon_[id])
                throw InvariantError("class table: code " + hex_code(c, k) + " disagrees with its canonical form");
        }
    }
    return t;
}

std::string ClassTable::export_csv() const {
    std::string out = "class_id,k,canonical_code_hex,edge_list\n";
    for (int id = 0; id < kClassCount; ++id) {
        const int k = class_size(id);
        const std::uint32_t code = canon_[id];
        std::string edges;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (i != j && (code >> pair_bit(k, i, j) & 1u)) {
                    if (!edges.empty()) edges.push_back(';');
                    edges += std::to_string(i) + ">" + std::to_string(j);
                }
        out += csv::join({std::to_string(id), std::to_string(k), hex_code(code, k), edges}) + "\n";
    }
    return out;
}

std::string ClassTable::content_hash() const { return sha256_hex(export_csv()); }

std::string ClassTable::render(int class_id) const {
    if (class_id < 0 || class_id >= kClassCount) throw InputError("class id out of range: " + std::to_string(class_id));
    const int k = class_size(class_id);
    const std::uint32_t code = canon_[class_id];
    std::ostringstream os;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (j) os << ' ';
            os << (i == j ? '.' : (code >> pair_bit(k, i, j) & 1u) ? '1' : '0');
        }
        os << '\n';
    }
    return os.str();
}

void ClassTable::save_cache(const std::string& path) const {
    std::string body = export_csv();
    write_file(path, "# sha256 " + sha256_hex(body) + "\n" + body);
}

ClassTable ClassTable::load_cache(const std::string& path) {
    ClassTable fresh = build();
    std::string text;
    try {
        text = read_file(path);
    } catch (const InputError&) {
        fresh.save_cache(path);
        return fresh;
    }
    const std::string expected = "# sha256 " + fresh.content_hash() + "\n" + fresh.export_csv();
    if (text != expected) fresh.save_cache(path);  // stale or corrupt cache
    return fresh;
}

const ClassTable& class_table() {
    static const ClassTable table = ClassTable::build();
    return table;
}

void CensusVector::normalize(NormalizationPool pool) {
    total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    auto fill = [&](int lo, int hi) {
        std::uint64_t sum = std::accumulate(counts.begin() + lo, counts.begin() + hi, std::uint64_t{0});
        for (int i = lo; i < hi; ++i)
            normalized[i] = sum ? static_cast<double>(counts[i]) / static_cast<double>(sum) : 0.0;
    };
    if (pool == NormalizationPool::Joint) {
        fill(0, kClassCount);
    } else {
        fill(0, kClassCount3);
        fill(kClassCount3, kClassCount);
    }
}

namespace {

// ESU search rooted at one node. Visits connected sets of size kmin..kmax
// containing `root` as their smallest node, each exactly once.
template <class Visit>
class EsuWalker {
public:
    EsuWalker(const DirectedGraph& g, int kmin, int kmax, Visit& visit)
        : g_(g), kmin_(kmin), kmax_(kmax), visit_(visit) {}

    void run(NodeId root) {
        root_ = root;
        sub_[0] = root;
        auto& ext = ext_[0];
        ext.clear();
        for (NodeId u : g_.skeleton_neighbors(root))
            if (u > root) ext.push_back(u);
        extend(1);
    }

private:
    // Is u in the closed neighbourhood of sub_[0..size)?
    bool in_closed_neighborhood(NodeId u, int size) const {
        for (int i = 0; i < size; ++i)
            if (sub_[i] == u || g_.adjacent(sub_[i], u)) return true;
        return false;
    }

    void extend(int size) {
        auto& ext = ext_[size - 1];
        while (!ext.empty()) {
            const NodeId w = ext.back();
            ext.pop_back();
            sub_[size] = w;
            const int grown = size + 1;
            if (grown >= kmin_) visit_(std::span<const NodeId>(sub_.data(), grown));
            if (grown == kmax_) continue;
            auto& next = ext_[grown - 1];
            next.assign(ext.begin(), ext.end());
            for (NodeId u : g_.skeleton_neighbors(w))
                if (u > root_ && !in_closed_neighborhood(u, size)) next.push_back(u);
            extend(grown);
        }
    }

    const DirectedGraph& g_;
    int kmin_;
    int kmax_;
    Visit& visit_;
    NodeId root_ = 0;
    std::array<NodeId, 4> sub_{};
    std::array<std::vector<NodeId>, 4> ext_;
};

struct CountVisitor {
    const DirectedGraph& g;
    const ClassTable& table;
    std::array<std::uint64_t, kClassCount>& counts;

    void operator()(std::span<const NodeId> nodes) const {
        const int k = static_cast<int>(nodes.size());
        std::uint32_t code = 0;
        for (int i = 0; i < k; ++i) {
            auto out = g.out_neighbors(nodes[i]);
            for (int j = 0; j < k; ++j)
                if (i != j && std::binary_search(out.begin(), out.end(), nodes[j])) code |= 1u << pair_bit(k, i, j);
        }
        ++counts[table.class_of(k, code)];
    }
};

}  // namespace

void enumerate_connected_subsets(const DirectedGraph& g, int k, const SubsetVisitor& visit) {
    if (k != 3 && k != 4) throw std::invalid_argument("enumerate_connected_subsets: k must be 3 or 4");
    auto fn = [&](std::span<const NodeId> nodes) { visit(nodes); };
    EsuWalker walker(g, k, k, fn);
    for (NodeId v = 0; v < g.node_count(); ++v) walker.run(v);
}

std::vector<std::vector<NodeId>> connected_subsets(const DirectedGraph& g, int k) {
    std::vector<std::vector<NodeId>> out;
    enumerate_connected_subsets(g, k, [&](std::span<const NodeId> s) { out.emplace_back(s.begin(), s.end()); });
    return out;
}

CensusVector census(const DirectedGraph& g) {
    CensusVector cv;
    CountVisitor counter{g, class_table(), cv.counts};
    EsuWalker walker(g, 3, 4, counter);
    for (NodeId v = 0; v < g.node_count(); ++v) walker.run(v);
    cv.normalize();
    return cv;
}

CensusVector census_parallel(const DirectedGraph& g, int workers) {
    if (workers < 1) throw std::invalid_argument("census_parallel: workers must be >= 1");
    CensusVector cv;
    const ClassTable& table = class_table();
    const long n = static_cast<long>(g.node_count());
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
#endif
    {
        std::array<std::uint64_t, kClassCount> local{};
        CountVisitor counter{g, table, local};
        EsuWalker walker(g, 3, 4, counter);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8) nowait
#endif
        for (long v = 0; v < n; ++v) walker.run(static_cast<NodeId>(v));
#ifdef _OPENMP
#pragma omp critical(census_merge)
#endif
        for (int c = 0; c < kClassCount; ++c) cv.counts[c] += local[c];
    }
    cv.normalize();
    return cv;
}

}  // namespace termgraph
