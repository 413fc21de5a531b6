#ifndef TERMGRAPH_SYNTH_HPP
#define TERMGRAPH_SYNTH_HPP

#include "termgraph/graph.hpp"
#include "termgraph/ranking.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace termgraph {

// G(n, p): every ordered pair u != v independently with probability p.
DirectedGraph gen_random_digraph(std::size_t n, double p, std::uint64_t seed);

// G(n, m): exactly m distinct directed edges chosen uniformly.
DirectedGraph gen_random_digraph_edges(std::size_t n, std::size_t m, std::uint64_t seed);

struct SynthSpec {
    std::size_t n_terms = 60;
    std::size_t records_per_term = 300;
    std::uint64_t seed = 1;
    // 0: every network comes from one shared generator. 1: networks of a
    // term follow its class's generator, except one randomly chosen
    // interaction per term which is always drawn from the shared one.
    double signal = 1.0;
    double controversial_fraction = 0.58;
    int raters = 5;
};

struct LabeledTermTruth {
    std::string term;
    Label label;
};

struct SynthCorpus {
    std::string records_jsonl;
    std::string terms_txt;
    std::string ratings_csv;
    std::string ground_truth_csv;  // term,label
    std::vector<LabeledTermTruth> truth;
};

// Deterministic under the spec. Controversial terms are hub-dominated with
// low reciprocity; non-controversial terms are small reciprocal groups
// rich in closed triads. Ratings give controversial terms means >= 1.0 and
// the rest means <= 0.8, so the default 0.95 threshold recovers the truth.
SynthCorpus gen_labeled_corpus(const SynthSpec& spec);

// Writes records.jsonl, terms.txt, ratings.csv and ground_truth.csv.
void write_corpus(const SynthCorpus& corpus, const std::string& dir);

}  // namespace termgraph

#endif
