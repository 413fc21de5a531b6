#include "termgraph/synth.hpp"

#include "termgraph/csv.hpp"
#include "termgraph/ingest.hpp"
#include "termgraph/util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace termgraph {

DirectedGraph gen_random_digraph(std::size_t n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_random_digraph: p must be in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v && unif(rng) < p) edges.push_back({u, v});
    return DirectedGraph(n, edges);
}

DirectedGraph gen_random_digraph_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
    const std::size_t max_edges = n < 2 ? 0 : n * (n - 1);
    if (m > max_edges) throw std::invalid_argument("gen_random_digraph_edges: too many edges");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n ? n - 1 : 0);
    std::set<Edge> chosen;
    std::vector<Edge> edges;
    edges.reserve(m);
    while (edges.size() < m) {
        Edge e{static_cast<NodeId>(pick(rng)), static_cast<NodeId>(pick(rng))};
        if (e.src != e.dst && chosen.insert(e).second) edges.push_back(e);
    }
    return DirectedGraph(n, edges);
}

namespace {

enum class Style { Baseline, Hub, Community };

struct Interaction {
    std::size_t author;
    std::size_t target;
};

std::vector<Interaction> generate_interactions(Style style, std::size_t count, std::size_t users,
                                               std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> any(0, users - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto other_than = [&](std::size_t a) {
        std::size_t t = any(rng);
        while (t == a) t = any(rng);
        return t;
    };
    std::vector<Interaction> out;
    out.reserve(count);
    constexpr std::size_t kHubs = 2;
    constexpr std::size_t kGroup = 5;
    while (out.size() < count) {
        switch (style) {
            case Style::Baseline: {
                std::size_t a = any(rng);
                out.push_back({a, other_than(a)});
                break;
            }
            case Style::Hub: {
                std::uniform_int_distribution<std::size_t> spoke(kHubs, users - 1);
                std::size_t a = spoke(rng);
                std::size_t t = unif(rng) < 0.85 ? std::uniform_int_distribution<std::size_t>(0, kHubs - 1)(rng)
                                                 : other_than(a);
                out.push_back({a, t});
                break;
            }
            case Style::Community: {
                std::size_t a = any(rng);
                std::size_t base = a / kGroup * kGroup;
                std::size_t size = std::min(kGroup, users - base);
                if (size < 2) {
                    out.push_back({a, other_than(a)});
                    break;
                }
                std::uniform_int_distribution<std::size_t> member(base, base + size - 1);
                std::size_t t = member(rng);
                while (t == a) t = member(rng);
                out.push_back({a, t});
                if (out.size() < count && unif(rng) < 0.5) out.push_back({t, a});
                break;
            }
        }
    }
    return out;
}

std::string timestamp_for(std::uint64_t offset_seconds) {
    using namespace std::chrono;
    // 2020-11-09T00:00:00Z plus an offset inside a 30-day window.
    const sys_seconds start = sys_days{year{2020} / November / 9};
    const sys_seconds t = start + seconds{static_cast<long long>(offset_seconds % (30ULL * 86400ULL))};
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long long>(hms.seconds().count()));
    return buf;
}

std::string term_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, i % 2 == 0 ? "#synterm%03zu" : "synterm%03zu", i);
    return buf;
}

}  // namespace

SynthCorpus gen_labeled_corpus(const SynthSpec& spec) {
    if (!(spec.signal >= 0.0 && spec.signal <= 1.0)) throw std::invalid_argument("signal must be in [0,1]");
    if (!(spec.controversial_fraction >= 0.0 && spec.controversial_fraction <= 1.0))
        throw std::invalid_argument("controversial_fraction must be in [0,1]");
    if (spec.raters < 1) throw std::invalid_argument("raters must be >= 1");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const auto n_pos = static_cast<std::size_t>(std::llround(spec.controversial_fraction * spec.n_terms));
    std::vector<std::size_t> order(spec.n_terms);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Label> labels(spec.n_terms, Label::NonControversial);
    for (std::size_t i = 0; i < n_pos; ++i) labels[order[i]] = Label::Controversial;

    SynthCorpus corpus;
    corpus.terms_txt = "// synthetic terms\n";
    corpus.ground_truth_csv = "term,label\n";
    std::vector<RatingRow> ratings;
    const std::size_t users = std::max<std::size_t>(10, spec.records_per_term / 4);
    std::uint64_t post = 0;

    for (std::size_t i = 0; i < spec.n_terms; ++i) {
        const std::string term = term_name(i);
        const Label label = labels[i];
        corpus.terms_txt += term + "\n";
        corpus.ground_truth_csv += csv::join({term, std::string(label_name(label))}) + "\n";
        corpus.truth.push_back({term, label});

        const Style planted = label == Label::Controversial ? Style::Hub : Style::Community;
        const int masked = static_cast<int>(std::uniform_int_distribution<int>(0, 2)(rng));
        for (int kind = 0; kind < 3; ++kind) {
            // Draw before branching so the stream does not depend on signal.
            const double draw = unif(rng);
            const Style style = (kind == masked || draw >= spec.signal) ? Style::Baseline : planted;
            const std::size_t count = spec.records_per_term / 3 + (static_cast<std::size_t>(kind) < spec.records_per_term % 3);
            for (const auto& [a, t] : generate_interactions(style, count, users, rng)) {
                InteractionRecord r;
                r.post_id = "s" + std::to_string(post);
                r.author = "t" + std::to_string(i) + "_u" + std::to_string(a);
                const std::string target = "t" + std::to_string(i) + "_u" + std::to_string(t);
                r.text = "thoughts on " + term + " today";
                switch (static_cast<InteractionKind>(kind)) {
                    case InteractionKind::Mention:
                        r.mentioned.push_back(target);
                        r.text += " @" + target;
                        break;
                    case InteractionKind::Reply: r.reply_to_author = target; break;
                    case InteractionKind::QuoteRetweet: r.quoted_author = target; break;
                }
                r.timestamp = timestamp_for(mix_seed(spec.seed, post));
                corpus.records_jsonl += record_to_json(r) + "\n";
                ++post;
            }
        }

        std::vector<int> scores(spec.raters);
        if (label == Label::Controversial) {
            std::uniform_int_distribution<int> s(1, 4);
            for (int& v : scores) v = s(rng);
        } else {
            std::uniform_int_distribution<int> s(0, 1);
            for (int& v : scores) v = s(rng);
            // Keep the mean at most (raters-1)/raters, below the threshold for raters <= 20.
            if (std::accumulate(scores.begin(), scores.end(), 0) == spec.raters) scores[0] = 0;
        }
        for (int p = 0; p < spec.raters; ++p) ratings.push_back({term, "p" + std::to_string(p + 1), scores[p]});
    }
    corpus.ratings_csv = ratings_csv(ratings);
    return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    write_file((base / "records.jsonl").string(), corpus.records_jsonl);
    write_file((base / "terms.txt").string(), corpus.terms_txt);
    write_file((base / "ratings.csv").string(), corpus.ratings_csv);
    write_file((base / "ground_truth.csv").string(), corpus.ground_truth_csv);
}

}  // namespace termgraph
