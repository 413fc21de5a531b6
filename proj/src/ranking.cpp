#include "termgraph/ranking.hpp"

#include "termgraph/csv.hpp"
#include "termgraph/error.hpp"
#include "termgraph/util.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace termgraph {

std::string_view label_name(Label label) {
    return label == Label::Controversial ? "controversial" : "non-controversial";
}

Label label_from_name(std::string_view name) {
    if (name == "controversial") return Label::Controversial;
    if (name == "non-controversial") return Label::NonControversial;
    throw InputError("unknown label '" + std::string(name) + "'");
}

std::vector<RatingAggregate> aggregate_ratings(const std::vector<RatingRow>& rows) {
    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, std::vector<int>> by_term;
    for (const auto& r : rows) {
        if (r.score < 0 || r.score > 4)
            throw InputError("score " + std::to_string(r.score) + " outside [0,4] for term '" + r.term + "'");
        if (!seen.emplace(r.term, r.participant).second)
            throw InputError("duplicate rating for term '" + r.term + "' by participant '" + r.participant + "'");
        by_term[r.term].push_back(r.score);
    }
    std::vector<RatingAggregate> out;
    out.reserve(by_term.size());
    for (auto& [term, scores] : by_term) {
        // Sorted scores make the floating sums independent of input order.
        std::sort(scores.begin(), scores.end());
        RatingAggregate a;
        a.term = term;
        a.n_raters = static_cast<int>(scores.size());
        for (int s : scores) a.total += s;
        a.mean = static_cast<double>(a.total) / a.n_raters;
        double ss = 0.0;
        for (int s : scores) ss += (s - a.mean) * (s - a.mean);
        a.std = std::sqrt(ss / a.n_raters);
        out.push_back(std::move(a));
    }
    std::stable_sort(out.begin(), out.end(), [](const RatingAggregate& a, const RatingAggregate& b) {
        if (a.mean != b.mean) return a.mean > b.mean;
        return a.term < b.term;
    });
    return out;
}

Partition partition_terms(const std::vector<RatingAggregate>& aggs, double threshold) {
    Partition p;
    p.labels.reserve(aggs.size());
    for (const auto& a : aggs) {
        Label l = a.mean > threshold ? Label::Controversial : Label::NonControversial;
        (l == Label::Controversial ? p.controversial : p.non_controversial)++;
        p.labels.push_back({a.term, l, a.mean});
    }
    return p;
}

std::map<std::string, double> label_distribution(const std::vector<RatingRow>& rows) {
    if (rows.empty()) throw InputError("label distribution of an empty rating set");
    std::array<std::size_t, 5> counts{};
    for (const auto& r : rows) {
        if (r.score < 0 || r.score > 4) throw InputError("score outside [0,4]");
        ++counts[r.score];
    }
    std::map<std::string, double> out;
    for (int s = 0; s < 5; ++s)
        out[std::string(kLikertLabels[s])] = 100.0 * static_cast<double>(counts[s]) / static_cast<double>(rows.size());
    return out;
}

std::vector<RatingRow> parse_ratings_csv(std::string_view text, const std::string& source) {
    auto rows = csv::parse_with_header(text, {"term", "participant", "score"}, source);
    std::vector<RatingRow> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
        if (r[0].empty()) throw InputError(source + ": empty term");
        out.push_back({std::move(r[0]), std::move(r[1]), static_cast<int>(parse_int(r[2], "score"))});
    }
    return out;
}

std::string ratings_csv(const std::vector<RatingRow>& rows) {
    std::string out = "term,participant,score\n";
    for (const auto& r : rows) out += csv::join({r.term, r.participant, std::to_string(r.score)}) + "\n";
    return out;
}

std::string labels_csv(const std::vector<RatingAggregate>& aggs, const Partition& partition) {
    std::string out = "term,mean,std,total,label\n";
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        const auto& a = aggs[i];
        out += csv::join({a.term, format_double(a.mean), format_double(a.std), std::to_string(a.total),
                          std::string(label_name(partition.labels[i].label))});
        out.push_back('\n');
    }
    return out;
}

std::vector<LabeledTerm> parse_labels_csv(std::string_view text, const std::string& source) {
    auto rows = csv::parse_with_header(text, {"term", "mean", "std", "total", "label"}, source);
    std::vector<LabeledTerm> out;
    std::set<std::string> seen;
    for (auto& r : rows) {
        if (!seen.insert(r[0]).second) throw InputError(source + ": duplicate term '" + r[0] + "'");
        out.push_back({std::move(r[0]), label_from_name(r[4])});
    }
    return out;
}

}  // namespace termgraph
