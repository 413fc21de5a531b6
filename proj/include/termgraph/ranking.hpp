#ifndef TERMGRAPH_RANKING_HPP
#define TERMGRAPH_RANKING_HPP

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace termgraph {

// Likert scores 0..4: Neutral .. Highly Controversial.
inline constexpr std::array<std::string_view, 5> kLikertLabels = {
    "Neutral", "Somewhat Controversial", "Controversial", "Very Controversial", "Highly Controversial"};

inline constexpr double kDefaultThreshold = 0.95;

struct RatingRow {
    std::string term;
    std::string participant;
    int score = 0;
};

struct RatingAggregate {
    std::string term;
    long total = 0;
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    int n_raters = 0;
};

enum class Label { NonControversial = 0, Controversial = 1 };

std::string_view label_name(Label label);  // "controversial" / "non-controversial"
Label label_from_name(std::string_view name);  // throws InputError

struct TermLabel {
    std::string term;
    Label label = Label::NonControversial;
    double mean = 0.0;
};

// Sorted by descending mean, then ascending term. Throws InputError on
// duplicate (term, participant) pairs or scores outside [0,4].
std::vector<RatingAggregate> aggregate_ratings(const std::vector<RatingRow>& rows);

struct Partition {
    std::vector<TermLabel> labels;
    std::size_t controversial = 0;
    std::size_t non_controversial = 0;
};

// Controversial iff mean strictly exceeds the threshold.
Partition partition_terms(const std::vector<RatingAggregate>& aggs, double threshold = kDefaultThreshold);

// Percentage of all ratings per Likert label. Throws InputError when empty.
std::map<std::string, double> label_distribution(const std::vector<RatingRow>& rows);

// CSV header `term,participant,score`.
std::vector<RatingRow> parse_ratings_csv(std::string_view text, const std::string& source);
std::string ratings_csv(const std::vector<RatingRow>& rows);

// CSV header `term,mean,std,total,label`, rows in aggregate order.
std::string labels_csv(const std::vector<RatingAggregate>& aggs, const Partition& partition);

struct LabeledTerm {
    std::string term;
    Label label;
};
std::vector<LabeledTerm> parse_labels_csv(std::string_view text, const std::string& source);

}  // namespace termgraph

#endif
