#ifndef TERMGRAPH_ML_EVALUATION_HPP
#define TERMGRAPH_ML_EVALUATION_HPP

#include "termgraph/ml/classifiers.hpp"
#include "termgraph/ml/matrix.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace termgraph::ml {

struct Dataset {
    std::string name;
    Matrix X;
    std::vector<int> y;  // 1 = controversial
    std::vector<std::string> row_keys;
    std::vector<std::string> col_names;
};

struct Confusion {
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::uint64_t total() const { return tp + fp + tn + fn; }
    Confusion& operator+=(const Confusion& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const Confusion&, const Confusion&) = default;
};

// Counts with `positive` as the positive label.
Confusion confusion_of(std::span<const int> truth, std::span<const int> pred, int positive = 1);
// Same predictions viewed with the other class as positive.
Confusion swap_positive(const Confusion& c);

struct MetricValue {
    double value = 0.0;
    bool defined = false;
};

struct Metrics {
    MetricValue accuracy, f1, precision, recall, sensitivity, specificity, ppv, npv;
};

// Standard definitions: ppv = precision = tp/(tp+fp), sensitivity =
// recall = tp/(tp+fn), specificity = tn/(tn+fp), npv = tn/(tn+fn).
Metrics metrics_from_confusion(const Confusion& c);

// Fold index in [0, folds) per row. Each class is shuffled under `seed`
// and dealt round-robin, continuing the deal across classes, so fold sizes
// differ by at most one and per-fold class counts by at most one.
std::vector<int> stratified_folds(std::span<const int> y, int folds, std::uint64_t seed);

struct CvOptions {
    int folds = 10;
    std::uint64_t seed = 42;
    int workers = 0;  // fold-level parallelism
};

struct ClassifierReport {
    std::string classifier_name;
    std::string feature_set_name;
    Confusion confusion;          // pooled over evaluated test folds
    Metrics metrics;              // from the pooled confusion, positive = controversial
    Metrics metrics_swapped;      // pooled, positive = non-controversial
    Metrics fold_mean;            // mean over folds of per-fold metrics (defined folds only)
    std::vector<int> excluded_folds;  // single-class training set
    std::vector<std::string> warnings;
    int folds = 0;
    std::uint64_t seed = 0;
};

// Stratified k-fold CV. Standardisation (for models that want it) is fit on
// the training folds only. Throws std::invalid_argument when rows < folds.
ClassifierReport cross_validate(const Dataset& data, ClassifierKind kind, const Hyperparameters& hp,
                                const CvOptions& options);

// Per-network features of one term, indexed by interaction (mention,
// reply, quote). Either block may be absent.
struct NetworkFeatureRow {
    std::optional<std::vector<double>> global;  // 9 metrics
    std::optional<std::vector<double>> local;   // 212 normalised census entries
};
using TermFeatures = std::array<NetworkFeatureRow, 3>;

struct LabeledRow {
    std::string term;
    int label = 0;
};

// The eight datasets {global, local} x {mention, quote, reply, combined},
// named "<family>/<interaction>". Combined concatenates mention, reply and
// quote blocks. Rows follow `labels`. A family missing for every term is
// skipped; missing for some labelled terms is an InputError naming them.
std::map<std::string, Dataset> assemble_feature_sets(const std::map<std::string, TermFeatures>& features,
                                                     const std::vector<LabeledRow>& labels,
                                                     const std::vector<std::string>& global_names,
                                                     const std::vector<std::string>& local_names);

}  // namespace termgraph::ml

#endif
