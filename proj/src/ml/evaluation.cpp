#include "termgraph/ml/evaluation.hpp"

#include "termgraph/error.hpp"
#include "termgraph/ml/preprocess.hpp"
#include "termgraph/util.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termgraph::ml {

Confusion confusion_of(std::span<const int> truth, std::span<const int> pred, int positive) {
    if (truth.size() != pred.size()) throw std::invalid_argument("confusion_of: size mismatch");
    Confusion c;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == positive, p = pred[i] == positive;
        if (t && p) ++c.tp;
        else if (!t && p) ++c.fp;
        else if (!t && !p) ++c.tn;
        else ++c.fn;
    }
    return c;
}

Confusion swap_positive(const Confusion& c) { return {c.tn, c.fn, c.tp, c.fp}; }

namespace {

MetricValue ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return {};
    return {static_cast<double>(num) / static_cast<double>(den), true};
}

}  // namespace

Metrics metrics_from_confusion(const Confusion& c) {
    Metrics m;
    m.accuracy = ratio(c.tp + c.tn, c.total());
    m.precision = ratio(c.tp, c.tp + c.fp);
    m.recall = ratio(c.tp, c.tp + c.fn);
    m.sensitivity = m.recall;
    m.specificity = ratio(c.tn, c.tn + c.fp);
    m.ppv = m.precision;
    m.npv = ratio(c.tn, c.tn + c.fn);
    if (m.precision.defined && m.recall.defined && m.precision.value + m.recall.value > 0.0)
        m.f1 = {2.0 * m.precision.value * m.recall.value / (m.precision.value + m.recall.value), true};
    return m;
}

std::vector<int> stratified_folds(std::span<const int> y, int folds, std::uint64_t seed) {
    if (folds < 1) throw std::invalid_argument("stratified_folds: folds must be >= 1");
    std::vector<int> assignment(y.size(), 0);
    std::mt19937_64 rng(seed);
    int next = 0;
    for (int cls : {0, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == cls) members.push_back(i);
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i : members) {
            assignment[i] = next;
            next = (next + 1) % folds;
        }
    }
    return assignment;
}

namespace {

struct FoldOutcome {
    Confusion confusion;
    bool excluded = false;
    std::vector<std::string> warnings;
};

void accumulate(Metrics& sum, std::array<int, 8>& n, const Metrics& m) {
    MetricValue* s[] = {&sum.accuracy, &sum.f1, &sum.precision, &sum.recall,
                        &sum.sensitivity, &sum.specificity, &sum.ppv, &sum.npv};
    const MetricValue* v[] = {&m.accuracy, &m.f1, &m.precision, &m.recall,
                              &m.sensitivity, &m.specificity, &m.ppv, &m.npv};
    for (int i = 0; i < 8; ++i)
        if (v[i]->defined) {
            s[i]->value += v[i]->value;
            ++n[i];
        }
}

}  // namespace

ClassifierReport cross_validate(const Dataset& data, ClassifierKind kind, const Hyperparameters& hp,
                                const CvOptions& options) {
    const std::size_t n = data.X.rows();
    if (data.y.size() != n) throw std::invalid_argument("cross_validate: label count does not match rows");
    if (options.folds < 2 || n < static_cast<std::size_t>(options.folds))
        throw std::invalid_argument("cross_validate: need 2 <= folds <= rows");

    const auto assignment = stratified_folds(data.y, options.folds, mix_seed(options.seed, 0));
    std::vector<FoldOutcome> outcomes(options.folds);
    Hyperparameters inner = hp;
    inner.workers = 1;  // parallelism lives at fold level here

#ifdef _OPENMP
    const int threads = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int f = 0; f < options.folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < n; ++i) (assignment[i] == f ? test : train).push_back(i);
        std::vector<int> ytrain, ytest;
        for (std::size_t i : train) ytrain.push_back(data.y[i]);
        for (std::size_t i : test) ytest.push_back(data.y[i]);
        Matrix Xtrain = data.X.select_rows(train);
        Matrix Xtest = data.X.select_rows(test);
        auto model = make_classifier(kind, inner, mix_seed(options.seed, 1 + static_cast<std::uint64_t>(f)));
        if (model->wants_standardized()) {
            auto s = Standardizer::fit(Xtrain);
            Xtrain = s.transform(Xtrain);
            Xtest = s.transform(Xtest);
        }
        try {
            model->fit(Xtrain, ytrain);
        } catch (const DegenerateTrainingSet&) {
            outcomes[f].excluded = true;
            continue;
        }
        outcomes[f].confusion = confusion_of(ytest, model->predict(Xtest));
        outcomes[f].warnings = model->warnings();
    }

    ClassifierReport rep;
    rep.classifier_name = std::string(classifier_name(kind));
    rep.feature_set_name = data.name;
    rep.folds = options.folds;
    rep.seed = options.seed;
    Metrics sum;
    std::array<int, 8> counts{};
    for (int f = 0; f < options.folds; ++f) {
        const auto& o = outcomes[f];
        if (o.excluded) {
            rep.excluded_folds.push_back(f);
            rep.warnings.push_back("fold " + std::to_string(f) + " excluded: single-class training set");
            continue;
        }
        rep.confusion += o.confusion;
        accumulate(sum, counts, metrics_from_confusion(o.confusion));
        for (const auto& w : o.warnings) rep.warnings.push_back("fold " + std::to_string(f) + ": " + w);
    }
    rep.metrics = metrics_from_confusion(rep.confusion);
    rep.metrics_swapped = metrics_from_confusion(swap_positive(rep.confusion));
    MetricValue* s[] = {&sum.accuracy, &sum.f1, &sum.precision, &sum.recall,
                        &sum.sensitivity, &sum.specificity, &sum.ppv, &sum.npv};
    for (int i = 0; i < 8; ++i) {
        if (counts[i] > 0) {
            s[i]->value /= counts[i];
            s[i]->defined = true;
        }
    }
    rep.fold_mean = sum;
    return rep;
}

std::map<std::string, Dataset> assemble_feature_sets(const std::map<std::string, TermFeatures>& features,
                                                     const std::vector<LabeledRow>& labels,
                                                     const std::vector<std::string>& global_names,
                                                     const std::vector<std::string>& local_names) {
    static constexpr const char* kInteraction[] = {"mention", "reply", "quote"};
    std::vector<std::string> missing;
    for (const auto& l : labels)
        if (!features.count(l.term)) missing.push_back(l.term);
    if (!missing.empty()) {
        std::string msg = "no features for labelled term(s):";
        for (const auto& t : missing) msg += " " + t;
        throw InputError(msg);
    }

    std::map<std::string, Dataset> out;
    for (int family = 0; family < 2; ++family) {
        const std::string fam = family == 0 ? "global" : "local";
        const auto& names = family == 0 ? global_names : local_names;
        auto block = [&](const NetworkFeatureRow& r) -> const std::optional<std::vector<double>>& {
            return family == 0 ? r.global : r.local;
        };
        bool any = false;
        std::vector<std::string> lacking;
        for (const auto& l : labels) {
            const auto& tf = features.at(l.term);
            bool all = true;
            for (const auto& r : tf) {
                if (block(r)) any = true;
                else all = false;
            }
            if (!all) lacking.push_back(l.term);
        }
        if (!any) continue;
        if (!lacking.empty()) {
            std::string msg = "missing " + fam + " features for labelled term(s):";
            for (const auto& t : lacking) msg += " " + t;
            throw InputError(msg);
        }
        for (const auto& t : labels) {
            for (const auto& r : features.at(t.term))
                if (block(r)->size() != names.size())
                    throw InputError(fam + " feature width mismatch for term " + t.term);
        }

        // Singles in mention, quote, reply order, then combined.
        for (int kind : {0, 2, 1, -1}) {
            Dataset ds;
            ds.name = fam + "/" + (kind < 0 ? "combined" : kInteraction[kind]);
            std::vector<int> kinds = kind < 0 ? std::vector<int>{0, 1, 2} : std::vector<int>{kind};
            for (int k : kinds)
                for (const auto& nm : names) ds.col_names.push_back(kind < 0 ? std::string(kInteraction[k]) + "." + nm : nm);
            ds.X = Matrix(labels.size(), ds.col_names.size());
            for (std::size_t r = 0; r < labels.size(); ++r) {
                const auto& tf = features.at(labels[r].term);
                std::size_t c = 0;
                for (int k : kinds)
                    for (double v : *block(tf[k])) ds.X(r, c++) = v;
                ds.y.push_back(labels[r].label);
                ds.row_keys.push_back(labels[r].term);
            }
            out.emplace(ds.name, std::move(ds));
        }
    }
    return out;
}

}  // namespace termgraph::ml
