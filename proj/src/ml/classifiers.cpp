#include "termgraph/ml/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termgraph::ml {

std::string_view classifier_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Blr: return "BLR";
        case ClassifierKind::Svm: return "SVM";
        case ClassifierKind::Rfc: return "RFC";
    }
    return "?";
}

std::vector<int> BinaryClassifier::predict(const Matrix& X) const {
    std::vector<int> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) out[r] = predict_one(X.row(r));
    return out;
}

namespace {

void require_both_classes(const Matrix& X, std::span<const int> y) {
    if (X.rows() != y.size()) throw std::invalid_argument("fit: label count does not match rows");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v != 0 && v != 1) throw std::invalid_argument("fit: labels must be 0 or 1");
        (v ? pos : neg) = true;
    }
    if (!pos || !neg) throw DegenerateTrainingSet("training set contains a single class");
}

double linear(std::span<const double> x, std::span<const double> params) {
    double z = params.back();
    for (std::size_t i = 0; i < x.size(); ++i) z += params[i] * x[i];
    return z;
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double LogisticRegression::log_likelihood(const Matrix& X, std::span<const int> y, std::span<const double> params) {
    double ll = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        double z = linear(X.row(r), params);
        ll += y[r] ? -softplus(-z) : -softplus(z);
    }
    return ll / static_cast<double>(X.rows());
}

std::vector<double> LogisticRegression::gradient(const Matrix& X, std::span<const int> y,
                                                 std::span<const double> params) {
    const std::size_t d = X.cols();
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto x = X.row(r);
        double resid = y[r] - sigmoid(linear(x, params));
        for (std::size_t i = 0; i < d; ++i) g[i] += resid * x[i];
        g[d] += resid;
    }
    for (double& v : g) v /= static_cast<double>(X.rows());
    return g;
}

void LogisticRegression::fit(const Matrix& X, std::span<const int> y) {
    require_both_classes(X, y);
    warnings_.clear();
    const std::size_t n = X.rows(), d = X.cols();

    // Lipschitz constant of the mean log-likelihood gradient is at most
    // sigma_max([X 1])^2 / (4n); estimate sigma_max^2 by power iteration.
    std::vector<double> v(d + 1, 1.0), xv(n);
    double sigma2 = 1.0;
    for (int it = 0; it < 100; ++it) {
        for (std::size_t r = 0; r < n; ++r) xv[r] = linear(X.row(r), v);
        std::vector<double> next(d + 1, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            auto x = X.row(r);
            for (std::size_t i = 0; i < d; ++i) next[i] += x[i] * xv[r];
            next[d] += xv[r];
        }
        double norm = std::sqrt(dot(next, next));
        if (norm == 0.0) break;
        sigma2 = norm / std::sqrt(dot(v, v));
        for (std::size_t i = 0; i <= d; ++i) v[i] = next[i] / norm;
    }
    double step = 4.0 * static_cast<double>(n) / (1.05 * sigma2);

    params_.assign(d + 1, 0.0);
    converged_ = false;
    double ll = log_likelihood(X, y, params_);
    for (iterations_ = 0; iterations_ < max_iter_; ++iterations_) {
        auto g = gradient(X, y, params_);
        if (std::sqrt(dot(g, g)) < tol_) {
            converged_ = true;
            break;
        }
        // Ascent step; backtrack if the power-iteration bound was optimistic.
        std::vector<double> trial(d + 1);
        for (;;) {
            for (std::size_t i = 0; i <= d; ++i) trial[i] = params_[i] + step * g[i];
            double next_ll = log_likelihood(X, y, trial);
            if (next_ll >= ll || step < 1e-12) {
                ll = next_ll;
                break;
            }
            step *= 0.5;
        }
        params_.swap(trial);
    }
    if (!converged_)
        warnings_.push_back("BLR did not converge in " + std::to_string(max_iter_) + " iterations");
}

double LogisticRegression::probability(std::span<const double> x) const { return sigmoid(linear(x, params_)); }

void LinearSvm::fit(const Matrix& X, std::span<const int> y) {
    require_both_classes(X, y);
    warnings_.clear();
    const std::size_t n = X.rows(), d = X.cols();
    const double lambda = 1.0 / (c_ * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    // The intercept is an extra constant feature, regularised with the rest.
    w_.assign(d + 1, 0.0);
    std::mt19937_64 rng(seed_);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 0;
    for (int epoch = 0; epoch < epochs_; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t idx : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double label = y[idx] ? 1.0 : -1.0;
            const double margin = label * decision(X.row(idx));
            const double shrink = 1.0 - eta * lambda;
            for (double& wi : w_) wi *= shrink;
            if (margin < 1.0) {
                auto x = X.row(idx);
                for (std::size_t i = 0; i < d; ++i) w_[i] += eta * label * x[i];
                w_[d] += eta * label;
            }
            double norm = std::sqrt(dot(w_, w_));
            if (norm > radius)
                for (double& wi : w_) wi *= radius / norm;
        }
    }
}

double LinearSvm::decision(std::span<const double> x) const { return linear(x, w_); }

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, int max_features, int min_split, std::uint64_t seed)
        : X_(X), y_(y), max_features_(max_features), min_split_(min_split), rng_(seed) {}

    RandomForest::Tree build() {
        const std::size_t n = X_.rows();
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> sample(n);
        for (auto& s : sample) s = pick(rng_);
        features_.resize(X_.cols());
        std::iota(features_.begin(), features_.end(), 0);
        RandomForest::Tree tree;
        grow(tree, sample);
        return tree;
    }

private:
    int grow(RandomForest::Tree& tree, std::vector<std::size_t>& idx) {
        const int id = static_cast<int>(tree.size());
        tree.emplace_back();
        std::size_t pos = 0;
        for (std::size_t i : idx) pos += y_[i];
        tree[id].value = static_cast<double>(pos) / static_cast<double>(idx.size());
        if (pos == 0 || pos == idx.size() || static_cast<int>(idx.size()) < min_split_) return id;

        SplitChoice best = find_split(idx, pos);
        if (best.feature < 0) return id;
        std::vector<std::size_t> left, right;
        for (std::size_t i : idx) (X_(i, best.feature) <= best.threshold ? left : right).push_back(i);
        idx.clear();
        idx.shrink_to_fit();
        tree[id].feature = best.feature;
        tree[id].threshold = best.threshold;
        int l = grow(tree, left);
        int r = grow(tree, right);
        tree[id].left = l;
        tree[id].right = r;
        return id;
    }

    // Visits features in random order until max_features non-constant ones
    // have been scored; picks the lowest weighted Gini impurity.
    SplitChoice find_split(const std::vector<std::size_t>& idx, std::size_t pos_total) {
        std::shuffle(features_.begin(), features_.end(), rng_);
        const double n = static_cast<double>(idx.size());
        SplitChoice best;
        double best_imp = std::numeric_limits<double>::infinity();
        int scored = 0;
        std::vector<std::pair<double, int>> vals(idx.size());
        for (std::size_t f : features_) {
            if (scored >= max_features_) break;
            for (std::size_t i = 0; i < idx.size(); ++i) vals[i] = {X_(idx[i], f), y_[idx[i]]};
            std::sort(vals.begin(), vals.end());
            if (vals.front().first == vals.back().first) continue;
            ++scored;
            std::size_t left_n = 0, left_pos = 0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                ++left_n;
                left_pos += vals[i].second;
                if (vals[i].first == vals[i + 1].first) continue;
                const double ln = static_cast<double>(left_n), rn = n - ln;
                const double lp = static_cast<double>(left_pos) / ln;
                const double rp = static_cast<double>(pos_total - left_pos) / rn;
                const double imp = (ln * 2.0 * lp * (1.0 - lp) + rn * 2.0 * rp * (1.0 - rp)) / n;
                if (imp < best_imp) {
                    best_imp = imp;
                    best.feature = static_cast<int>(f);
                    double mid = 0.5 * (vals[i].first + vals[i + 1].first);
                    best.threshold = mid < vals[i + 1].first ? mid : vals[i].first;
                    best.impurity = imp;
                }
            }
        }
        return best;
    }

    const Matrix& X_;
    std::span<const int> y_;
    int max_features_;
    int min_split_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> features_;
};

}  // namespace

void RandomForest::fit(const Matrix& X, std::span<const int> y) {
    require_both_classes(X, y);
    warnings_.clear();
    const int d = static_cast<int>(X.cols());
    const int mtry = max_features_ > 0 ? std::min(max_features_, d)
                                       : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    trees_.assign(static_cast<std::size_t>(n_trees_), {});
    std::vector<std::uint64_t> seeds(trees_.size());
    std::seed_seq seq{seed_, static_cast<std::uint64_t>(n_trees_)};
    std::mt19937_64 master(seq);
    for (auto& s : seeds) s = master();
#ifdef _OPENMP
    const int threads = workers_ > 0 ? workers_ : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int t = 0; t < n_trees_; ++t) trees_[t] = TreeBuilder(X, y, mtry, min_split_, seeds[t]).build();
}

double RandomForest::probability(std::span<const double> x) const {
    double sum = 0.0;
    for (const Tree& tree : trees_) {
        int node = 0;
        while (tree[node].feature >= 0)
            node = x[tree[node].feature] <= tree[node].threshold ? tree[node].left : tree[node].right;
        sum += tree[node].value;
    }
    return trees_.empty() ? 0.0 : sum / static_cast<double>(trees_.size());
}

std::unique_ptr<BinaryClassifier> make_classifier(ClassifierKind kind, const Hyperparameters& hp, std::uint64_t seed) {
    switch (kind) {
        case ClassifierKind::Blr: return std::make_unique<LogisticRegression>(hp.blr_tol, hp.blr_max_iter);
        case ClassifierKind::Svm: return std::make_unique<LinearSvm>(hp.svm_c, hp.svm_epochs, seed);
        case ClassifierKind::Rfc:
            return std::make_unique<RandomForest>(hp.rfc_trees, hp.rfc_max_features, hp.rfc_min_samples_split, seed,
                                                  hp.workers);
    }
    throw std::invalid_argument("unknown classifier kind");
}

}  // namespace termgraph::ml
