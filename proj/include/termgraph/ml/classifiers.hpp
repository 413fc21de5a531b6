#ifndef TERMGRAPH_ML_CLASSIFIERS_HPP
#define TERMGRAPH_ML_CLASSIFIERS_HPP

#include "termgraph/ml/matrix.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace termgraph::ml {

// Thrown by fit() when the training labels contain only one class.
class DegenerateTrainingSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ClassifierKind { Blr, Svm, Rfc };
std::string_view classifier_name(ClassifierKind kind);  // "BLR", "SVM", "RFC"

struct Hyperparameters {
    // binary logistic regression, plain gradient ascent on the mean log-likelihood
    double blr_tol = 1e-8;  // on the gradient 2-norm
    int blr_max_iter = 5000;
    // linear SVM, Pegasos with lambda = 1 / (C n)
    double svm_c = 1.0;
    int svm_epochs = 100;
    // random forest of CART trees
    int rfc_trees = 100;
    int rfc_max_features = 0;  // 0 = floor(sqrt(d))
    int rfc_min_samples_split = 2;
    int workers = 0;  // tree-level parallelism, 0 = OpenMP default
};

// Binary classifier over labels {0,1}.
class BinaryClassifier {
public:
    virtual ~BinaryClassifier() = default;
    virtual void fit(const Matrix& X, std::span<const int> y) = 0;
    virtual int predict_one(std::span<const double> x) const = 0;
    std::vector<int> predict(const Matrix& X) const;
    // Whether the model should see standardised features.
    virtual bool wants_standardized() const = 0;
    const std::vector<std::string>& warnings() const { return warnings_; }

protected:
    std::vector<std::string> warnings_;
};

class LogisticRegression final : public BinaryClassifier {
public:
    explicit LogisticRegression(double tol = 1e-8, int max_iter = 5000) : tol_(tol), max_iter_(max_iter) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    int predict_one(std::span<const double> x) const override { return probability(x) > 0.5 ? 1 : 0; }
    bool wants_standardized() const override { return true; }

    double probability(std::span<const double> x) const;
    bool converged() const { return converged_; }
    int iterations() const { return iterations_; }
    // Parameters are weights followed by the intercept.
    const std::vector<double>& parameters() const { return params_; }
    void set_parameters(std::vector<double> p) { params_ = std::move(p); }

    // Mean log-likelihood and its gradient at `params` (weights then intercept).
    static double log_likelihood(const Matrix& X, std::span<const int> y, std::span<const double> params);
    static std::vector<double> gradient(const Matrix& X, std::span<const int> y, std::span<const double> params);

private:
    double tol_;
    int max_iter_;
    std::vector<double> params_;
    bool converged_ = false;
    int iterations_ = 0;
};

class LinearSvm final : public BinaryClassifier {
public:
    LinearSvm(double c, int epochs, std::uint64_t seed) : c_(c), epochs_(epochs), seed_(seed) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    int predict_one(std::span<const double> x) const override { return decision(x) > 0.0 ? 1 : 0; }
    bool wants_standardized() const override { return true; }
    double decision(std::span<const double> x) const;

private:
    double c_;
    int epochs_;
    std::uint64_t seed_;
    std::vector<double> w_;  // weights, intercept last
};

class RandomForest final : public BinaryClassifier {
public:
    RandomForest(int trees, int max_features, int min_samples_split, std::uint64_t seed, int workers = 0)
        : n_trees_(trees), max_features_(max_features), min_split_(min_samples_split), seed_(seed), workers_(workers) {}
    void fit(const Matrix& X, std::span<const int> y) override;
    int predict_one(std::span<const double> x) const override { return probability(x) > 0.5 ? 1 : 0; }
    bool wants_standardized() const override { return false; }
    // Mean over trees of the leaf's positive fraction.
    double probability(std::span<const double> x) const;

    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;  // positive fraction of training samples at the node
    };
    using Tree = std::vector<Node>;
    const std::vector<Tree>& trees() const { return trees_; }

private:
    int n_trees_;
    int max_features_;
    int min_split_;
    std::uint64_t seed_;
    int workers_;
    std::vector<Tree> trees_;
};

std::unique_ptr<BinaryClassifier> make_classifier(ClassifierKind kind, const Hyperparameters& hp, std::uint64_t seed);

}  // namespace termgraph::ml

#endif
