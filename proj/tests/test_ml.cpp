#include "termgraph/error.hpp"
#include "termgraph/ml/classifiers.hpp"
#include "termgraph/ml/evaluation.hpp"
#include "termgraph/ml/pca.hpp"
#include "termgraph/ml/preprocess.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace termgraph;
using namespace termgraph::ml;

namespace {

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

Matrix gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    Matrix m(n, d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) m(r, c) = N(rng);
    return m;
}

// 1-D data with class = sign(x), |x| >= 1.
Dataset separable_1d(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(1.0, 3.0);
    Dataset d;
    d.name = "sep1d";
    d.X = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 2);
        d.X(i, 0) = label ? U(rng) : -U(rng);
        d.y.push_back(label);
    }
    return d;
}

double accuracy(const std::vector<int>& truth, const std::vector<int>& pred) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) ok += truth[i] == pred[i];
    return static_cast<double>(ok) / static_cast<double>(truth.size());
}

}  // namespace

TEST_CASE("standardize examples") {
    auto s = standardize(from_rows({{1, 5}, {2, 5}, {3, 5}}));
    CHECK(s.X(0, 0) == doctest::Approx(-1.224744871391589).epsilon(1e-12));
    CHECK(s.X(1, 0) == doctest::Approx(0.0));
    CHECK(s.X(2, 0) == doctest::Approx(1.224744871391589).epsilon(1e-12));
    CHECK_FALSE(s.params.zero_variance[0]);
    CHECK(s.params.zero_variance[1]);
    for (int r = 0; r < 3; ++r) CHECK(s.X(r, 1) == 0.0);

    auto again = standardize(s.X);
    for (int r = 0; r < 3; ++r) CHECK(std::abs(again.X(r, 0) - s.X(r, 0)) < 1e-9);

    auto g = standardize(gaussian(40, 5, 1));
    for (std::size_t r = 0; r < g.X.rows(); ++r)
        for (double v : g.X.row(r)) CHECK(std::isfinite(v));
}

TEST_CASE("standardizer applies training statistics to new data") {
    auto s = Standardizer::fit(from_rows({{0}, {2}}));
    auto t = s.transform(from_rows({{4}}));
    CHECK(t(0, 0) == doctest::Approx(3.0));
    CHECK_THROWS(s.transform(from_rows({{1, 2}})));
}

TEST_CASE("jacobi eigen decomposition of a known matrix") {
    auto e = jacobi_eigen(from_rows({{2, 1}, {1, 2}}));
    CHECK(e.values[0] == doctest::Approx(3.0));
    CHECK(e.values[1] == doctest::Approx(1.0));
    CHECK(std::abs(std::abs(e.vectors(0, 0)) - std::sqrt(0.5)) < 1e-12);
}

TEST_CASE("pca on collinear data") {
    std::vector<std::vector<double>> rows;
    for (int i = -5; i <= 5; ++i) rows.push_back({double(i), 2.0 * i});
    auto X = standardize(from_rows(rows)).X;
    auto p = pca2(X);
    CHECK(p.components[0][0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(p.components[0][1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(std::abs(p.explained_variance[1]) < 1e-9);
    CHECK(std::abs(dot(p.components[0], p.components[1])) < 1e-12);
    CHECK(p.explained_variance_ratio[0] == doctest::Approx(1.0));
}

TEST_CASE("pca projection is X times the components") {
    for (auto [n, d] : {std::pair{30, 4}, std::pair{6, 40}}) {
        auto X = gaussian(n, d, n * 31 + d);
        auto p = pca2(X);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < 2; ++k) CHECK(p.projected(r, k) == dot(X.row(r), p.components[k]));
    }
}

TEST_CASE("pca matches a full eigendecomposition oracle") {
    for (auto [n, d, seed] : {std::tuple{50, 7, 1}, std::tuple{12, 60, 2}, std::tuple{200, 2, 3}}) {
        auto X = gaussian(n, d, seed);
        Eigen::MatrixXd E(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) E(r, c) = X(r, c);
        Eigen::MatrixXd C = E.rowwise() - E.colwise().mean();
        Eigen::MatrixXd cov = (C.adjoint() * C) / double(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        auto p = pca2(X);
        CHECK(p.total_variance == doctest::Approx(cov.trace()).epsilon(1e-12));
        // sum of all eigenvalues equals the trace
        CHECK(es.eigenvalues().sum() == doctest::Approx(p.total_variance).epsilon(1e-10));
        for (int k = 0; k < 2; ++k) {
            const int idx = d - 1 - k;
            CHECK(std::abs(p.explained_variance[k] - es.eigenvalues()(idx)) < 1e-8);
            Eigen::Map<const Eigen::VectorXd> comp(p.components[k].data(), d);
            const double align = std::abs(comp.dot(es.eigenvectors().col(idx)));
            CHECK(std::abs(align - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("pca on an isotropic sample gives comparable variances") {
    auto p = pca2(gaussian(2000, 2, 11));
    CHECK(p.explained_variance[1] / p.explained_variance[0] > 0.85);
}

TEST_CASE("pca sign convention and errors") {
    auto p = pca2(gaussian(20, 5, 4));
    for (const auto& c : p.components) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < c.size(); ++i)
            if (std::abs(c[i]) > std::abs(c[arg])) arg = i;
        CHECK(c[arg] > 0);
    }
    CHECK_THROWS_AS(pca2(Matrix(1, 3)), std::invalid_argument);
    CHECK_THROWS_AS(pca2(Matrix(5, 3, 2.0)), std::invalid_argument);
}

TEST_CASE("all classifiers fit separable 1-D data") {
    auto d = separable_1d(60, 5);
    for (auto kind : {ClassifierKind::Blr, ClassifierKind::Svm, ClassifierKind::Rfc}) {
        auto model = make_classifier(kind, {}, 9);
        Matrix X = d.X;
        if (model->wants_standardized()) X = standardize(X).X;
        model->fit(X, d.y);
        CAPTURE(classifier_name(kind));
        CHECK(accuracy(d.y, model->predict(X)) == 1.0);
    }
}

TEST_CASE("random labels stay near chance under cross-validation") {
    Dataset d;
    d.name = "noise";
    d.X = gaussian(200, 3, 77);
    std::mt19937_64 rng(78);
    for (int i = 0; i < 200; ++i) d.y.push_back(static_cast<int>(rng() & 1));
    for (auto kind : {ClassifierKind::Blr, ClassifierKind::Svm, ClassifierKind::Rfc}) {
        auto rep = cross_validate(d, kind, {}, {});
        CAPTURE(classifier_name(kind));
        CHECK(rep.metrics.accuracy.value >= 0.35);
        CHECK(rep.metrics.accuracy.value <= 0.65);
        CHECK(rep.confusion.total() == 200);
    }
}

TEST_CASE("random forest is deterministic under its seed") {
    auto X = gaussian(80, 6, 3);
    std::vector<int> y;
    for (std::size_t i = 0; i < 80; ++i) y.push_back(X(i, 0) + 0.5 * X(i, 1) > 0);
    auto held = gaussian(40, 6, 4);
    RandomForest a(50, 0, 2, 123, 1), b(50, 0, 2, 123, 4), c(50, 0, 2, 124, 1);
    a.fit(X, y);
    b.fit(X, y);
    c.fit(X, y);
    CHECK(a.predict(held) == b.predict(held));
    for (std::size_t i = 0; i < held.rows(); ++i) CHECK(a.probability(held.row(i)) == b.probability(held.row(i)));
    CHECK(a.trees().size() == 50);
    bool differs = false;
    for (std::size_t i = 0; i < held.rows(); ++i) differs |= a.probability(held.row(i)) != c.probability(held.row(i));
    CHECK(differs);
}

TEST_CASE("logistic regression gradient matches finite differences") {
    auto X = gaussian(30, 3, 21);
    std::mt19937_64 rng(22);
    std::vector<int> y;
    for (std::size_t i = 0; i < 30; ++i) y.push_back(X(i, 0) + std::normal_distribution<double>(0, 1)(rng) > 0);
    std::vector<double> p = {0.3, -0.2, 0.1, 0.05};
    auto g = LogisticRegression::gradient(X, y, p);
    const double h = 1e-6;
    for (std::size_t j = 0; j < p.size(); ++j) {
        auto up = p, down = p;
        up[j] += h;
        down[j] -= h;
        const double fd = (LogisticRegression::log_likelihood(X, y, up) - LogisticRegression::log_likelihood(X, y, down)) / (2 * h);
        CHECK(std::abs(fd - g[j]) < 1e-7);
    }

    LogisticRegression blr;
    blr.fit(X, y);
    CHECK(blr.converged());
    CHECK(blr.warnings().empty());
    auto at = LogisticRegression::gradient(X, y, blr.parameters());
    double norm = 0;
    for (double v : at) norm += v * v;
    CHECK(std::sqrt(norm) < 1e-6);
    // finite-difference gradient at the optimum is also small
    for (std::size_t j = 0; j < at.size(); ++j) {
        auto up = blr.parameters(), down = blr.parameters();
        up[j] += h;
        down[j] -= h;
        CHECK(std::abs(LogisticRegression::log_likelihood(X, y, up) - LogisticRegression::log_likelihood(X, y, down)) / (2 * h) < 1e-6);
    }
}

TEST_CASE("logistic regression reports non-convergence") {
    auto d = separable_1d(20, 1);  // separable: likelihood has no maximiser
    LogisticRegression blr(1e-12, 10);
    blr.fit(d.X, d.y);
    CHECK_FALSE(blr.converged());
    CHECK(blr.warnings().size() == 1);
}

TEST_CASE("single-class training data is rejected") {
    std::vector<int> y(5, 1);
    for (auto kind : {ClassifierKind::Blr, ClassifierKind::Svm, ClassifierKind::Rfc})
        CHECK_THROWS_AS(make_classifier(kind, {}, 1)->fit(Matrix(5, 2, 1.0), y), DegenerateTrainingSet);
    CHECK_THROWS_AS(make_classifier(ClassifierKind::Blr, {}, 1)->fit(Matrix(2, 1), std::vector<int>{0, 2}),
                    std::invalid_argument);
}

TEST_CASE("confusion metrics example") {
    Confusion c{8, 2, 7, 3};
    auto m = metrics_from_confusion(c);
    CHECK(m.accuracy.value == doctest::Approx(0.75));
    CHECK(m.precision.value == doctest::Approx(0.8));
    CHECK(m.recall.value == doctest::Approx(0.7273).epsilon(1e-4));
    CHECK(m.specificity.value == doctest::Approx(0.7778).epsilon(1e-4));
    CHECK(m.f1.value == doctest::Approx(0.7619).epsilon(1e-4));
    CHECK(m.ppv.value == doctest::Approx(0.8));
    CHECK(m.npv.value == doctest::Approx(0.7));
    CHECK(m.sensitivity.value == m.recall.value);

    auto s = swap_positive(c);
    CHECK(s == Confusion{7, 3, 8, 2});
    CHECK(metrics_from_confusion(s).precision.value == doctest::Approx(0.7));

    auto empty = metrics_from_confusion({});
    CHECK_FALSE(empty.accuracy.defined);
    CHECK_FALSE(empty.f1.defined);
}

TEST_CASE("confusion counting") {
    std::vector<int> t = {1, 1, 0, 0, 1}, p = {1, 0, 0, 1, 1};
    CHECK(confusion_of(t, p) == Confusion{2, 1, 1, 1});
    CHECK(confusion_of(t, p, 0) == Confusion{1, 1, 2, 1});
}

TEST_CASE("metric identities on random confusion matrices") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> U(0, 50);
    for (int i = 0; i < 500; ++i) {
        Confusion c{std::uint64_t(U(rng)), std::uint64_t(U(rng)), std::uint64_t(U(rng)), std::uint64_t(U(rng))};
        auto m = metrics_from_confusion(c);
        CHECK(m.ppv.value == m.precision.value);
        if (m.recall.defined && m.specificity.defined) {
            CHECK(m.accuracy.value >= std::min(m.recall.value, m.specificity.value) - 1e-15);
            CHECK(m.accuracy.value <= std::max(m.recall.value, m.specificity.value) + 1e-15);
        }
    }
}

TEST_CASE("stratified folds: sizes and class balance") {
    std::vector<int> y(199, 0);
    for (int i = 0; i < 115; ++i) y[i * 199 / 115] = 1;
    auto f = stratified_folds(y, 10, 3);
    std::array<int, 10> size{}, pos{};
    for (std::size_t i = 0; i < y.size(); ++i) {
        REQUIRE(f[i] >= 0);
        REQUIRE(f[i] < 10);
        ++size[f[i]];
        pos[f[i]] += y[i];
    }
    for (int k = 0; k < 10; ++k) {
        CHECK((size[k] == 19 || size[k] == 20));
        CHECK(std::abs(pos[k] - 11.5) <= 1.0);
        CHECK(std::abs((size[k] - pos[k]) - 8.4) <= 1.0);
    }
    CHECK(stratified_folds(y, 10, 3) == f);
    CHECK(stratified_folds(y, 10, 4) != f);
}

TEST_CASE("cross-validation flags folds with a single-class training set") {
    Dataset d;
    d.name = "lonely";
    d.X = gaussian(20, 2, 8);
    d.y.assign(20, 0);
    d.y[3] = 1;
    auto rep = cross_validate(d, ClassifierKind::Rfc, {}, {});
    CHECK(rep.excluded_folds.size() == 1);
    CHECK_FALSE(rep.warnings.empty());
    CHECK(rep.confusion.total() == 18);
    CHECK_THROWS_AS(cross_validate(d, ClassifierKind::Rfc, {}, {.folds = 30}), std::invalid_argument);
}

TEST_CASE("cross-validation is independent of worker count") {
    Dataset d;
    d.name = "mix";
    d.X = gaussian(120, 4, 31);
    for (std::size_t i = 0; i < 120; ++i) d.y.push_back(d.X(i, 0) - d.X(i, 2) > 0.2);
    for (auto kind : {ClassifierKind::Blr, ClassifierKind::Svm, ClassifierKind::Rfc}) {
        auto a = cross_validate(d, kind, {}, {.folds = 10, .seed = 9, .workers = 1});
        auto b = cross_validate(d, kind, {}, {.folds = 10, .seed = 9, .workers = 4});
        CHECK(a.confusion == b.confusion);
        CHECK(a.fold_mean.accuracy.value == b.fold_mean.accuracy.value);
        CHECK(a.metrics.accuracy.value > 0.8);
    }
}

TEST_CASE("perfectly separable data gives RFC accuracy 1") {
    auto d = separable_1d(100, 12);
    auto rep = cross_validate(d, ClassifierKind::Rfc, {}, {});
    CHECK(rep.metrics.accuracy.value == 1.0);
}

TEST_CASE("assemble feature sets shapes") {
    std::map<std::string, TermFeatures> feats;
    std::vector<LabeledRow> labels;
    std::vector<std::string> gnames, lnames;
    for (int i = 0; i < 9; ++i) gnames.push_back("g" + std::to_string(i));
    for (int i = 0; i < 212; ++i) lnames.push_back("l" + std::to_string(i));
    for (int t = 0; t < 199; ++t) {
        std::string term = "t" + std::to_string(t);
        TermFeatures tf;
        for (int k = 0; k < 3; ++k) {
            tf[k].global = std::vector<double>(9, t + 0.1 * k);
            tf[k].local = std::vector<double>(212, k);
        }
        feats[term] = tf;
        labels.push_back({term, t % 3 == 0});
    }
    auto sets = assemble_feature_sets(feats, labels, gnames, lnames);
    REQUIRE(sets.size() == 8);
    for (const char* k : {"mention", "quote", "reply"}) {
        CHECK(sets.at(std::string("global/") + k).X.cols() == 9);
        CHECK(sets.at(std::string("local/") + k).X.cols() == 212);
    }
    const auto& gc = sets.at("global/combined");
    CHECK(gc.X.rows() == 199);
    CHECK(gc.X.cols() == 27);
    CHECK(sets.at("local/combined").X.cols() == 636);
    // combined order is mention, reply, quote
    CHECK(gc.X(5, 0) == doctest::Approx(5.0));
    CHECK(gc.X(5, 9) == doctest::Approx(5.1));
    CHECK(gc.X(5, 18) == doctest::Approx(5.2));
    CHECK(gc.col_names[9] == "reply.g0");
    CHECK(sets.at("global/quote").X(5, 0) == doctest::Approx(5.2));
    CHECK(gc.row_keys[5] == "t5");
    CHECK(gc.y[6] == 1);

    auto missing = labels;
    missing.push_back({"ghost", 1});
    CHECK_THROWS_AS(assemble_feature_sets(feats, missing, gnames, lnames), InputError);
    try {
        assemble_feature_sets(feats, missing, gnames, lnames);
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("ghost") != std::string::npos);
    }

    auto partial = feats;
    partial["t7"][1].local.reset();
    CHECK_THROWS_AS(assemble_feature_sets(partial, labels, gnames, lnames), InputError);

    for (auto& [_, tf] : feats)
        for (auto& row : tf) row.local.reset();
    auto only_global = assemble_feature_sets(feats, labels, gnames, lnames);
    CHECK(only_global.size() == 4);
}
