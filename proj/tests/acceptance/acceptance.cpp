// Acceptance checks. One line per criterion; exit status is non-zero if any fails.
#include "termgraph/census.hpp"
#include "termgraph/global_metrics.hpp"
#include "termgraph/ml/evaluation.hpp"
#include "termgraph/ml/pca.hpp"
#include "termgraph/ml/preprocess.hpp"
#include "termgraph/pipeline.hpp"
#include "termgraph/ranking.hpp"
#include "termgraph/synth.hpp"
#include "termgraph/util.hpp"

#include "oracles/brute_force.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace termgraph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("termgraph_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::map<std::string, std::string> tree_contents(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path().string());
    return files;
}

// 1. class universe
Outcome class_universe() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = ClassTable::build();
    const double elapsed = seconds_since(t0);
    int n3 = 0, n4 = 0;
    for (int c = 0; c < kClassCount; ++c) (table.class_size(c) == 3 ? n3 : n4)++;
    // every labelled code: class exists iff weakly connected, canonical code = brute-force minimum
    std::size_t mismatches = 0, checked = 0;
    for (std::size_t k : {3u, 4u}) {
        std::vector<std::size_t> nodes(k);
        std::iota(nodes.begin(), nodes.end(), 0);
        for (std::uint32_t code = 0; code < (1u << (k * (k - 1))); ++code) {
            ++checked;
            const auto a = oracle::decode(code, k);
            const int id = table.class_of(static_cast<int>(k), code);
            if (!oracle::weakly_connected(a, nodes)) {
                mismatches += id != -1;
                continue;
            }
            if (id < 0 || table.canonical_code(id) != oracle::min_code(a, nodes)) ++mismatches;
        }
    }
    const bool oracle_counts = oracle::class_codes(3).size() == 13 && oracle::class_codes(4).size() == 199;
    o.pass = n3 == 13 && n4 == 199 && mismatches == 0 && oracle_counts && elapsed < 1.0;
    o.detail = "size3=" + std::to_string(n3) + " size4=" + std::to_string(n4) + " codes_checked=" +
               std::to_string(checked) + " mismatches=" + std::to_string(mismatches) + " build=" +
               fmt("%.3fs", elapsed) + " (limit 1s)";
    return o;
}

// 2. census vs brute force
Outcome census_oracle() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int graphs = 0, failures = 0;
    std::uint64_t subgraphs = 0;
    for (int pi = 1; pi <= 10; ++pi) {
        const double p = 0.05 * pi;
        for (int rep = 0; rep < 10; ++rep) {
            const std::size_t n = 8 + static_cast<std::size_t>((pi * 7 + rep * 3) % 18);  // 8..25
            auto g = gen_random_digraph(n, p, mix_seed(2000 + pi, rep));
            auto cv = census(g);
            std::vector<std::uint64_t> mine(cv.counts.begin(), cv.counts.end());
            if (mine != oracle::census(g)) ++failures;
            subgraphs += cv.total;
            ++graphs;
        }
    }
    const double elapsed = seconds_since(t0);
    o.pass = graphs >= 100 && failures == 0 && elapsed < 120.0;
    o.detail = "graphs=" + std::to_string(graphs) + " n<=25 p=0.05..0.5 subgraphs=" + std::to_string(subgraphs) +
               " mismatches=" + std::to_string(failures) + " (tolerance 0) time=" + fmt("%.1fs", elapsed) +
               " (limit 120s)";
    return o;
}

// 3. census performance
Outcome census_performance() {
    Outcome o;
    auto g = gen_random_digraph_edges(2000, 10000, 20201109);
    auto t0 = std::chrono::steady_clock::now();
    auto serial = census(g);
    const double t_serial = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto one = census_parallel(g, 1);
    const double t_one = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto eight = census_parallel(g, 8);
    const double t_eight = seconds_since(t0);
    const bool identical = serial == one && serial == eight;
    o.pass = identical && t_serial < 120.0 && t_one < 120.0 && t_eight < 40.0;
    o.detail = "n=2000 m=10000 subgraphs=" + std::to_string(serial.total) + " serial=" + fmt("%.2fs", t_serial) +
               " workers1=" + fmt("%.2fs", t_one) + " (limit 120s) workers8=" + fmt("%.2fs", t_eight) +
               " (limit 40s) identical=" + (identical ? "yes" : "no");
    return o;
}

// 4. global metrics vs brute force
Outcome global_metrics_oracle() {
    Outcome o;
    int graphs = 0, failures = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + static_cast<std::size_t>(i % 50);
        const double p = 0.02 + 0.48 * ((i * 37) % 100) / 100.0;
        auto g = gen_random_digraph(n, p, mix_seed(4000, i));
        auto f = global_feature_vector(g);
        auto m = oracle::metrics(g);
        const double expect[9] = {m.density, m.reciprocity, m.transitivity, m.in_mean, m.in_max,
                                  m.in_min,  m.out_mean,    m.out_max,      m.out_min};
        const bool defined[3] = {m.density_defined, m.reciprocity_defined, m.transitivity_defined};
        bool ok = true;
        for (int j = 0; j < 9; ++j) {
            const bool def = j < 3 ? defined[j] : n > 0;
            if (f.defined[j] != def) ok = false;
            if (!def) continue;
            const double err = std::abs(f.values[j] - expect[j]);
            worst = std::max(worst, err);
            if (err > 1e-12) ok = false;
        }
        failures += !ok;
        ++graphs;
    }
    o.pass = failures == 0;
    std::ostringstream ss;
    ss << "graphs=" << graphs << " n<=50 max_abs_err=" << worst << " (tolerance 1e-12) failures=" << failures;
    o.detail = ss.str();
    return o;
}

struct ClassifyRun {
    nlohmann::json report;
    fs::path dir;
};

ClassifyRun synthetic_classify(double signal, const std::string& tag, int workers) {
    const fs::path d = scratch("c5_" + tag);
    SynthSpec spec;
    spec.n_terms = 60;
    spec.seed = 1;
    spec.signal = signal;
    cmd_synth(spec, (d / "corpus").string());
    cmd_networks({.records_path = (d / "corpus/records.jsonl").string(),
                  .terms_path = (d / "corpus/terms.txt").string(),
                  .outdir = (d / "nets").string(),
                  .workers = workers});
    cmd_features({.networks_dir = (d / "nets").string(), .out = (d / "features.csv").string(), .workers = workers});
    cmd_rank({.ratings_path = (d / "corpus/ratings.csv").string(), .out = (d / "labels.csv").string()});
    ClassifyOptions co;
    co.features_path = (d / "features.csv").string();
    co.labels_path = (d / "labels.csv").string();
    co.outdir = (d / "out").string();
    co.seed = 42;
    co.workers = workers;
    return {cmd_classify(co).report, d};
}

double accuracy_of(const nlohmann::json& report, const std::string& clf, const std::string& set) {
    for (const auto& e : report["entries"])
        if (e["classifier"] == clf && e["feature_set"] == set) return e["metrics"]["accuracy"].get<double>();
    throw std::runtime_error("missing report entry " + clf + " " + set);
}

// 5. planted-signal classification
Outcome synthetic_classification() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    auto strong = synthetic_classify(1.0, "signal1", 0);
    auto none = synthetic_classify(0.0, "signal0", 0);
    const double elapsed = seconds_since(t0);

    const double combined = accuracy_of(strong.report, "RFC", "global/combined");
    std::ostringstream ss;
    ss << "signal=1: RFC global/combined=" << combined << " (need >= 0.85)";
    bool ok = combined >= 0.85;
    for (const char* k : {"mention", "quote", "reply"}) {
        const double a = accuracy_of(strong.report, "RFC", std::string("global/") + k);
        ss << " " << k << "=" << a;
        ok = ok && combined >= a;
    }
    int outside = 0;
    double lo = 1.0, hi = 0.0;
    for (const auto& e : none.report["entries"]) {
        const double a = e["metrics"]["accuracy"].get<double>();
        lo = std::min(lo, a);
        hi = std::max(hi, a);
        if (a < 0.35 || a > 0.65) {
            ++outside;
            ss << " [signal=0 outside band: " << e["classifier"].get<std::string>() << " "
               << e["feature_set"].get<std::string>() << "=" << a << "]";
        }
    }
    ss << "; signal=0: " << none.report["entries"].size() << " accuracies in [" << lo << ", " << hi
       << "] (band [0.35, 0.65]) outside=" << outside << "; time=" << fmt("%.1fs", elapsed) << " (limit 300s)";
    o.pass = ok && outside == 0 && none.report["entries"].size() == 24 && elapsed < 300.0;
    o.detail = ss.str();
    fs::remove_all(strong.dir);
    fs::remove_all(none.dir);
    return o;
}

// 6. ranking partition
Outcome ranking_partition() {
    Outcome o;
    std::mt19937_64 rng(6);
    std::vector<RatingRow> rows;
    // 20 raters per term; a mean of exactly 0.95 (19 of 20 at 1) must stay non-controversial.
    auto add_term = [&](const std::string& term, const std::vector<int>& scores) {
        for (std::size_t p = 0; p < scores.size(); ++p) rows.push_back({term, "p" + std::to_string(p), scores[p]});
    };
    std::size_t planted_pos = 0, planted_neg = 0;
    for (int i = 0; i < 115; ++i) {
        std::vector<int> s(20, 1);
        const int extra = 1 + static_cast<int>(rng() % 40);  // total 21..60 -> mean 1.05..3.0
        for (int e = 0; e < extra; ++e) s[e % 20] = std::min(4, s[e % 20] + 1);
        add_term("pos" + std::to_string(i), s);
        ++planted_pos;
    }
    for (int i = 0; i < 84; ++i) {
        std::vector<int> s(20, 0);
        const int ones = i % 4 == 0 ? 19 : static_cast<int>(rng() % 20);  // mean 0.95 exactly or lower
        for (int e = 0; e < ones; ++e) s[e] = 1;
        add_term("neg" + std::to_string(i), s);
        ++planted_neg;
    }
    const fs::path d = scratch("c6");
    write_file((d / "ratings.csv").string(), ratings_csv(rows));
    auto res = cmd_rank({.ratings_path = (d / "ratings.csv").string(), .out = (d / "labels.csv").string()});

    bool exclusive = true;
    std::size_t pos = 0, neg = 0;
    for (const auto& l : res.partition.labels) {
        const bool expect = l.mean > 0.95;
        if ((l.label == Label::Controversial) != expect) exclusive = false;
        (l.label == Label::Controversial ? pos : neg)++;
    }
    auto reread = parse_labels_csv(read_file((d / "labels.csv").string()), "labels.csv");
    const bool exhaustive = res.partition.labels.size() == 199 && reread.size() == 199;
    o.pass = res.partition.controversial == 115 && res.partition.non_controversial == 84 && pos == 115 &&
             neg == 84 && exclusive && exhaustive && planted_pos == 115 && planted_neg == 84;
    o.detail = "controversial=" + std::to_string(res.partition.controversial) + " (expect 115) non-controversial=" +
               std::to_string(res.partition.non_controversial) + " (expect 84) terms=" +
               std::to_string(res.partition.labels.size()) + " strict_threshold_respected=" +
               (exclusive ? "yes" : "no");
    fs::remove_all(d);
    return o;
}

// 7. PCA vs full eigendecomposition
Outcome pca_oracle() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N(0.0, 1.0);
    double worst_load = 0.0, worst_var = 0.0;
    int failures = 0;
    for (int m = 0; m < 20; ++m) {
        const int n = 5 + static_cast<int>(rng() % 46);             // 5..50
        const int d = m < 5 ? 636 : 2 + static_cast<int>(rng() % 635);  // 2..636
        // anisotropic columns keep the top eigenvalues well separated
        ml::Matrix X(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) X(r, c) = N(rng) * (1.0 + 3.0 / (1 + c % 7));
        auto Z = ml::standardize(X).X;
        auto p = ml::pca2(Z);

        Eigen::MatrixXd E(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) E(r, c) = Z(r, c);
        Eigen::MatrixXd C = E.rowwise() - E.colwise().mean();
        Eigen::MatrixXd cov = (C.transpose() * C) / double(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        bool ok = true;
        for (int k = 0; k < 2; ++k) {
            const Eigen::VectorXd v = es.eigenvectors().col(d - 1 - k);
            const double var_err = std::abs(p.explained_variance[k] - es.eigenvalues()(d - 1 - k));
            double plus = 0.0, minus = 0.0;
            for (int c = 0; c < d; ++c) {
                plus = std::max(plus, std::abs(p.components[k][c] - v(c)));
                minus = std::max(minus, std::abs(p.components[k][c] + v(c)));
            }
            const double load_err = std::min(plus, minus);
            worst_load = std::max(worst_load, load_err);
            worst_var = std::max(worst_var, var_err);
            if (load_err > 1e-6 || var_err > 1e-8) ok = false;
        }
        failures += !ok;
    }
    o.pass = failures == 0;
    std::ostringstream ss;
    ss << "matrices=20 (up to 50x636) max_loading_err=" << worst_load << " (tolerance 1e-6) max_variance_err="
       << worst_var << " (tolerance 1e-8) failures=" << failures;
    o.detail = ss.str();
    return o;
}

// 8. classifier sanity and metric identities
Outcome classifier_sanity() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(-4.0, 4.0);
    ml::Dataset ds;
    ds.name = "separable2d";
    ds.X = ml::Matrix(200, 2);
    // boundary x + 2y = 0.3; every point at distance >= 1 from it
    const double norm = std::sqrt(5.0);
    for (std::size_t i = 0; i < 200;) {
        const double x = U(rng), y = U(rng);
        const double dist = (x + 2 * y - 0.3) / norm;
        if (std::abs(dist) < 1.0) continue;
        const int label = dist > 0;
        // balance the classes
        if (std::count(ds.y.begin(), ds.y.end(), label) >= 100) continue;
        ds.X(i, 0) = x;
        ds.X(i, 1) = y;
        ds.y.push_back(label);
        ++i;
    }
    std::ostringstream ss;
    bool ok = true;
    for (auto kind : {ml::ClassifierKind::Blr, ml::ClassifierKind::Svm, ml::ClassifierKind::Rfc}) {
        auto rep = ml::cross_validate(ds, kind, {}, {});
        const double a = rep.metrics.accuracy.value;
        ss << classifier_name(kind) << "=" << a << " ";
        ok = ok && a >= 0.98;
    }
    ss << "(need >= 0.98); ";

    int identity_failures = 0;
    std::uniform_int_distribution<int> C(0, 200);
    for (int i = 0; i < 1000; ++i) {
        ml::Confusion c{std::uint64_t(C(rng)), std::uint64_t(C(rng)), std::uint64_t(C(rng)), std::uint64_t(C(rng))};
        if (i % 10 == 0) c.tp = 0;  // exercise undefined precision/recall
        auto m = ml::metrics_from_confusion(c);
        bool good = m.ppv.defined == m.precision.defined && m.ppv.value == m.precision.value;
        good = good && m.sensitivity.value == m.recall.value;
        const std::uint64_t pp = c.tp + c.fp, ap = c.tp + c.fn;
        if (pp && ap && c.tp) {
            const double prec = double(c.tp) / double(pp), rec = double(c.tp) / double(ap);
            good = good && m.f1.defined && m.f1.value == 2.0 * prec * rec / (prec + rec);
        } else {
            good = good && !m.f1.defined;
        }
        good = good && m.accuracy.value == double(c.tp + c.tn) / double(c.total());
        identity_failures += !good;
    }
    ss << "identity failures over 1000 confusion matrices=" << identity_failures << " (exact)";
    o.pass = ok && identity_failures == 0;
    o.detail = ss.str();
    return o;
}

// 9. determinism across runs and worker counts
Outcome determinism() {
    Outcome o;
    const fs::path d = scratch("c9");
    SynthSpec spec;
    spec.n_terms = 40;
    spec.seed = 9;
    cmd_synth(spec, (d / "corpus").string());
    cmd_networks({.records_path = (d / "corpus/records.jsonl").string(),
                  .terms_path = (d / "corpus/terms.txt").string(),
                  .outdir = (d / "nets").string()});
    cmd_features({.networks_dir = (d / "nets").string(), .out = (d / "features.csv").string()});
    cmd_rank({.ratings_path = (d / "corpus/ratings.csv").string(), .out = (d / "labels.csv").string()});

    auto run = [&](const std::string& name, int workers) {
        ClassifyOptions co;
        co.features_path = (d / "features.csv").string();
        co.labels_path = (d / "labels.csv").string();
        co.outdir = (d / name).string();
        co.workers = workers;
        cmd_classify(co);
        return tree_contents(d / name);
    };
    auto a = run("run_a", 1);
    auto b = run("run_b", 1);
    auto c = run("run_c", 4);

    // the command-line tool with yet another worker count
    const std::string cmd = std::string(TERMGRAPH_CLI) + " --workers 3 classify \"" + (d / "features.csv").string() +
                            "\" \"" + (d / "labels.csv").string() + "\" \"" + (d / "run_cli").string() +
                            "\" >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    const bool cli_ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
    auto cli = cli_ok ? tree_contents(d / "run_cli") : decltype(a){};

    const bool ab = a == b, ac = a == c, acli = a == cli;
    o.pass = a.size() == 18 && ab && ac && acli;
    o.detail = "files=" + std::to_string(a.size()) + " rerun_identical=" + (ab ? "yes" : "no") +
               " workers1_vs_4_identical=" + (ac ? "yes" : "no") + " cli_workers3_identical=" + (acli ? "yes" : "no");
    fs::remove_all(d);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"class universe 13 + 199", class_universe},
        {"census equals brute force", census_oracle},
        {"census performance n=2000 m=10000", census_performance},
        {"global metrics equal brute force", global_metrics_oracle},
        {"planted-signal classification", synthetic_classification},
        {"ranking partition 115/84", ranking_partition},
        {"PCA equals full eigendecomposition", pca_oracle},
        {"classifier sanity and metric identities", classifier_sanity},
        {"determinism of classify outputs", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " [" << criteria[i].first
                  << "] " << o.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
