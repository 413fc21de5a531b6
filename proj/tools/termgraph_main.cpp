// termgraph: batch pipeline from hydrated interaction records to
// per-term network features and classification reports.

#include "termgraph/error.hpp"
#include "termgraph/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

using namespace termgraph;

namespace {

void print_manifest(bool enabled, const RunManifest& m) {
    if (enabled) std::cout << m.with_hash().dump(2) << "\n";
}

int default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n ? static_cast<int>(n) : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"termgraph: interaction networks, graph features and term classification"};
    app.require_subcommand(1);
    bool show_manifest = false;
    int workers = default_workers();
    app.add_flag("--manifest", show_manifest, "Print the run manifest as JSON");
    app.add_option("--workers", workers, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);

    // networks
    NetworksOptions net;
    auto* networks = app.add_subcommand("networks", "Build mention/reply/quote networks per term");
    networks->add_option("records", net.records_path, "Hydrated records (JSONL, optionally .gz)")->required();
    networks->add_option("terms", net.terms_path, "Terms file, one per line")->required();
    networks->add_option("outdir", net.outdir, "Output directory")->required();
    networks->add_option("--from", net.from, "Window start (ISO-8601, inclusive), e.g. 2020-11-09");
    networks->add_option("--to", net.to, "Window end (ISO-8601, inclusive), e.g. 2020-12-08");
    networks->add_flag("--audit", net.audit, "Write per-edge provenance files");
    networks->add_option("--max-malformed", net.max_malformed_fraction, "Fail above this fraction of bad lines")
        ->default_val(0.10);

    // features
    FeaturesOptions feat;
    bool want_global = false, want_local = false;
    auto* features = app.add_subcommand("features", "Global metrics and 3/4-node census per network");
    features->add_option("networks_dir", feat.networks_dir, "Directory written by `networks`")->required();
    features->add_option("out", feat.out, "Features CSV")->required();
    features->add_flag("--global", want_global, "Include the nine global metrics");
    features->add_flag("--local", want_local, "Include the 212-class census");

    // rank
    RankOptions rank;
    auto* rank_cmd = app.add_subcommand("rank", "Aggregate Likert ratings and label terms");
    rank_cmd->add_option("ratings", rank.ratings_path, "Ratings CSV (term,participant,score)")->required();
    rank_cmd->add_option("out", rank.out, "Labels CSV")->required();
    rank_cmd->add_option("--threshold", rank.threshold, "Controversial iff mean exceeds this")->default_val(0.95);

    // classify
    ClassifyOptions cls;
    auto* classify = app.add_subcommand("classify", "Cross-validated BLR/SVM/RFC over all feature sets, plus PCA");
    classify->add_option("features", cls.features_path, "Features CSV")->required();
    classify->add_option("labels", cls.labels_path, "Labels CSV from `rank`")->required();
    classify->add_option("outdir", cls.outdir, "Output directory")->required();
    classify->add_option("--seed", cls.seed, "Master seed")->default_val(42);
    classify->add_option("--folds", cls.folds, "Cross-validation folds")->default_val(10);
    classify->add_option("--trees", cls.hp.rfc_trees, "Random forest size")->default_val(100);
    classify->add_option("--max-features", cls.hp.rfc_max_features, "Features per split (0 = sqrt(d))")
        ->default_val(0);
    classify->add_option("--svm-c", cls.hp.svm_c, "SVM regularisation C")->default_val(1.0);
    classify->add_option("--svm-epochs", cls.hp.svm_epochs, "SVM passes over the data")->default_val(100);
    classify->add_option("--blr-tol", cls.hp.blr_tol, "BLR gradient-norm tolerance")->default_val(1e-8);
    classify->add_option("--blr-max-iter", cls.hp.blr_max_iter, "BLR iteration cap")->default_val(5000);

    // synth
    SynthSpec spec;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Generate a planted-signal synthetic corpus");
    synth->add_option("outdir", synth_out, "Output directory")->required();
    synth->add_option("--terms", spec.n_terms, "Number of terms")->default_val(60);
    synth->add_option("--records-per-term", spec.records_per_term, "Records per term")->default_val(300);
    synth->add_option("--seed", spec.seed, "Seed")->default_val(1);
    synth->add_option("--signal", spec.signal, "Class separation in [0,1]")->default_val(1.0)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--controversial-fraction", spec.controversial_fraction, "Planted positive share")
        ->default_val(0.58)
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--raters", spec.raters, "Raters per term")->default_val(5);

    // class-table
    ClassTableOptions ct;
    int show_class = -1;
    auto* table = app.add_subcommand("class-table", "Export the 212 size-3/4 digraph classes");
    table->add_option("--out", ct.out, "Write CSV here instead of stdout");
    table->add_option("--cache", ct.cache, "Cache file (rebuilt when stale)");
    table->add_option("--show", show_class, "Print the adjacency matrix of one class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems count as input errors
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (networks->parsed()) {
            net.workers = workers;
            auto res = cmd_networks(net);
            for (const auto& f : res.parse_failures)
                std::cerr << "warning: " << net.records_path << ":" << f.line << ": " << f.message << "\n";
            std::cerr << res.summary.size() << " networks from " << res.records_in_window << " records\n";
            print_manifest(show_manifest, res.manifest);
        } else if (features->parsed()) {
            feat.global = want_global || !want_local;
            feat.local = want_local || !want_global;
            feat.workers = workers;
            auto res = cmd_features(feat);
            std::cerr << res.rows.size() << " feature rows written to " << feat.out << "\n";
            print_manifest(show_manifest, res.manifest);
        } else if (rank_cmd->parsed()) {
            auto res = cmd_rank(rank);
            std::cerr << res.partition.controversial << " controversial, " << res.partition.non_controversial
                      << " non-controversial (threshold " << rank.threshold << ")\n";
            for (const auto& [name, pct] : res.distribution) std::cerr << "  " << name << ": " << pct << "%\n";
            print_manifest(show_manifest, res.manifest);
        } else if (classify->parsed()) {
            cls.workers = workers;
            auto res = cmd_classify(cls);
            for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
            std::cerr << res.report["entries"].size() << " report entries written to " << cls.outdir << "\n";
            print_manifest(show_manifest, res.manifest);
        } else if (synth->parsed()) {
            print_manifest(show_manifest, cmd_synth(spec, synth_out));
        } else if (table->parsed()) {
            std::string csv;
            auto m = cmd_class_table(ct, csv);
            if (show_class >= 0)
                std::cout << class_table().render(show_class);
            else if (ct.out.empty())
                std::cout << csv;
            print_manifest(show_manifest, m);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
