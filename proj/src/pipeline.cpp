#include "termgraph/pipeline.hpp"

#include "termgraph/csv.hpp"
#include "termgraph/error.hpp"
#include "termgraph/ml/evaluation.hpp"
#include "termgraph/ml/pca.hpp"
#include "termgraph/ml/preprocess.hpp"
#include "termgraph/util.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termgraph {

namespace fs = std::filesystem;
using nlohmann::json;

RunManifest RunManifest::make(const std::string& command) {
    RunManifest m;
    m.body = {{"tool", "termgraph"}, {"version", kToolVersion}, {"command", command},
              {"class_table_sha256", class_table().content_hash()}, {"inputs", json::object()}};
    return m;
}

void RunManifest::add_input(const std::string& role, const std::string& path) {
    body["inputs"][role] = {{"path", path}, {"sha256", sha256_hex(read_file(path))}};
}

std::string RunManifest::dump() const { return body.dump(); }
std::string RunManifest::hash() const { return sha256_hex(dump()); }

json RunManifest::with_hash() const {
    json j = body;
    j["manifest_sha256"] = hash();
    return j;
}

namespace {

void write_manifest(const RunManifest& m, const std::string& path) { write_file(path, m.with_hash().dump(2) + "\n"); }

}  // namespace

std::string encode_term(std::string_view term) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : term) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
            c == '-') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::vector<InteractionRecord> filter_window(std::vector<InteractionRecord> records,
                                             const std::optional<std::string>& from,
                                             const std::optional<std::string>& to) {
    if (!from && !to) return records;
    auto bound = [](const std::string& s, bool upper) {
        std::int64_t t = 0;
        if (!parse_iso8601(s, t)) throw InputError("invalid window bound '" + s + "'");
        if (upper && s.size() == 10) t += 86399;  // bare date: through end of day
        return t;
    };
    const std::int64_t lo = from ? bound(*from, false) : INT64_MIN;
    const std::int64_t hi = to ? bound(*to, true) : INT64_MAX;
    if (lo > hi) throw InputError("empty date window");
    std::erase_if(records, [&](const InteractionRecord& r) { return r.epoch_seconds < lo || r.epoch_seconds > hi; });
    return records;
}

// --- networks ---------------------------------------------------------------

NetworksResult cmd_networks(const NetworksOptions& opt) {
    NetworksResult res;
    res.manifest = RunManifest::make("networks");
    res.manifest.add_input("records", opt.records_path);
    res.manifest.add_input("terms", opt.terms_path);
    res.manifest.body["window"] = {{"from", opt.from ? json(*opt.from) : json(nullptr)},
                                   {"to", opt.to ? json(*opt.to) : json(nullptr)}};
    res.manifest.body["audit"] = opt.audit;
    res.manifest.body["max_malformed_fraction"] = opt.max_malformed_fraction;

    const auto terms = parse_terms_file(read_file(opt.terms_path));
    if (terms.empty()) throw InputError("terms file " + opt.terms_path + " contains no terms");
    auto parsed = parse_records(read_file(opt.records_path), {opt.max_malformed_fraction});
    res.parse_failures = std::move(parsed.failures);
    auto records = filter_window(std::move(parsed.records), opt.from, opt.to);
    res.records_in_window = records.size();

    const auto corpus = build_corpus(records, terms, opt.audit, opt.workers);
    const fs::path out(opt.outdir);
    fs::create_directories(out / "edges");
    std::string summary = "term,interaction,file,nodes,edges,matched_records\n";
    for (const auto& set : corpus) {
        for (auto kind : kAllKinds) {
            const auto& g = set.graph(kind);
            const std::string rel = "edges/" + encode_term(set.term) + "__" + std::string(kind_name(kind)) + ".csv";
            write_file((out / rel).string(), edge_list_csv(g));
            if (set.provenance) {
                std::string prov = "src_handle,dst_handle,post_id\n";
                for (const auto& [edge, posts] : (*set.provenance)[static_cast<int>(kind)])
                    for (const auto& p : posts) prov += csv::join({edge.first, edge.second, p}) + "\n";
                write_file((out / ("edges/" + encode_term(set.term) + "__" + std::string(kind_name(kind)) +
                                   ".provenance.csv"))
                               .string(),
                           prov);
            }
            NetworkSummaryRow row{set.term, kind, rel, g.node_count(), g.edge_count(), set.matched_records};
            summary += csv::join({row.term, std::string(kind_name(kind)), row.file, std::to_string(row.nodes),
                                  std::to_string(row.edges), std::to_string(row.matched_records)}) +
                       "\n";
            res.summary.push_back(std::move(row));
        }
    }
    write_file((out / "summary.csv").string(), summary);
    write_manifest(res.manifest, (out / "manifest.json").string());
    return res;
}

// --- features ---------------------------------------------------------------

namespace {

std::string class_column(char prefix, int c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%c%03d", prefix, c);
    return buf;
}

}  // namespace

std::vector<std::string> features_header(bool global, bool local) {
    std::vector<std::string> h = {"term", "interaction"};
    if (global) {
        for (auto n : kGlobalFeatureNames) h.emplace_back(n);
        for (auto n : kGlobalFeatureNames) h.push_back("def_" + std::string(n));
    }
    if (local) {
        h.push_back("total");
        for (int c = 0; c < kClassCount; ++c) h.push_back(class_column('c', c));
        for (int c = 0; c < kClassCount; ++c) h.push_back(class_column('n', c));
    }
    return h;
}

NetworkFeatures compute_network_features(const std::string& term, InteractionKind kind, const DirectedGraph& g,
                                         bool global, bool local) {
    NetworkFeatures f{term, kind, {}, {}};
    if (global) f.global = global_feature_vector(g);
    if (local) f.census = census(g);
    return f;
}

std::string features_csv(const std::vector<NetworkFeatures>& rows, bool global, bool local) {
    std::string out = csv::join(features_header(global, local)) + "\n";
    for (const auto& r : rows) {
        csv::Row fields = {r.term, std::string(kind_name(r.kind))};
        if (global) {
            for (double v : r.global.values) fields.push_back(format_double(v));
            for (bool d : r.global.defined) fields.push_back(d ? "1" : "0");
        }
        if (local) {
            fields.push_back(std::to_string(r.census.total));
            for (auto c : r.census.counts) fields.push_back(std::to_string(c));
            for (double v : r.census.normalized) fields.push_back(format_double(v));
        }
        out += csv::join(fields) + "\n";
    }
    return out;
}

FeaturesResult cmd_features(const FeaturesOptions& opt) {
    if (!opt.global && !opt.local) throw InputError("features: select --global and/or --local");
    const fs::path dir(opt.networks_dir);
    const std::string summary_path = (dir / "summary.csv").string();
    auto rows = csv::parse_with_header(read_file(summary_path),
                                       {"term", "interaction", "file", "nodes", "edges", "matched_records"},
                                       summary_path);
    FeaturesResult res;
    res.manifest = RunManifest::make("features");
    res.manifest.add_input("summary", summary_path);
    res.manifest.body["global"] = opt.global;
    res.manifest.body["local"] = opt.local;

    struct Job {
        std::string term;
        InteractionKind kind;
        std::string path;
    };
    std::vector<Job> jobs;
    std::set<std::pair<std::string, int>> seen;
    for (const auto& r : rows) {
        auto kind = kind_from_name(r[1]);
        if (!kind) throw InputError(summary_path + ": unknown interaction '" + r[1] + "'");
        if (!seen.emplace(r[0], static_cast<int>(*kind)).second)
            throw InputError(summary_path + ": duplicate network " + r[0] + "/" + r[1]);
        jobs.push_back({r[0], *kind, (dir / r[2]).string()});
    }
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        if (a.term != b.term) return a.term < b.term;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    json edge_hashes = json::object();
    std::vector<std::string> texts(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        texts[i] = read_file(jobs[i].path);
        edge_hashes[jobs[i].term + "/" + std::string(kind_name(jobs[i].kind))] = sha256_hex(texts[i]);
    }
    res.manifest.body["inputs"]["edge_lists"] = edge_hashes;

    res.rows.resize(jobs.size());
    std::vector<std::string> errors(jobs.size());
    const long n = static_cast<long>(jobs.size());
#ifdef _OPENMP
    const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            auto g = parse_edge_list_csv(texts[i], jobs[i].path);
            res.rows[i] = compute_network_features(jobs[i].term, jobs[i].kind, g, opt.global, opt.local);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw InputError("corrupt edge file " + jobs[i].path + ": " + errors[i]);

    write_file(opt.out, features_csv(res.rows, opt.global, opt.local));
    write_manifest(res.manifest, opt.out + ".manifest.json");
    return res;
}

// --- rank -------------------------------------------------------------------

RankResult cmd_rank(const RankOptions& opt) {
    if (!(opt.threshold >= 0.0)) throw InputError("threshold must be >= 0");
    RankResult res;
    res.manifest = RunManifest::make("rank");
    res.manifest.add_input("ratings", opt.ratings_path);
    res.manifest.body["threshold"] = opt.threshold;
    auto rows = parse_ratings_csv(read_file(opt.ratings_path), opt.ratings_path);
    res.aggregates = aggregate_ratings(rows);
    res.partition = partition_terms(res.aggregates, opt.threshold);
    res.distribution = label_distribution(rows);
    write_file(opt.out, labels_csv(res.aggregates, res.partition));
    write_manifest(res.manifest, opt.out + ".manifest.json");
    return res;
}

// --- classify -----------------------------------------------------------------

namespace {

json metric_json(const ml::MetricValue& m) { return m.defined ? json(m.value) : json(nullptr); }

json metrics_json(const ml::Metrics& m) {
    return {{"accuracy", metric_json(m.accuracy)},       {"f1", metric_json(m.f1)},
            {"precision", metric_json(m.precision)},     {"recall", metric_json(m.recall)},
            {"sensitivity", metric_json(m.sensitivity)}, {"specificity", metric_json(m.specificity)},
            {"ppv", metric_json(m.ppv)},                 {"npv", metric_json(m.npv)}};
}

json hyperparameters_json(ml::ClassifierKind kind, const ml::Hyperparameters& hp) {
    switch (kind) {
        case ml::ClassifierKind::Blr: return {{"tol", hp.blr_tol}, {"max_iter", hp.blr_max_iter}};
        case ml::ClassifierKind::Svm: return {{"C", hp.svm_c}, {"epochs", hp.svm_epochs}};
        case ml::ClassifierKind::Rfc:
            return {{"trees", hp.rfc_trees},
                    {"max_features", hp.rfc_max_features == 0 ? json("sqrt") : json(hp.rfc_max_features)},
                    {"min_samples_split", hp.rfc_min_samples_split}, {"criterion", "gini"}, {"bootstrap", true}};
    }
    return json::object();
}

struct ParsedFeatures {
    std::map<std::string, ml::TermFeatures> by_term;
    std::vector<std::string> global_names;
    std::vector<std::string> local_names;
};

ParsedFeatures read_features(const std::string& path) {
    auto rows = csv::parse(read_file(path));
    if (rows.empty()) throw InputError(path + ": empty features file");
    const auto header = rows.front();
    bool global = false, local = false;
    for (bool g : {false, true})
        for (bool l : {false, true})
            if ((g || l) && header == features_header(g, l)) {
                global = g;
                local = l;
            }
    if (!global && !local) throw InputError(path + ": unrecognised features header");
    ParsedFeatures pf;
    if (global)
        for (auto n : kGlobalFeatureNames) pf.global_names.emplace_back(n);
    if (local)
        for (int c = 0; c < kClassCount; ++c) pf.local_names.push_back(class_column('n', c));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != header.size()) throw InputError(path + ": line " + std::to_string(i + 1) + " has wrong width");
        auto kind = kind_from_name(r[1]);
        if (!kind) throw InputError(path + ": unknown interaction '" + r[1] + "'");
        auto& slot = pf.by_term[r[0]][static_cast<int>(*kind)];
        std::size_t c = 2;
        if (global) {
            std::vector<double> v;
            for (std::size_t j = 0; j < kGlobalFeatureCount; ++j) v.push_back(parse_double(r[c + j], header[c + j]));
            slot.global = std::move(v);
            c += 2 * kGlobalFeatureCount;
        }
        if (local) {
            c += 1 + kClassCount;  // skip total and raw counts
            std::vector<double> v;
            for (int j = 0; j < kClassCount; ++j) v.push_back(parse_double(r[c + j], header[c + j]));
            slot.local = std::move(v);
        }
    }
    return pf;
}

std::string pca_stem(const std::string& dataset_name) {
    std::string s = dataset_name;
    std::replace(s.begin(), s.end(), '/', '_');
    return s;
}

}  // namespace

ClassifyResult cmd_classify(const ClassifyOptions& opt) {
    ClassifyResult res;
    res.manifest = RunManifest::make("classify");
    res.manifest.add_input("features", opt.features_path);
    res.manifest.add_input("labels", opt.labels_path);
    res.manifest.body["seed"] = opt.seed;
    res.manifest.body["folds"] = opt.folds;
    res.manifest.body["hyperparameters"] = {{"BLR", hyperparameters_json(ml::ClassifierKind::Blr, opt.hp)},
                                            {"SVM", hyperparameters_json(ml::ClassifierKind::Svm, opt.hp)},
                                            {"RFC", hyperparameters_json(ml::ClassifierKind::Rfc, opt.hp)}};

    auto features = read_features(opt.features_path);
    auto labeled = parse_labels_csv(read_file(opt.labels_path), opt.labels_path);
    std::vector<ml::LabeledRow> labels;
    for (const auto& l : labeled) labels.push_back({l.term, l.label == Label::Controversial ? 1 : 0});
    std::sort(labels.begin(), labels.end(), [](const auto& a, const auto& b) { return a.term < b.term; });
    std::set<std::string> labeled_terms;
    for (const auto& l : labels) labeled_terms.insert(l.term);
    for (const auto& [term, _] : features.by_term)
        if (!labeled_terms.count(term)) res.warnings.push_back("features for unlabelled term ignored: " + term);

    auto datasets = ml::assemble_feature_sets(features.by_term, labels, features.global_names, features.local_names);

    const fs::path out(opt.outdir);
    fs::create_directories(out / "pca");
    json entries = json::array();
    json pca = json::object();
    static const char* kOrder[] = {"global/mention", "global/quote", "global/reply", "global/combined",
                                   "local/mention",  "local/quote",  "local/reply",  "local/combined"};
    ml::Hyperparameters hp = opt.hp;
    hp.workers = opt.workers;
    for (const char* name : kOrder) {
        auto it = datasets.find(name);
        if (it == datasets.end()) continue;
        const auto& ds = it->second;
        for (auto kind : {ml::ClassifierKind::Blr, ml::ClassifierKind::Svm, ml::ClassifierKind::Rfc}) {
            auto rep = ml::cross_validate(ds, kind, hp, {opt.folds, opt.seed, opt.workers});
            entries.push_back({{"classifier", rep.classifier_name},
                               {"feature_set", rep.feature_set_name},
                               {"rows", ds.X.rows()},
                               {"cols", ds.X.cols()},
                               {"positive_class", "controversial"},
                               {"metrics", metrics_json(rep.metrics)},
                               {"metrics_positive_non_controversial", metrics_json(rep.metrics_swapped)},
                               {"fold_mean_metrics", metrics_json(rep.fold_mean)},
                               {"confusion",
                                {{"tp", rep.confusion.tp}, {"fp", rep.confusion.fp}, {"tn", rep.confusion.tn},
                                 {"fn", rep.confusion.fn}}},
                               {"excluded_folds", rep.excluded_folds},
                               {"warnings", rep.warnings},
                               {"folds", rep.folds},
                               {"seed", rep.seed},
                               {"hyperparameters", hyperparameters_json(kind, opt.hp)}});
        }

        const std::string stem = pca_stem(ds.name);
        try {
            auto z = ml::standardize(ds.X);
            auto p = ml::pca2(z.X);
            std::string proj = "term,label,pc1,pc2\n";
            for (std::size_t r = 0; r < ds.X.rows(); ++r)
                proj += csv::join({ds.row_keys[r], std::string(label_name(ds.y[r] ? Label::Controversial
                                                                                   : Label::NonControversial)),
                                   format_double(p.projected(r, 0)), format_double(p.projected(r, 1))}) +
                        "\n";
            std::string load = "feature,pc1,pc2\n";
            for (std::size_t c = 0; c < ds.col_names.size(); ++c)
                load += csv::join({ds.col_names[c], format_double(p.components[0][c]),
                                   format_double(p.components[1][c])}) +
                        "\n";
            write_file((out / "pca" / (stem + "_projected.csv")).string(), proj);
            write_file((out / "pca" / (stem + "_loadings.csv")).string(), load);
            pca[ds.name] = {{"explained_variance", p.explained_variance},
                            {"explained_variance_ratio", p.explained_variance_ratio},
                            {"total_variance", p.total_variance}};
        } catch (const std::invalid_argument& e) {
            res.warnings.push_back("PCA skipped for " + ds.name + ": " + e.what());
        }
    }

    res.report = {{"manifest", res.manifest.with_hash()}, {"entries", entries}, {"pca", pca},
                  {"warnings", res.warnings}};
    write_file((out / "report.json").string(), res.report.dump(2) + "\n");
    write_manifest(res.manifest, (out / "manifest.json").string());
    return res;
}

// --- synth / class-table ------------------------------------------------------

RunManifest cmd_synth(const SynthSpec& spec, const std::string& outdir) {
    RunManifest m = RunManifest::make("synth");
    m.body["spec"] = {{"n_terms", spec.n_terms},     {"records_per_term", spec.records_per_term},
                      {"seed", spec.seed},           {"signal", spec.signal},
                      {"controversial_fraction", spec.controversial_fraction}, {"raters", spec.raters}};
    write_corpus(gen_labeled_corpus(spec), outdir);
    write_manifest(m, (fs::path(outdir) / "manifest.json").string());
    return m;
}

RunManifest cmd_class_table(const ClassTableOptions& opt, std::string& export_csv) {
    RunManifest m = RunManifest::make("class-table");
    const ClassTable table = opt.cache ? ClassTable::load_cache(*opt.cache) : class_table();
    export_csv = table.export_csv();
    if (!opt.out.empty()) {
        write_file(opt.out, export_csv);
        write_manifest(m, opt.out + ".manifest.json");
    }
    return m;
}

}  // namespace termgraph
