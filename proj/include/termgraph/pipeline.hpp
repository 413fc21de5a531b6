#ifndef TERMGRAPH_PIPELINE_HPP
#define TERMGRAPH_PIPELINE_HPP

#include "termgraph/census.hpp"
#include "termgraph/global_metrics.hpp"
#include "termgraph/ingest.hpp"
#include "termgraph/ml/classifiers.hpp"
#include "termgraph/ranking.hpp"
#include "termgraph/synth.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace termgraph {

inline constexpr const char* kToolVersion = "0.1.0";

// Run manifest: everything that determines a command's outputs. Worker
// count and output locations are deliberately absent so that reruns with
// a different degree of parallelism share a manifest.
struct RunManifest {
    nlohmann::json body;

    static RunManifest make(const std::string& command);
    void add_input(const std::string& role, const std::string& path);
    std::string dump() const;   // canonical serialisation
    std::string hash() const;   // sha256 of dump()
    nlohmann::json with_hash() const;
};

// --- networks ---------------------------------------------------------------

struct NetworksOptions {
    std::string records_path;
    std::string terms_path;
    std::string outdir;
    std::optional<std::string> from;  // inclusive; a bare date means 00:00:00Z
    std::optional<std::string> to;    // inclusive; a bare date means through 23:59:59Z
    bool audit = false;
    double max_malformed_fraction = 0.10;
    int workers = 0;
};

struct NetworkSummaryRow {
    std::string term;
    InteractionKind kind;
    std::string file;  // relative to the networks directory
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t matched_records = 0;
};

struct NetworksResult {
    std::vector<NetworkSummaryRow> summary;
    std::vector<ParseFailure> parse_failures;
    std::size_t records_in_window = 0;
    RunManifest manifest;
};

// Writes <outdir>/summary.csv, <outdir>/edges/<term>__<kind>.csv (plus
// .provenance.csv in audit mode) and <outdir>/manifest.json.
NetworksResult cmd_networks(const NetworksOptions& options);

// File-name stem for a term: bytes outside [A-Za-z0-9_.-] become %XX.
std::string encode_term(std::string_view term);

// Keeps records whose timestamp falls inside the window.
std::vector<InteractionRecord> filter_window(std::vector<InteractionRecord> records,
                                             const std::optional<std::string>& from,
                                             const std::optional<std::string>& to);

// --- features ---------------------------------------------------------------

struct FeaturesOptions {
    std::string networks_dir;
    std::string out;  // features CSV; manifest goes to <out>.manifest.json
    bool global = true;
    bool local = true;
    int workers = 0;
};

struct NetworkFeatures {
    std::string term;
    InteractionKind kind;
    GlobalFeatures global;
    CensusVector census;
};

// Header of the features CSV for the chosen blocks.
std::vector<std::string> features_header(bool global, bool local);
std::string features_csv(const std::vector<NetworkFeatures>& rows, bool global, bool local);
NetworkFeatures compute_network_features(const std::string& term, InteractionKind kind, const DirectedGraph& g,
                                         bool global, bool local);

struct FeaturesResult {
    std::vector<NetworkFeatures> rows;
    RunManifest manifest;
};
FeaturesResult cmd_features(const FeaturesOptions& options);

// --- rank -------------------------------------------------------------------

struct RankOptions {
    std::string ratings_path;
    std::string out;  // labels CSV; manifest goes to <out>.manifest.json
    double threshold = kDefaultThreshold;
};

struct RankResult {
    std::vector<RatingAggregate> aggregates;
    Partition partition;
    std::map<std::string, double> distribution;
    RunManifest manifest;
};
RankResult cmd_rank(const RankOptions& options);

// --- classify -----------------------------------------------------------------

struct ClassifyOptions {
    std::string features_path;
    std::string labels_path;
    std::string outdir;
    std::uint64_t seed = 42;
    int folds = 10;
    ml::Hyperparameters hp;
    int workers = 0;
};

struct ClassifyResult {
    nlohmann::json report;
    std::vector<std::string> warnings;
    RunManifest manifest;
};

// Runs {BLR, SVM, RFC} x every assembled feature set with k-fold CV and a
// two-component PCA per feature set. Writes <outdir>/report.json,
// <outdir>/pca/<family>_<interaction>_{projected,loadings}.csv and
// <outdir>/manifest.json.
ClassifyResult cmd_classify(const ClassifyOptions& options);

// --- synth / class-table ------------------------------------------------------

RunManifest cmd_synth(const SynthSpec& spec, const std::string& outdir);

struct ClassTableOptions {
    std::string out;                  // CSV export; empty = stdout only
    std::optional<std::string> cache;
};
RunManifest cmd_class_table(const ClassTableOptions& options, std::string& export_csv);

}  // namespace termgraph

#endif
