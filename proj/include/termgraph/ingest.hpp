#ifndef TERMGRAPH_INGEST_HPP
#define TERMGRAPH_INGEST_HPP

#include "termgraph/graph.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace termgraph {

// One hydrated post.
struct InteractionRecord {
    std::string post_id;
    std::string author;
    std::string text;
    std::vector<std::string> mentioned;
    std::optional<std::string> reply_to_author;
    std::optional<std::string> quoted_author;
    std::string timestamp;
    std::int64_t epoch_seconds = 0;  // parsed from timestamp
};

enum class InteractionKind { Mention = 0, Reply = 1, QuoteRetweet = 2 };

inline constexpr std::array<InteractionKind, 3> kAllKinds = {
    InteractionKind::Mention, InteractionKind::Reply, InteractionKind::QuoteRetweet};

// "mention", "reply", "quote"
std::string_view kind_name(InteractionKind kind);
std::optional<InteractionKind> kind_from_name(std::string_view name);

struct ParseFailure {
    std::size_t line;  // 1-based
    std::string message;
};

struct ParseResult {
    std::vector<InteractionRecord> records;
    std::vector<ParseFailure> failures;
    std::size_t non_blank_lines = 0;
};

struct ParseOptions {
    // Parsing throws InputError when failures / non-blank lines exceeds this.
    double max_malformed_fraction = 0.10;
};

// Line-delimited JSON. Blank lines are ignored; every other line must be a
// record object or it is reported in `failures`.
ParseResult parse_records(std::string_view jsonl, const ParseOptions& options = {});

// Serialises a record as one JSONL line (no trailing newline).
std::string record_to_json(const InteractionRecord& r);

// Case-insensitive (ASCII) term matching. '#'-prefixed terms are hashtags:
// the token must be followed by end of text or a byte outside
// [A-Za-z0-9_]. Other terms are keywords delimited on both sides by a
// non-alphanumeric byte or a text boundary. Non-ASCII bytes count as word
// characters so UTF-8 letters never act as delimiters.
bool term_matches(std::string_view text, std::string_view term);

using EdgeProvenance = std::map<HandlePair, std::vector<std::string>>;

struct TermNetworkSet {
    std::string term;
    std::array<DirectedGraph, 3> graphs;  // indexed by InteractionKind
    std::size_t matched_records = 0;
    // Filled only in audit mode: surviving edge -> post ids that produced it.
    std::optional<std::array<EdgeProvenance, 3>> provenance;

    const DirectedGraph& graph(InteractionKind kind) const { return graphs[static_cast<int>(kind)]; }
};

TermNetworkSet build_term_networks(const std::vector<InteractionRecord>& records, const std::string& term,
                                   bool audit = false);

// One network set per term, in input order. Terms are processed in
// parallel over the shared read-only record list. Throws InputError on
// terms that collide after lowercasing, or on an empty term.
std::vector<TermNetworkSet> build_corpus(const std::vector<InteractionRecord>& records,
                                         const std::vector<std::string>& terms, bool audit = false,
                                         int workers = 0);

// One term per line; blank lines and lines starting with "//" ignored.
// Surrounding whitespace is trimmed.
std::vector<std::string> parse_terms_file(std::string_view text);

}  // namespace termgraph

#endif
