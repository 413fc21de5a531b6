#include "termgraph/ingest.hpp"

#include "termgraph/error.hpp"
#include "termgraph/util.hpp"

#include <json.hpp>

#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace termgraph {

using nlohmann::json;

std::string_view kind_name(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::Mention: return "mention";
        case InteractionKind::Reply: return "reply";
        case InteractionKind::QuoteRetweet: return "quote";
    }
    return "unknown";
}

std::optional<InteractionKind> kind_from_name(std::string_view name) {
    for (auto k : kAllKinds)
        if (kind_name(k) == name) return k;
    return std::nullopt;
}

namespace {

std::string required_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw std::runtime_error(std::string("missing field '") + key + "'");
    if (!it->is_string()) throw std::runtime_error(std::string("field '") + key + "' is not a string");
    return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw std::runtime_error(std::string("field '") + key + "' is not a string");
    auto s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return s;
}

InteractionRecord record_from_json(const json& obj) {
    if (!obj.is_object()) throw std::runtime_error("line is not a JSON object");
    InteractionRecord r;
    r.post_id = required_string(obj, "post_id");
    r.author = required_string(obj, "author");
    r.text = required_string(obj, "text");
    r.timestamp = required_string(obj, "timestamp");
    if (r.post_id.empty()) throw std::runtime_error("empty post_id");
    if (r.author.empty()) throw std::runtime_error("empty author");
    if (!parse_iso8601(r.timestamp, r.epoch_seconds))
        throw std::runtime_error("timestamp '" + r.timestamp + "' is not ISO-8601");
    if (auto it = obj.find("mentioned"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw std::runtime_error("field 'mentioned' is not an array");
        for (const auto& m : *it) {
            if (!m.is_string()) throw std::runtime_error("non-string entry in 'mentioned'");
            if (!m.get_ref<const std::string&>().empty()) r.mentioned.push_back(m.get<std::string>());
        }
    }
    r.reply_to_author = optional_string(obj, "reply_to_author");
    r.quoted_author = optional_string(obj, "quoted_author");
    return r;
}

bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

ParseResult parse_records(std::string_view jsonl, const ParseOptions& options) {
    ParseResult result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < jsonl.size()) {
        std::size_t end = jsonl.find('\n', pos);
        if (end == std::string_view::npos) end = jsonl.size();
        std::string_view line = jsonl.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (is_blank(line)) continue;
        ++result.non_blank_lines;
        try {
            result.records.push_back(record_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            result.failures.push_back({line_no, e.what()});
        }
    }
    if (result.non_blank_lines > 0) {
        double frac = static_cast<double>(result.failures.size()) / static_cast<double>(result.non_blank_lines);
        if (frac > options.max_malformed_fraction) {
            std::string msg = std::to_string(result.failures.size()) + " of " +
                              std::to_string(result.non_blank_lines) + " lines malformed";
            for (std::size_t i = 0; i < result.failures.size() && i < 5; ++i)
                msg += "; line " + std::to_string(result.failures[i].line) + ": " + result.failures[i].message;
            throw InputError(msg);
        }
    }
    return result;
}

std::string record_to_json(const InteractionRecord& r) {
    json obj = {{"post_id", r.post_id}, {"author", r.author}, {"text", r.text},
                {"mentioned", r.mentioned}, {"timestamp", r.timestamp}};
    if (r.reply_to_author) obj["reply_to_author"] = *r.reply_to_author;
    if (r.quoted_author) obj["quoted_author"] = *r.quoted_author;
    return obj.dump();
}

namespace {

bool is_alnum_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_hashtag_byte(unsigned char c) { return is_alnum_byte(c) || c == '_'; }

}  // namespace

bool term_matches(std::string_view text, std::string_view term) {
    if (term.empty()) return false;
    const std::string t = to_lower_ascii(text);
    const std::string needle = to_lower_ascii(term);
    const bool hashtag = needle.front() == '#';
    for (std::size_t pos = t.find(needle); pos != std::string::npos; pos = t.find(needle, pos + 1)) {
        std::size_t after = pos + needle.size();
        if (hashtag) {
            if (after == t.size() || !is_hashtag_byte(static_cast<unsigned char>(t[after]))) return true;
        } else {
            bool left_ok = pos == 0 || !is_alnum_byte(static_cast<unsigned char>(t[pos - 1]));
            bool right_ok = after == t.size() || !is_alnum_byte(static_cast<unsigned char>(t[after]));
            if (left_ok && right_ok) return true;
        }
    }
    return false;
}

TermNetworkSet build_term_networks(const std::vector<InteractionRecord>& records, const std::string& term,
                                   bool audit) {
    TermNetworkSet set;
    set.term = term;
    std::array<std::vector<HandlePair>, 3> pairs;
    std::array<EdgeProvenance, 3> prov;
    auto add = [&](InteractionKind kind, const InteractionRecord& r, const std::string& target) {
        auto& p = pairs[static_cast<int>(kind)];
        p.emplace_back(r.author, target);
        if (audit && r.author != target) prov[static_cast<int>(kind)][p.back()].push_back(r.post_id);
    };
    for (const auto& r : records) {
        if (!term_matches(r.text, term)) continue;
        ++set.matched_records;
        for (const auto& m : r.mentioned) add(InteractionKind::Mention, r, m);
        if (r.reply_to_author) add(InteractionKind::Reply, r, *r.reply_to_author);
        if (r.quoted_author) add(InteractionKind::QuoteRetweet, r, *r.quoted_author);
    }
    for (int k = 0; k < 3; ++k) set.graphs[k] = build_graph(pairs[k]);
    if (audit) set.provenance = std::move(prov);
    return set;
}

std::vector<TermNetworkSet> build_corpus(const std::vector<InteractionRecord>& records,
                                         const std::vector<std::string>& terms, bool audit, int workers) {
    std::set<std::string> seen;
    for (const auto& t : terms) {
        if (t.empty()) throw InputError("empty term");
        if (!seen.insert(to_lower_ascii(t)).second) throw InputError("duplicate term (case-insensitive): " + t);
    }
    std::vector<TermNetworkSet> out(terms.size());
    const long n = static_cast<long>(terms.size());
#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (long i = 0; i < n; ++i) out[i] = build_term_networks(records, terms[i], audit);
    (void)workers;
    return out;
}

std::vector<std::string> parse_terms_file(std::string_view text) {
    std::vector<std::string> terms;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.starts_with("//")) continue;
        terms.emplace_back(line);
    }
    return terms;
}

}  // namespace termgraph
