#ifndef TERMGRAPH_UTIL_HPP
#define TERMGRAPH_UTIL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace termgraph {

// Shortest round-trip decimal representation; identical bytes for identical doubles.
std::string format_double(double v);

// Strict parse; throws InputError naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
long long parse_int(std::string_view s, std::string_view what);

std::string to_lower_ascii(std::string_view s);

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Reads a whole file, transparently inflating it when the name ends in ".gz".
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view data);

// splitmix64 step; used to derive independent per-task seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Seconds since the Unix epoch for an ISO-8601 timestamp. Accepts
// YYYY-MM-DD, YYYY-MM-DDTHH:MM[:SS[.fff]] with optional Z or +HH:MM offset.
// Returns false when the text is not a valid timestamp.
bool parse_iso8601(std::string_view s, std::int64_t& epoch_seconds);

}  // namespace termgraph

#endif
