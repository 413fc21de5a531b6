#ifndef TERMGRAPH_CSV_HPP
#define TERMGRAPH_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace termgraph::csv {

using Row = std::vector<std::string>;

// RFC 4180 style: fields containing comma, quote or newline are quoted.
std::string escape(std::string_view field);
std::string join(const Row& fields);

// Parses a full CSV document (LF or CRLF). Empty lines are skipped.
std::vector<Row> parse(std::string_view text);

// Parses and checks the header matches `expected` exactly; returns data rows.
std::vector<Row> parse_with_header(std::string_view text, const Row& expected,
                                   const std::string& source);

}  // namespace termgraph::csv

#endif
