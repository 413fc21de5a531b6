#include "termgraph/csv.hpp"

#include "termgraph/error.hpp"

namespace termgraph::csv {

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join(const Row& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    return out;
}

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool quoted = false;
    bool any = false;  // current row has content
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                any = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any || !field.empty()) {
                    row.push_back(std::move(field));
                    rows.push_back(std::move(row));
                }
                row.clear();
                field.clear();
                any = false;
                break;
            default:
                field.push_back(c);
                any = true;
        }
    }
    if (quoted) throw InputError("unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> parse_with_header(std::string_view text, const Row& expected, const std::string& source) {
    auto rows = parse(text);
    if (rows.empty()) throw InputError(source + ": missing header (expected " + join(expected) + ")");
    if (rows.front() != expected)
        throw InputError(source + ": unexpected header '" + join(rows.front()) + "', expected '" +
                         join(expected) + "'");
    rows.erase(rows.begin());
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != expected.size())
            throw InputError(source + ": line " + std::to_string(i + 2) + " has " +
                             std::to_string(rows[i].size()) + " fields, expected " +
                             std::to_string(expected.size()));
    return rows;
}

}  // namespace termgraph::csv
