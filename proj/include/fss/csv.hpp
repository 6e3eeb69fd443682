#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fss::csv {

// Minimal RFC-4180-ish CSV: comma separator, double-quote escaping, "\n"
// line endings on output, CRLF tolerated on input.

std::string escape_field(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Parses a whole file. Throws fss::Error (Errc::MissingFile / SchemaError)
// on unreadable input or an unterminated quote.
Table read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const Table& table);

} // namespace fss::csv
