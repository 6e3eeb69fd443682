#include "fss/csv.hpp"

#include <fstream>
#include <sstream>

#include "fss/errors.hpp"

namespace fss::csv {

std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += escape_field(fields[i]);
    }
    out += '\n';
    return out;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::MissingFile, path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    Table table;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any_field = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        any_field = false;
    };
    auto end_row = [&] {
        end_field();
        if (table.header.empty())
            table.header = std::move(row);
        else
            table.rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any_field = true;
                break;
            case ',':
                end_field();
                any_field = true; // next field exists even if empty
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                field += c;
                any_field = true;
        }
    }
    if (quoted)
        throw Error(Errc::SchemaError, path.string() + ": unterminated quoted field");
    if (any_field || !field.empty() || !row.empty()) end_row();
    return table;
}

void write_file(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << join_row(table.header);
    for (const auto& row : table.rows) out << join_row(row);
    if (!out) throw Error(Errc::IoError, "write failed: " + path.string());
}

} // namespace fss::csv
