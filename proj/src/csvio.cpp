#include "tsphen/csvio.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "tsphen/types.hpp"

namespace tsphen::csv {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
    std::string trimmed = field;
    while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t'))
        trimmed.pop_back();
    std::size_t start = 0;
    while (start < trimmed.size() && (trimmed[start] == ' ' || trimmed[start] == '\t')) ++start;
    trimmed = trimmed.substr(start);

    if (trimmed.empty()) return std::nan("");
    std::string lower = trimmed;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "nan" || lower == "na" || lower == "-nan") return std::nan("");
    if (lower == "inf" || lower == "+inf") return std::numeric_limits<double>::infinity();
    if (lower == "-inf") return -std::numeric_limits<double>::infinity();

    double value = 0.0;
    const char* first = trimmed.data();
    const char* last = first + trimmed.size();
    if (*first == '+') ++first;  // from_chars rejects an explicit plus
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError("not a number: '" + field + "'");
    return value;
}

namespace {

// splits the whole file content into records, honoring quoted fields
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any_field = false;

    const auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        any_field = false;
    };
    const auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
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
                any_field = true;
                break;
            case ',':
                end_field();
                any_field = true;  // a comma implies a (possibly empty) next field
                break;
            case '\r':
                break;
            case '\n':
                if (!record.empty() || !field.empty() || any_field) end_record();
                break;
            default:
                field.push_back(c);
                any_field = true;
        }
    }
    if (quoted) throw ConfigError(path.string() + ": unterminated quote");
    if (!record.empty() || !field.empty() || any_field) end_record();
    return records;
}

}  // namespace

Table read_csv(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    auto records = parse_records(text, path);
    if (records.empty()) throw ConfigError(path.string() + ": empty file");

    Table table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size())
            throw ConfigError(path.string() + ": row " + std::to_string(r + 1) + " has " +
                              std::to_string(records[r].size()) + " fields, expected " +
                              std::to_string(table.header.size()));
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

namespace {

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote_if_needed(fields[i]);
    }
    out.push_back('\n');
}

}  // namespace

void write_csv_atomic(const std::filesystem::path& path, const Table& table) {
    std::string out;
    append_record(out, table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw ConfigError(path.string() + ": ragged row while writing");
        append_record(out, row);
    }
    write_text_atomic(path, out);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw IoError("cannot open for writing: " + tmp.string());
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw IoError("cannot read: " + path.string());
    std::ostringstream out;
    out << stream.rdbuf();
    if (stream.bad()) throw IoError("read failed: " + path.string());
    return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf, 16);
}

}  // namespace tsphen::csv
