#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tsphen::csv {

/// Shortest text that parses back to exactly the same double (17
/// significant digits); nan and inf spell out as "nan"/"inf"/"-inf".
std::string format_double(double value);

/// Strict double parse of a whole field. Empty fields and the spellings
/// nan/na (any case) give NaN, the missing-value marker. Throws ConfigError
/// on anything else unparseable.
double parse_double(const std::string& field);

/// In-memory comma-separated table. All I/O goes through read_csv /
/// write_csv so quoting rules live in one place.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Parses a comma-separated file with a header line. Handles RFC-4180
/// double-quoted fields (embedded commas, quotes, newlines) and CRLF.
/// Throws IoError when unreadable, ConfigError on ragged rows.
Table read_csv(const std::filesystem::path& path);

/// Serializes and writes the table via write_text_atomic, quoting fields
/// that need it.
void write_csv_atomic(const std::filesystem::path& path, const Table& table);

/// Whole-file atomic write: content goes to a sibling temp file which is
/// then renamed over the target, so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Reads an entire file into a string. Throws IoError.
std::string read_text(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a byte string, as fixed-width hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace tsphen::csv
