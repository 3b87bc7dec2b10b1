#pragma once

#include "levytrim/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace levytrim {

/// Shortest decimal that round-trips; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

/// RFC 4180: quotes fields containing a comma, quote, CR or LF; doubles embedded quotes.
std::string csv_escape(const std::string& field);
std::string csv_line(const std::vector<std::string>& fields);

/// Single header row followed by one line per row. Non-finite cells are written empty.
std::string table_to_csv(const Table& table);

/// Pretty-printed JSON array of reports, keys in a fixed order. runtime_ms is left out so the
/// output depends only on (check, config, seed).
std::string reports_to_json(const std::vector<VerificationReport>& reports);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace levytrim
