#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace contagion {

using CsvRow = std::vector<std::string>;

/// Deterministic double formatting shared by every CSV writer.
std::string fmt_double(double v);

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<CsvRow>& rows);

/// Reads a CSV and checks the header; a mismatch throws std::runtime_error
/// naming the offending column.
std::vector<CsvRow> read_csv_checked(const std::filesystem::path& path,
                                     const std::string& expected_header);

}  // namespace contagion
