#include "contagion/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace contagion {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<CsvRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
}

namespace {

CsvRow split_row(const std::string& line) {
    CsvRow row;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) row.push_back(field);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    return row;
}

}  // namespace

std::vector<CsvRow> read_csv_checked(const std::filesystem::path& path,
                                     const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    CsvRow have = split_row(line);
    CsvRow want = split_row(expected_header);
    for (std::size_t i = 0; i < std::max(have.size(), want.size()); ++i) {
        std::string h = i < have.size() ? have[i] : "<missing>";
        std::string w = i < want.size() ? want[i] : "<unexpected>";
        if (h != w) {
            throw std::runtime_error(path.string() + ": schema mismatch at column " +
                                     std::to_string(i + 1) + ": expected '" + w +
                                     "', found '" + h + "'");
        }
    }
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        rows.push_back(split_row(line));
    }
    return rows;
}

}  // namespace contagion
