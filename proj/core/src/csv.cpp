#include "mblab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mblab/error.hpp"

namespace mblab {

std::string format_double(double value) {
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) fail(ErrorCode::io, "cannot format double");
    return {buffer, end};
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (!header.empty() && row.size() != header.size()) {
        fail(ErrorCode::length_mismatch, "CSV row has " + std::to_string(row.size()) +
                                             " fields, header has " +
                                             std::to_string(header.size()));
    }
    rows.push_back(std::move(row));
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out << ',';
        out << fields[k];
    }
    out << '\n';
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot open " + path.string());
    return in;
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
    if (!header.empty()) write_line(out, header);
    for (const auto& row : rows) write_line(out, row);
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

std::vector<double> read_column_csv(const std::filesystem::path& path) {
    std::ifstream in = open(path);
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto fields = split(line);
        double v = 0.0;
        if (!parse_double(fields.front(), v)) {
            if (values.empty() && line_no == 1) continue;  // header
            fail(ErrorCode::config, path.string() + ":" + std::to_string(line_no) +
                                        ": not a number: " + fields.front());
        }
        values.push_back(v);
    }
    return values;
}

std::vector<std::size_t> read_permutation_csv(const std::filesystem::path& path) {
    std::ifstream in = open(path);
    std::string line;
    while (std::getline(in, line) && trim(line).empty()) {
    }
    std::vector<std::size_t> images;
    for (const auto& field : split(trim(line))) {
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc{} || ptr != field.data() + field.size()) {
            fail(ErrorCode::config, path.string() + ":1: not an index: " + field);
        }
        images.push_back(v);
    }
    return images;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in = open(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& field : split(line)) {
            double v = 0.0;
            if (!parse_double(field, v)) {
                fail(ErrorCode::config, path.string() + ":" + std::to_string(line_no) +
                                            ": not a number: " + field);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n) {
            fail(ErrorCode::length_mismatch, path.string() + ": matrix must be square");
        }
        for (std::size_t c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    return m;
}

}  // namespace mblab
