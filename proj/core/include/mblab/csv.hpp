#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mblab/blockbasis.hpp"

namespace mblab {

/// Shortest decimal string that reads back to the same double.
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    void write(std::ostream& out) const;
    std::string str() const;
};

/// One value per line; a non-numeric first line is taken as a header.
std::vector<double> read_column_csv(const std::filesystem::path& path);

/// A single line of comma-separated 1-based images.
std::vector<std::size_t> read_permutation_csv(const std::filesystem::path& path);

/// Square matrix, one comma-separated row per line.
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace mblab
