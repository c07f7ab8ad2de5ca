#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "circreg/sample.hpp"

namespace circreg {

// Raw contents of a dataset CSV: header `predictor,response` with an
// optional trailing `group` column. Group labels are mapped to indices
// 1..I in order of first appearance.
struct DatasetFile {
    std::vector<double> predictors;
    std::vector<double> responses;
    std::vector<std::size_t> groups;        // empty when the file has no group column
    std::vector<std::string> group_labels;  // label for index i at position i - 1

    bool has_groups() const { return !groups.empty(); }
};

// Parses a dataset CSV (LF or CRLF, UTF-8, optional BOM). Throws ParseError
// with a 1-based line number on malformed input.
DatasetFile read_dataset_csv(const std::string& path);

// Builds samples from parsed file contents; circular values are interpreted
// as radians and wrapped on construction.
RegressionSample build_regression_sample(const DatasetFile& file, VariableKind predictor_kind,
                                         VariableKind response_kind);
GroupedSample build_grouped_sample(const DatasetFile& file, VariableKind predictor_kind,
                                   VariableKind response_kind);

// Shortest-width decimal form that round-trips the value (%.17g).
std::string format_double(double value);

// Writes via a temp file in the same directory plus rename, so readers
// never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

}  // namespace circreg
