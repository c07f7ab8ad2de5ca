#include "circreg/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "circreg/errors.hpp"

namespace circreg {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_number(const std::string& raw, std::size_t line_no, const char* column) {
    const std::string token = trim(raw);
    if (token.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": empty " + column + " field");
    }
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') {
        ++first;
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_no) + ": " + column +
                         " is not a finite number: '" + token + "'");
    }
    return value;
}

}  // namespace

DatasetFile read_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    if (text.rfind("\xef\xbb\xbf", 0) == 0) {
        text.erase(0, 3);
    }

    std::vector<std::string> lines;
    std::string::size_type start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string::npos) {
            nl = text.size();
        }
        std::string line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(std::move(line));
        start = nl + 1;
    }
    // A trailing newline leaves one final empty entry; drop it.
    if (!lines.empty() && lines.back().empty()) {
        lines.pop_back();
    }
    if (lines.empty()) {
        throw ParseError("line 1: missing header row");
    }

    const std::vector<std::string> header = split_fields(lines[0]);
    std::size_t ncols = 0;
    if (header.size() == 2 && lower(trim(header[0])) == "predictor" &&
        lower(trim(header[1])) == "response") {
        ncols = 2;
    } else if (header.size() == 3 && lower(trim(header[0])) == "predictor" &&
               lower(trim(header[1])) == "response" && lower(trim(header[2])) == "group") {
        ncols = 3;
    } else {
        throw ParseError("line 1: expected header 'predictor,response' or 'predictor,response,group'");
    }

    DatasetFile file;
    std::unordered_map<std::string, std::size_t> label_index;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": empty line");
        }
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != ncols) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(ncols) + " columns, found " +
                             std::to_string(fields.size()));
        }
        file.predictors.push_back(parse_number(fields[0], line_no, "predictor"));
        file.responses.push_back(parse_number(fields[1], line_no, "response"));
        if (ncols == 3) {
            const std::string label = trim(fields[2]);
            if (label.empty()) {
                throw ParseError("line " + std::to_string(line_no) + ": empty group label");
            }
            const auto [it, inserted] = label_index.emplace(label, file.group_labels.size() + 1);
            if (inserted) {
                file.group_labels.push_back(label);
            }
            file.groups.push_back(it->second);
        }
    }
    if (file.predictors.empty()) {
        throw ParseError("line 2: no data rows");
    }
    return file;
}

RegressionSample build_regression_sample(const DatasetFile& file, VariableKind predictor_kind,
                                         VariableKind response_kind) {
    return RegressionSample::make(file.predictors, file.responses, predictor_kind, response_kind);
}

GroupedSample build_grouped_sample(const DatasetFile& file, VariableKind predictor_kind,
                                   VariableKind response_kind) {
    if (!file.has_groups()) {
        throw InvalidInputError("dataset has no group column");
    }
    const std::size_t ngroups = file.group_labels.size();
    std::vector<std::vector<double>> preds(ngroups);
    std::vector<std::vector<double>> resps(ngroups);
    for (std::size_t r = 0; r < file.predictors.size(); ++r) {
        const std::size_t g = file.groups[r] - 1;
        preds[g].push_back(file.predictors[r]);
        resps[g].push_back(file.responses[r]);
    }
    std::vector<RegressionSample> groups;
    groups.reserve(ngroups);
    for (std::size_t g = 0; g < ngroups; ++g) {
        groups.push_back(RegressionSample::make(std::move(preds[g]), std::move(resps[g]),
                                                predictor_kind, response_kind));
    }
    return GroupedSample::make(std::move(groups));
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write file: " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw Error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot move temp file onto " + path + ": " + ec.message());
    }
}

}  // namespace circreg
