#include "uniforce/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "uniforce/errors.hpp"

namespace uniforce {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool parse_number(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Dataset load_csv(const std::string& path, const LabelColumn& label_column,
                 std::optional<bool> has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw EmptyDataset("empty file: " + path);

    // Header detection: any non-numeric cell in the first row means a header,
    // unless the caller pinned it.
    std::vector<std::string> first = split_csv_line(lines[0]);
    bool header;
    if (has_header.has_value()) {
        header = *has_header;
    } else {
        header = false;
        for (const auto& c : first) {
            double tmp;
            if (!parse_number(c, tmp)) {
                header = true;
                break;
            }
        }
    }

    std::vector<std::string> names;
    size_t data_start = 0;
    if (header) {
        for (auto& c : first) names.push_back(trim(c));
        data_start = 1;
    }
    if (data_start >= lines.size()) throw EmptyDataset("no data rows in: " + path);

    const size_t ncols = split_csv_line(lines[data_start]).size();
    if (header && names.size() != ncols)
        throw ParseError("header has " + std::to_string(names.size()) + " columns but row 1 has " +
                         std::to_string(ncols));

    int label_idx = -1;
    if (label_column.name) {
        if (!header) throw UsageError("label column by name requires a header row");
        for (size_t j = 0; j < names.size(); ++j)
            if (names[j] == *label_column.name) label_idx = static_cast<int>(j);
        if (label_idx < 0) throw UsageError("label column not found: " + *label_column.name);
    } else if (label_column.index) {
        label_idx = *label_column.index;
        if (label_idx < 0 || label_idx >= static_cast<int>(ncols))
            throw UsageError("label column index out of range: " + std::to_string(label_idx));
    }

    const size_t nrows = lines.size() - data_start;
    const size_t d = label_idx >= 0 ? ncols - 1 : ncols;
    if (d == 0) throw EmptyDataset("no feature columns in: " + path);

    Dataset ds;
    ds.points.resize(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(d));
    std::vector<int> labels;
    if (label_idx >= 0) labels.reserve(nrows);

    for (size_t r = 0; r < nrows; ++r) {
        const auto cells = split_csv_line(lines[data_start + r]);
        if (cells.size() != ncols)
            throw ParseError("row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                             " columns, expected " + std::to_string(ncols));
        Eigen::Index jj = 0;
        for (size_t c = 0; c < ncols; ++c) {
            double v;
            if (!parse_number(cells[c], v))
                throw ParseError("row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                                 ": cell '" + trim(cells[c]) + "' is not numeric");
            if (!std::isfinite(v))
                throw NonFiniteValue("row " + std::to_string(r + 1) + ", column " +
                                     std::to_string(c + 1) + ": non-finite value");
            if (static_cast<int>(c) == label_idx) {
                labels.push_back(static_cast<int>(std::llround(v)));
                if (labels.back() < 0)
                    throw ParseError("row " + std::to_string(r + 1) + ": negative label id");
            } else {
                ds.points(static_cast<Eigen::Index>(r), jj++) = v;
            }
        }
    }

    if (label_idx >= 0) ds.labels = std::move(labels);
    if (header) {
        for (size_t j = 0; j < names.size(); ++j)
            if (static_cast<int>(j) != label_idx) ds.feature_names.push_back(names[j]);
    }
    return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);

    const Eigen::Index d = ds.dim();
    for (Eigen::Index j = 0; j < d; ++j) {
        if (j) out << ',';
        if (static_cast<size_t>(j) < ds.feature_names.size() && !ds.feature_names[j].empty())
            out << ds.feature_names[j];
        else
            out << 'f' << j;
    }
    if (ds.labels) out << ",label";
    out << '\n';

    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (j) out << ',';
            out << format_double(ds.points(i, j));
        }
        if (ds.labels) out << ',' << (*ds.labels)[static_cast<size_t>(i)];
        out << '\n';
    }
}

Dataset minmax_normalize(const Dataset& ds) {
    if (ds.n() < 1) throw EmptyDataset("cannot normalize an empty dataset");
    Dataset out = ds;
    const Vector lo = ds.points.colwise().minCoeff();
    const Vector hi = ds.points.colwise().maxCoeff();
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
        const double range = hi[j] - lo[j];
        if (range > 0.0)
            out.points.col(j) = (ds.points.col(j).array() - lo[j]) / range;
        else
            out.points.col(j).setZero();
    }
    return out;
}

}  // namespace uniforce
