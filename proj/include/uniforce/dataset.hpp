#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uniforce/types.hpp"

namespace uniforce {

// Immutable after construction; safe to share across threads.
struct Dataset {
    Matrix points;                            // N x d, every entry finite
    std::optional<std::vector<int>> labels;   // ground-truth ids, length N when present
    std::vector<std::string> feature_names;   // empty or length d

    Eigen::Index n() const { return points.rows(); }
    Eigen::Index dim() const { return points.cols(); }
};

// Selects the label column by header name or 0-based index ("name-or-index").
struct LabelColumn {
    std::optional<std::string> name;
    std::optional<int> index;

    static LabelColumn by_name(std::string s) { return {std::move(s), std::nullopt}; }
    static LabelColumn by_index(int i) { return {std::nullopt, i}; }
    bool empty() const { return !name && !index; }
};

// has_header: force header on/off; unset means auto-detect (first row with any
// non-numeric cell is treated as a header).
Dataset load_csv(const std::string& path, const LabelColumn& label_column = {},
                 std::optional<bool> has_header = std::nullopt);

// Writes features (and a final "label" column when labels are present), with a header row.
void save_csv(const Dataset& ds, const std::string& path);

// Per-feature map onto [0, 1]; constant features map to 0. Labels pass through.
Dataset minmax_normalize(const Dataset& ds);

// printf-style shortest-exact double formatting used by all CSV writers.
std::string format_double(double v);

}  // namespace uniforce
