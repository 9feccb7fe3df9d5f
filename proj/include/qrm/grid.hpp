#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qrm {

struct Axis {
    std::string name;
    double start = 0, stop = 0;
    int count = 2;
    bool log = false;

    std::vector<double> values() const;
};

/// Rectangular result: one row per point of the cartesian product of the
/// axes (last axis fastest), axis values first and quantities after.
/// NaN marks a missing value; reasons[i] explains it.
struct GridResult {
    std::vector<std::string> axis_names;
    std::vector<std::vector<double>> axes;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values;  // [point][column]
    std::vector<std::string> reasons;         // [point], empty when complete
    std::vector<std::pair<std::string, std::string>> meta;

    std::size_t points() const;
    /// axis coordinates of a flat point index
    std::vector<double> coordinates(std::size_t point) const;
    void set_meta(const std::string& key, const std::string& value);
    const std::string* find_meta(const std::string& key) const;
};

/// Result with no axes and one row.
GridResult scalar_result(const std::vector<std::string>& columns, const std::vector<double>& row);

}  // namespace qrm
