#include "qrm/grid.hpp"

#include <cmath>

#include "qrm/error.hpp"

namespace qrm {

std::vector<double> Axis::values() const {
    if (count < 1) throw ParameterError("axis '" + name + "' needs at least 1 point");
    if (count == 1) {
        if (start != stop) throw ParameterError("single-point axis '" + name + "' needs start == stop");
        return {start};
    }
    std::vector<double> v(count);
    if (log) {
        if (!(start > 0 && stop > 0)) throw ParameterError("log axis '" + name + "' needs positive bounds");
        const double a = std::log(start), b = std::log(stop);
        for (int i = 0; i < count; ++i) v[i] = std::exp(a + (b - a) * i / (count - 1));
    } else {
        for (int i = 0; i < count; ++i) v[i] = start + (stop - start) * i / (count - 1);
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

std::size_t GridResult::points() const {
    if (axes.empty()) return values.size();
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
}

std::vector<double> GridResult::coordinates(std::size_t point) const {
    std::vector<double> c(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
        c[k] = axes[k][point % axes[k].size()];
        point /= axes[k].size();
    }
    return c;
}

void GridResult::set_meta(const std::string& key, const std::string& value) {
    for (auto& kv : meta)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    meta.emplace_back(key, value);
}

const std::string* GridResult::find_meta(const std::string& key) const {
    for (const auto& kv : meta)
        if (kv.first == key) return &kv.second;
    return nullptr;
}

GridResult scalar_result(const std::vector<std::string>& columns, const std::vector<double>& row) {
    GridResult g;
    g.columns = columns;
    g.values.push_back(row);
    g.reasons.emplace_back();
    return g;
}

}  // namespace qrm
