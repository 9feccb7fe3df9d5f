#include "qrm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qrm/error.hpp"

namespace qrm {

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ParameterError("unknown output format '" + s + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string o = "\"";
    for (char c : s) {
        if (c == '"') o += '"';
        o += c == '\n' ? ' ' : c;
    }
    return o + "\"";
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) {
    if (!std::isfinite(v)) return "null";
    return format_double(v);
}

bool is_json_object(const std::string& s) {
    return !s.empty() && s.front() == '{' && nlohmann::json::accept(s);
}

}  // namespace

std::string to_csv(const GridResult& g) {
    std::ostringstream o;
    for (const auto& [k, v] : g.meta) {
        std::string line = v;
        for (auto& c : line)
            if (c == '\n') c = ' ';
        o << "# " << k << ": " << line << "\n";
    }
    bool any_missing = false;
    for (const auto& r : g.reasons) any_missing |= !r.empty();
    std::vector<std::string> header = g.axis_names;
    header.insert(header.end(), g.columns.begin(), g.columns.end());
    if (any_missing) header.push_back("missing_reason");
    for (std::size_t i = 0; i < header.size(); ++i) o << (i ? "," : "") << csv_field(header[i]);
    o << "\n";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        std::vector<std::string> f;
        for (double c : g.coordinates(i)) f.push_back(format_double(c));
        for (double v : g.values[i]) f.push_back(format_double(v));
        if (any_missing) f.push_back(csv_field(i < g.reasons.size() ? g.reasons[i] : ""));
        for (std::size_t k = 0; k < f.size(); ++k) o << (k ? "," : "") << f[k];
        o << "\n";
    }
    return o.str();
}

std::string to_json(const GridResult& g) {
    std::ostringstream o;
    o << "{\"meta\":{";
    for (std::size_t i = 0; i < g.meta.size(); ++i) {
        const auto& [k, v] = g.meta[i];
        o << (i ? "," : "") << json_string(k) << ":" << (is_json_object(v) ? v : json_string(v));
    }
    o << "},\"data\":{\"axes\":[";
    for (std::size_t k = 0; k < g.axes.size(); ++k) {
        o << (k ? "," : "") << "{\"name\":" << json_string(g.axis_names[k]) << ",\"values\":[";
        for (std::size_t i = 0; i < g.axes[k].size(); ++i) o << (i ? "," : "") << json_number(g.axes[k][i]);
        o << "]}";
    }
    o << "],\"columns\":[";
    for (std::size_t i = 0; i < g.columns.size(); ++i) o << (i ? "," : "") << json_string(g.columns[i]);
    o << "],\"rows\":[";
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        o << (i ? "," : "") << "[";
        for (std::size_t k = 0; k < g.values[i].size(); ++k) o << (k ? "," : "") << json_number(g.values[i][k]);
        o << "]";
    }
    o << "],\"missing\":{";
    bool first = true;
    for (std::size_t i = 0; i < g.reasons.size(); ++i) {
        if (g.reasons[i].empty()) continue;
        o << (first ? "" : ",") << json_string(std::to_string(i)) << ":" << json_string(g.reasons[i]);
        first = false;
    }
    o << "}}}\n";
    return o.str();
}

std::string serialize(const GridResult& g, Format f) { return f == Format::csv ? to_csv(g) : to_json(g); }

GridResult parse_json_result(const std::string& text) {
    auto j = nlohmann::ordered_json::parse(text);
    GridResult g;
    for (auto& [k, v] : j.at("meta").items()) g.meta.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    const auto& d = j.at("data");
    for (const auto& a : d.at("axes")) {
        g.axis_names.push_back(a.at("name").get<std::string>());
        g.axes.push_back(a.at("values").get<std::vector<double>>());
    }
    g.columns = d.at("columns").get<std::vector<std::string>>();
    for (const auto& r : d.at("rows")) {
        std::vector<double> row;
        for (const auto& v : r) row.push_back(v.is_null() ? std::nan("") : v.get<double>());
        g.values.push_back(std::move(row));
    }
    g.reasons.assign(g.values.size(), "");
    for (auto& [k, v] : d.at("missing").items()) g.reasons.at(std::stoul(k)) = v.get<std::string>();
    return g;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << bytes;
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace qrm
