#include "qrm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "qrm/error.hpp"

namespace qrm {

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["params"] = params;
    j["options"] = options;
    j["output"] = output;
    j["format"] = format;
    j["cutoff"] = cutoff;
    j["threads"] = threads;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.params = j.at("params").get<std::map<std::string, std::string>>();
    c.options = j.at("options").get<std::map<std::string, std::string>>();
    c.output = j.at("output").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.cutoff = j.at("cutoff").get<int>();
    c.threads = j.at("threads").get<int>();
    return c;
}

double parse_energy(const std::string& raw, double gs, double gT) {
    std::string s = raw;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    double unit = 1;
    auto ends = [&](const char* suf) {
        std::string t(suf);
        return s.size() > t.size() && s.compare(s.size() - t.size(), t.size(), t) == 0;
    };
    if (ends("gs")) {
        unit = gs;
        s.resize(s.size() - 2);
    } else if (ends("gT")) {
        unit = gT;
        s.resize(s.size() - 2);
    }
    double v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto r = std::from_chars(b, e, v);
    if (s.empty() || r.ec != std::errc() || r.ptr != e) throw ParameterError("cannot parse value '" + raw + "'");
    return v * unit;
}

ModelParams resolve_params(const std::map<std::string, std::string>& raw) {
    for (const auto& [k, v] : raw) {
        (void)v;
        parse_parameter(k);
    }
    auto get = [&](const char* k, double gs, double gT) {
        auto it = raw.find(k);
        return it == raw.end() ? 0.0 : parse_energy(it->second, gs, gT);
    };
    auto it = raw.find("omega");
    const double omega = it == raw.end() ? 1.0 : parse_energy(it->second, 0, 0);
    const double Omega = get("Omega", 0, 0);
    if (omega <= 0) throw ParameterError("omega must be positive");
    const double gs = Omega >= 0 ? std::sqrt(omega * Omega) / 2 : 0, gT = omega / 4;
    auto check_gs = [&](const char* k) {
        auto i = raw.find(k);
        if (i != raw.end() && i->second.find("gs") != std::string::npos && !(gs > 0))
            throw ParameterError(std::string(k) + " in units of gs needs Omega > 0");
    };
    check_gs("g1");
    check_gs("g2");
    check_gs("epsilon");
    return ModelParams(omega, Omega, get("g1", gs, gT), get("g2", gs, gT), get("epsilon", gs, gT));
}

RunConfig config_from_output(const std::string& text) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        auto j = nlohmann::json::parse(text);
        return RunConfig::from_json(j.at("meta").at("config").dump());
    }
    std::istringstream in(text);
    std::string line;
    const std::string key = "# config: ";
    while (std::getline(in, line)) {
        if (line.rfind(key, 0) == 0) return RunConfig::from_json(line.substr(key.size()));
        if (line.empty() || line[0] != '#') break;
    }
    throw ParameterError("no run configuration found in the output header");
}

}  // namespace qrm
