#pragma once

#include <map>
#include <string>

#include "qrm/model.hpp"

namespace qrm {

/// Everything a CLI run depends on, kept as the raw strings the user typed so
/// the run can be replayed exactly.
struct RunConfig {
    std::string subcommand;
    std::map<std::string, std::string> params;   // omega Omega g1 g2 epsilon
    std::map<std::string, std::string> options;  // subcommand specific
    std::string output = "-";
    std::string format = "csv";
    int cutoff = 0;
    int threads = 0;

    std::string to_json() const;
    static RunConfig from_json(const std::string& text);

    bool operator==(const RunConfig&) const = default;
};

/// A coupling value: plain number (absolute energy), or a number followed by
/// "gs" or "gT" meaning multiples of sqrt(omega Omega)/2 or omega/4.
double parse_energy(const std::string& raw, double gs, double gT);

/// Resolve the five parameters; defaults omega = 1, everything else 0.
ModelParams resolve_params(const std::map<std::string, std::string>& raw);

/// Config recovered from an output file written by the CLI (CSV header or JSON meta).
RunConfig config_from_output(const std::string& text);

}  // namespace qrm
