#pragma once

#include <stdexcept>
#include <string>

#include "qrm/grid.hpp"

namespace qrm {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

Format parse_format(const std::string& s);

/// Shortest-free fixed format: 17 significant digits, round-trips exactly.
std::string format_double(double v);

/// CSV: "# key: value" metadata lines, header row, one row per point; missing
/// values are empty fields and a trailing "missing_reason" column is added
/// when any point is incomplete.
std::string to_csv(const GridResult& g);

/// JSON object {"meta": {...}, "data": {"axes": [...], "columns": [...], "rows": [[...]], "missing": {...}}}.
/// Meta values that are themselves JSON objects are embedded as objects.
std::string to_json(const GridResult& g);

std::string serialize(const GridResult& g, Format f);

/// Parse what to_json produced.
GridResult parse_json_result(const std::string& text);

/// "-" writes to stdout.
void write_output(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace qrm
