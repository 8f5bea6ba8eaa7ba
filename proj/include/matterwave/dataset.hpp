#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace matterwave::dataset {

// A cell is numeric or a short token (regime tag, error name, boolean).
using Cell = std::variant<double, std::string>;

struct Column {
    std::string name;
    std::string unit; // "k_p", "v_p", "2E_p", "1/k_p", "rad", "eV", "" = dimensionless
};

// Flat, deterministic table: ordered metadata, named/unit-tagged columns,
// row-major cells.  Serialized bit-identically for identical content.
struct Dataset {
    std::vector<Column> columns;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::vector<Cell>> rows;

    void meta(std::string key, std::string value);
    void meta(std::string key, double value);
};

// Round-trip-exact double formatting (17 significant digits).
std::string format_double(double v);

// CSV: '#'-prefixed metadata lines, then a header row of name[unit] labels,
// '.' decimal point and ',' separators.
std::string to_csv(const Dataset& d);

// JSON mirror with column-major arrays:
// {"schema": {"columns": [...], "metadata": {...}}, "data": {name: [...]}}.
std::string to_json(const Dataset& d);

} // namespace matterwave::dataset
