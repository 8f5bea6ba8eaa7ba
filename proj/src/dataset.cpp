#include "matterwave/dataset.hpp"

#include <cstdio>

#include <json.hpp>

namespace matterwave::dataset {

void Dataset::meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

void Dataset::meta(std::string key, double value) {
    metadata.emplace_back(std::move(key), format_double(value));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const Dataset& d) {
    std::string out;
    for (const auto& [k, v] : d.metadata) {
        out += "# ";
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        if (i) out += ',';
        out += d.columns[i].name;
        if (!d.columns[i].unit.empty()) {
            out += '[';
            out += d.columns[i].unit;
            out += ']';
        }
    }
    out += '\n';
    for (const auto& row : d.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            if (const double* num = std::get_if<double>(&row[i]))
                out += format_double(*num);
            else
                out += std::get<std::string>(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Dataset& d) {
    nlohmann::ordered_json j;
    auto& cols = j["schema"]["columns"];
    cols = nlohmann::ordered_json::array();
    for (const auto& c : d.columns)
        cols.push_back({{"name", c.name}, {"unit", c.unit.empty() ? "dimensionless" : c.unit}});
    auto& meta = j["schema"]["metadata"];
    meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.metadata) meta[k] = v;
    // column-major mirror of the CSV
    auto& data = j["data"];
    data = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < d.columns.size(); ++c) {
        nlohmann::ordered_json col = nlohmann::ordered_json::array();
        for (const auto& row : d.rows) {
            const auto& cell = row[c];
            if (const double* num = std::get_if<double>(&cell))
                col.push_back(*num); // non-finite values serialize as null
            else
                col.push_back(std::get<std::string>(cell));
        }
        data[d.columns[c].name] = std::move(col);
    }
    return j.dump(2) + "\n";
}

} // namespace matterwave::dataset
