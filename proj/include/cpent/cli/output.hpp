// output.hpp — CSV / JSON serialization and atomic file writes

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cpent/sweeps.hpp"

namespace cpent::cli {

enum class Format { csv, json };

Format parse_format(const std::string& text);
std::string format_name(Format format);

// Column-oriented table of doubles; every column has the same length.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;
    nlohmann::json metadata = nlohmann::json::object();

    void add_column(std::string name, std::vector<double> values);
    std::size_t rows() const;
};

// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_double(double value);

std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

// Long format: one row per cell, x outer, z inner.
std::string to_csv(const SweepResult& result);
nlohmann::json to_json(const SweepResult& result);
nlohmann::json to_json(const SweepMetadata& metadata);
nlohmann::json to_json(const numerics::QuadratureSpec& spec);

// Writes via a sibling temporary file and rename.
void write_atomic(const std::string& path, const std::string& content);

} // namespace cpent::cli
