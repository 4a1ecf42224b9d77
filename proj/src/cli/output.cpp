#include "cpent/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace cpent::cli {

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    throw std::invalid_argument("unknown output format '" + text + "' (expected csv or json)");
}

std::string format_name(Format format) { return format == Format::csv ? "csv" : "json"; }

void Table::add_column(std::string name, std::vector<double> values) {
    if (!data.empty() && values.size() != data.front().size())
        throw std::logic_error("Table: column '" + name + "' has a different length");
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
}

std::size_t Table::rows() const { return data.empty() ? 0 : data.front().size(); }

std::string format_double(double value) {
    if (value == 0.0) value = 0.0; // drop the sign of -0
    char buffer[64];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buffer, end);
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.data.size(); ++c) {
            if (c) out += ',';
            out += format_double(table.data[c][r]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const Table& table) {
    nlohmann::json columns = nlohmann::json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) columns[table.columns[c]] = table.data[c];
    return {{"metadata", table.metadata}, {"columns", table.columns}, {"data", columns}};
}

std::string to_csv(const SweepResult& result) {
    std::string out = "x_scaled,z_scaled," + result.metadata.observable.substr(0, result.metadata.observable.find(':')) + '\n';
    for (std::size_t i = 0; i < result.x.size(); ++i)
        for (std::size_t j = 0; j < result.z.size(); ++j) {
            out += format_double(result.x[i]);
            out += ',';
            out += format_double(result.z[j]);
            out += ',';
            out += format_double(result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            out += '\n';
        }
    return out;
}

nlohmann::json to_json(const numerics::QuadratureSpec& spec) {
    return {{"relative_tolerance", spec.relative_tolerance},
            {"absolute_tolerance", spec.absolute_tolerance},
            {"max_subdivisions", spec.max_subdivisions},
            {"evanescent_cutoff_scale", spec.evanescent_cutoff_scale}};
}

nlohmann::json to_json(const SweepMetadata& m) {
    return {{"model", m.model},         {"dipoles", m.dipoles},   {"observable", m.observable},
            {"wavelength", m.wavelength}, {"quadrature", to_json(m.quadrature)},
            {"version", m.version},     {"timestamp", m.timestamp}};
}

nlohmann::json to_json(const SweepResult& result) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < result.values.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(result.values.cols()));
        for (Eigen::Index j = 0; j < result.values.cols(); ++j) row[static_cast<std::size_t>(j)] = result.values(i, j);
        rows.push_back(std::move(row));
    }
    return {{"metadata", to_json(result.metadata)}, {"x_scaled", result.x}, {"z_scaled", result.z}, {"values", rows}};
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path temp = target;
    temp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + temp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(temp, ignored);
            throw std::runtime_error("failed writing '" + temp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(temp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(temp, ignored);
        throw std::runtime_error("cannot move output into place at '" + path + "': " + ec.message());
    }
}

} // namespace cpent::cli
