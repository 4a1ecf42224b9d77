// config.hpp — RunConfig: everything a CLI invocation needs, with a JSON form

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "cpent/greens.hpp"
#include "cpent/media.hpp"
#include "cpent/sweeps.hpp"

namespace cpent::cli {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SurfaceConfig {
    std::string kind{"free"}; // free | perfect | drude | superconductor
    double plasma_frequency{1.37e16};
    double loss_rate{5.31e13};
    double critical_temperature{8.31};
    double reduced_temperature{0.01};
    double london_length_zero{35e-9};
    double conductivity{2e9};

    bool operator==(const SurfaceConfig&) const = default;
};

struct GeometryConfig {
    double x{1.0};
    double z{0.2};
    std::string dipoles{"xx"};
    double wavelength{kDefaultWavelength};

    bool operator==(const GeometryConfig&) const = default;
};

struct SweepConfig {
    double x_min{kDefaultXMin};
    double x_max{kDefaultXMax};
    int x_count{kDefaultGridCount};
    double z_min{kDefaultZMin};
    double z_max{kDefaultZMax};
    int z_count{kDefaultGridCount};
    std::string observable{"relative_decay"};

    bool operator==(const SweepConfig&) const = default;
};

struct TraceConfig {
    double t_max{30.0};
    int samples{301};

    bool operator==(const TraceConfig&) const = default;
};

struct OptimalConfig {
    double z_min{0.1};
    double z_max{1.5};
    double tolerance{1e-4};

    bool operator==(const OptimalConfig&) const = default;
};

struct OutputConfig {
    std::string path; // empty: stdout (reproduce: <figure>.<format>)
    std::string format{"csv"};

    bool operator==(const OutputConfig&) const = default;
};

struct QuadratureConfig {
    double relative_tolerance{numerics::QuadratureSpec{}.relative_tolerance};
    double absolute_tolerance{numerics::QuadratureSpec{}.absolute_tolerance};
    int max_subdivisions{numerics::QuadratureSpec{}.max_subdivisions};
    double evanescent_cutoff_scale{numerics::QuadratureSpec{}.evanescent_cutoff_scale};
    std::string approximation{"exact"}; // exact | nonretarded_p_only

    bool operator==(const QuadratureConfig&) const = default;
};

struct RunConfig {
    std::string command; // coeffs | decay-map | trace | optimal-z | reproduce
    std::string figure;  // reproduce only
    SurfaceConfig surface;
    GeometryConfig geometry;
    SweepConfig sweep;
    TraceConfig trace;
    OptimalConfig optimal;
    OutputConfig output;
    QuadratureConfig quadrature;

    bool operator==(const RunConfig&) const = default;

    // Range and vocabulary checks; throws ConfigError.
    void validate() const;

    media::SurfaceModel model() const;
    Geometry geometry_point() const;
    CouplingOptions coupling_options() const;
    SweepSpec sweep_spec() const;
};

// Accepts the aliases gold (drude) and niobium (superconductor).
std::string canonical_surface(const std::string& name);

nlohmann::json to_json(const RunConfig& config);
// Strict: unknown keys and wrong types are ConfigErrors. Missing keys keep
// their defaults.
RunConfig run_config_from_json(const nlohmann::json& json);
RunConfig parse_run_config(const std::string& text);
std::string serialize(const RunConfig& config);

} // namespace cpent::cli
