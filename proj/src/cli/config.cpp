#include "cpent/cli/config.hpp"

#include <cmath>
#include <set>
#include <type_traits>

namespace cpent::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"coeffs", "decay-map", "trace", "optimal-z", "reproduce"};

// Reads the keys of one JSON object section into fields, rejecting keys no
// field claims.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError("config: '" + name_ + "' must be an object");
    }

    template <typename T>
    Section& field(const char* key, T& target) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return *this;
        try {
            if constexpr (std::is_same_v<T, int>) {
                if (!it->is_number_integer()) throw ConfigError("");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number()) throw ConfigError("");
            } else {
                if (!it->is_string()) throw ConfigError("");
            }
            target = it->template get<T>();
        } catch (const std::exception&) {
            throw ConfigError("config: '" + name_ + "." + key + "' has the wrong type");
        }
        return *this;
    }

    Section& claim(const char* key) {
        seen_.insert(key);
        return *this;
    }

    void finish() const {
        for (const auto& item : j_.items())
            if (!seen_.count(item.key())) throw ConfigError("config: unknown key '" + name_ + "." + item.key() + "'");
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

} // namespace

std::string canonical_surface(const std::string& name) {
    if (name == "free" || name == "perfect" || name == "drude" || name == "superconductor") return name;
    if (name == "gold") return "drude";
    if (name == "niobium") return "superconductor";
    throw ConfigError("unknown surface '" + name + "' (expected free, perfect, gold, drude, niobium, superconductor)");
}

void RunConfig::validate() const {
    require(kCommands.count(command) == 1, "unknown command '" + command + "'");
    canonical_surface(surface.kind);
    auto finite = [](double v) { return std::isfinite(v); };

    require(finite(geometry.x) && geometry.x > 0.0, "geometry: x must be > 0");
    require(finite(geometry.z) && geometry.z >= kMinimumHeight, "geometry: z must be >= 1e-3");
    require(finite(geometry.wavelength) && geometry.wavelength > 0.0, "geometry: wavelength must be > 0");
    try {
        DipoleConfig::parse(geometry.dipoles);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("geometry: ") + e.what());
    }

    require(sweep.x_count >= 1 && sweep.z_count >= 1, "sweep: counts must be >= 1");
    require(finite(sweep.x_min) && finite(sweep.x_max) && sweep.x_min > 0.0 && sweep.x_max >= sweep.x_min,
            "sweep: need 0 < x_min <= x_max");
    require(finite(sweep.z_min) && finite(sweep.z_max) && sweep.z_min >= kMinimumHeight && sweep.z_max >= sweep.z_min,
            "sweep: need 1e-3 <= z_min <= z_max");
    require(sweep.x_count > 1 || sweep.x_min == sweep.x_max, "sweep: a single x point needs x_min == x_max");
    require(sweep.z_count > 1 || sweep.z_min == sweep.z_max, "sweep: a single z point needs z_min == z_max");
    try {
        ObservableSpec::parse(sweep.observable);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }

    require(finite(trace.t_max) && trace.t_max > 0.0, "trace: t_max must be > 0");
    require(trace.samples >= 2, "trace: samples must be >= 2");

    require(finite(optimal.z_min) && finite(optimal.z_max) && optimal.z_min >= kMinimumHeight &&
                optimal.z_max > optimal.z_min,
            "optimal: need 1e-3 <= z_min < z_max");
    require(finite(optimal.tolerance) && optimal.tolerance > 0.0, "optimal: tolerance must be > 0");

    require(output.format == "csv" || output.format == "json", "output: format must be csv or json");

    require(quadrature.approximation == "exact" || quadrature.approximation == "nonretarded_p_only",
            "quadrature: approximation must be exact or nonretarded_p_only");
    try {
        coupling_options().quadrature.validate();
        media::validate(model());
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

media::SurfaceModel RunConfig::model() const {
    const std::string kind = canonical_surface(surface.kind);
    if (kind == "free") return media::FreeSpace{};
    if (kind == "perfect") return media::PerfectConductor{};
    try {
        if (kind == "drude") return media::make_drude(surface.plasma_frequency, surface.loss_rate);
        return media::make_superconductor(surface.critical_temperature,
                                          surface.reduced_temperature * surface.critical_temperature,
                                          surface.london_length_zero, surface.conductivity);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("surface: ") + e.what());
    }
}

Geometry RunConfig::geometry_point() const {
    return Geometry{geometry.x, geometry.z, DipoleConfig::parse(geometry.dipoles), geometry.wavelength};
}

CouplingOptions RunConfig::coupling_options() const {
    CouplingOptions options;
    options.quadrature = {quadrature.relative_tolerance, quadrature.absolute_tolerance, quadrature.max_subdivisions,
                          quadrature.evanescent_cutoff_scale};
    options.approximation = quadrature.approximation == "nonretarded_p_only" ? FresnelApproximation::nonretarded_p_only
                                                                             : FresnelApproximation::exact;
    return options;
}

SweepSpec RunConfig::sweep_spec() const {
    SweepSpec spec;
    spec.model = model();
    spec.dipoles = DipoleConfig::parse(geometry.dipoles);
    spec.x = {sweep.x_min, sweep.x_max, sweep.x_count};
    spec.z = {sweep.z_min, sweep.z_max, sweep.z_count};
    spec.wavelength = geometry.wavelength;
    spec.observable = ObservableSpec::parse(sweep.observable);
    spec.options = coupling_options();
    return spec;
}

nlohmann::json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["figure"] = c.figure;
    j["surface"] = {{"kind", c.surface.kind},
                    {"plasma_frequency", c.surface.plasma_frequency},
                    {"loss_rate", c.surface.loss_rate},
                    {"critical_temperature", c.surface.critical_temperature},
                    {"reduced_temperature", c.surface.reduced_temperature},
                    {"london_length_zero", c.surface.london_length_zero},
                    {"conductivity", c.surface.conductivity}};
    j["geometry"] = {{"x", c.geometry.x},
                     {"z", c.geometry.z},
                     {"dipoles", c.geometry.dipoles},
                     {"wavelength", c.geometry.wavelength}};
    j["sweep"] = {{"x_min", c.sweep.x_min}, {"x_max", c.sweep.x_max}, {"x_count", c.sweep.x_count},
                  {"z_min", c.sweep.z_min}, {"z_max", c.sweep.z_max}, {"z_count", c.sweep.z_count},
                  {"observable", c.sweep.observable}};
    j["trace"] = {{"t_max", c.trace.t_max}, {"samples", c.trace.samples}};
    j["optimal"] = {{"z_min", c.optimal.z_min}, {"z_max", c.optimal.z_max}, {"tolerance", c.optimal.tolerance}};
    j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
    j["quadrature"] = {{"relative_tolerance", c.quadrature.relative_tolerance},
                       {"absolute_tolerance", c.quadrature.absolute_tolerance},
                       {"max_subdivisions", c.quadrature.max_subdivisions},
                       {"evanescent_cutoff_scale", c.quadrature.evanescent_cutoff_scale},
                       {"approximation", c.quadrature.approximation}};
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    Section root(j, "config");
    root.field("command", c.command).field("figure", c.figure);

    auto sub = [&](const char* key, auto&& fill) {
        const auto it = j.find(key);
        if (it == j.end()) return;
        Section s(*it, key);
        fill(s);
        s.finish();
    };
    for (const char* key : {"surface", "geometry", "sweep", "trace", "optimal", "output", "quadrature"}) root.claim(key);
    root.finish();

    sub("surface", [&](Section& s) {
        s.field("kind", c.surface.kind)
            .field("plasma_frequency", c.surface.plasma_frequency)
            .field("loss_rate", c.surface.loss_rate)
            .field("critical_temperature", c.surface.critical_temperature)
            .field("reduced_temperature", c.surface.reduced_temperature)
            .field("london_length_zero", c.surface.london_length_zero)
            .field("conductivity", c.surface.conductivity);
    });
    sub("geometry", [&](Section& s) {
        s.field("x", c.geometry.x)
            .field("z", c.geometry.z)
            .field("dipoles", c.geometry.dipoles)
            .field("wavelength", c.geometry.wavelength);
    });
    sub("sweep", [&](Section& s) {
        s.field("x_min", c.sweep.x_min)
            .field("x_max", c.sweep.x_max)
            .field("x_count", c.sweep.x_count)
            .field("z_min", c.sweep.z_min)
            .field("z_max", c.sweep.z_max)
            .field("z_count", c.sweep.z_count)
            .field("observable", c.sweep.observable);
    });
    sub("trace", [&](Section& s) { s.field("t_max", c.trace.t_max).field("samples", c.trace.samples); });
    sub("optimal", [&](Section& s) {
        s.field("z_min", c.optimal.z_min).field("z_max", c.optimal.z_max).field("tolerance", c.optimal.tolerance);
    });
    sub("output", [&](Section& s) { s.field("path", c.output.path).field("format", c.output.format); });
    sub("quadrature", [&](Section& s) {
        s.field("relative_tolerance", c.quadrature.relative_tolerance)
            .field("absolute_tolerance", c.quadrature.absolute_tolerance)
            .field("max_subdivisions", c.quadrature.max_subdivisions)
            .field("evanescent_cutoff_scale", c.quadrature.evanescent_cutoff_scale)
            .field("approximation", c.quadrature.approximation);
    });
    return c;
}

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return run_config_from_json(j);
}

std::string serialize(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

} // namespace cpent::cli
