#include "cpent/cli/run.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "cpent/cli/config.hpp"
#include "cpent/cli/output.hpp"
#include "cpent/cli/presets.hpp"
#include "cpent/errors.hpp"

namespace cpent::cli {
namespace {

using nlohmann::json;

struct Overrides {
    std::optional<std::string> config_file;
    std::optional<std::string> surface;
    std::optional<std::string> dipoles;
    std::optional<double> x;
    std::optional<double> z;
    std::optional<double> wavelength;
    std::optional<double> plasma_frequency;
    std::optional<double> loss_rate;
    std::optional<double> critical_temperature;
    std::optional<double> reduced_temperature;
    std::optional<double> london_length;
    std::optional<double> conductivity;
    std::optional<double> t_max;
    std::optional<int> samples;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::optional<int> x_count;
    std::optional<double> z_min;
    std::optional<double> z_max;
    std::optional<int> z_count;
    std::optional<std::string> observable;
    std::optional<double> tolerance;
    std::optional<std::string> output;
    std::optional<std::string> format;
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<int> max_subdivisions;
    std::optional<double> cutoff_scale;
    std::optional<std::string> approximation;
    std::string figure;
    bool print_config{false};
};

template <typename T>
void apply(const std::optional<T>& value, T& target) {
    if (value) target = *value;
}

void register_options(CLI::App& app, Overrides& o) {
    app.add_option("--config-file", o.config_file, "JSON RunConfig file; flags override its values");
    app.add_option("--surface", o.surface, "free | perfect | gold | drude | niobium | superconductor");
    app.add_option("--config", o.dipoles, "dipole orientation: xx | zz | <theta in radians>");
    app.add_option("--x", o.x, "scaled separation k0 x");
    app.add_option("--z", o.z, "scaled height k0 z");
    app.add_option("--wavelength", o.wavelength, "transition wavelength in m");
    app.add_option("--plasma-frequency", o.plasma_frequency, "Drude plasma frequency (rad/s)");
    app.add_option("--loss-rate", o.loss_rate, "Drude loss rate (rad/s)");
    app.add_option("--critical-temperature", o.critical_temperature, "superconductor T_c (K)");
    app.add_option("--t-ratio", o.reduced_temperature, "superconductor T / T_c");
    app.add_option("--london-length", o.london_length, "London length at T = 0 (m)");
    app.add_option("--conductivity", o.conductivity, "normal-state conductivity (S/m)");
    app.add_option("--tmax", o.t_max, "trace length in Gamma0 t");
    app.add_option("--samples", o.samples, "trace samples");
    app.add_option("--x-min", o.x_min, "map x range start");
    app.add_option("--x-max", o.x_max, "map x range end");
    app.add_option("--x-count", o.x_count, "map x points");
    app.add_option("--z-min", o.z_min, "map z range start; optimal-z search lower bound");
    app.add_option("--z-max", o.z_max, "map z range end; optimal-z search upper bound");
    app.add_option("--z-count", o.z_count, "map z points");
    app.add_option("--observable", o.observable,
                   "relative_decay | gamma_self | gamma_pair | omega_pair | concurrence_at[:t]");
    app.add_option("--tolerance", o.tolerance, "optimal-z tolerance in z~");
    app.add_option("-o,--output", o.output, "output file (default: stdout; reproduce: <figure>.<format>)");
    app.add_option("--format", o.format, "csv | json");
    app.add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    app.add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    app.add_option("--max-subdivisions", o.max_subdivisions, "quadrature panel limit");
    app.add_option("--cutoff-scale", o.cutoff_scale, "evanescent truncation multiplier");
    app.add_option("--approximation", o.approximation, "exact | nonretarded_p_only");
    app.add_flag("--print-config", o.print_config, "print the effective config as JSON and exit");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunConfig build_config(const std::string& command, const Overrides& o) {
    RunConfig c = o.config_file ? parse_run_config(read_file(*o.config_file)) : RunConfig{};
    c.command = command;
    if (command == "reproduce") c.figure = o.figure;
    apply(o.surface, c.surface.kind);
    apply(o.dipoles, c.geometry.dipoles);
    apply(o.x, c.geometry.x);
    apply(o.z, c.geometry.z);
    apply(o.wavelength, c.geometry.wavelength);
    apply(o.plasma_frequency, c.surface.plasma_frequency);
    apply(o.loss_rate, c.surface.loss_rate);
    apply(o.critical_temperature, c.surface.critical_temperature);
    apply(o.reduced_temperature, c.surface.reduced_temperature);
    apply(o.london_length, c.surface.london_length_zero);
    apply(o.conductivity, c.surface.conductivity);
    apply(o.t_max, c.trace.t_max);
    apply(o.samples, c.trace.samples);
    apply(o.x_min, c.sweep.x_min);
    apply(o.x_max, c.sweep.x_max);
    apply(o.x_count, c.sweep.x_count);
    if (command == "optimal-z") {
        apply(o.z_min, c.optimal.z_min);
        apply(o.z_max, c.optimal.z_max);
    } else {
        apply(o.z_min, c.sweep.z_min);
        apply(o.z_max, c.sweep.z_max);
    }
    apply(o.z_count, c.sweep.z_count);
    apply(o.observable, c.sweep.observable);
    apply(o.tolerance, c.optimal.tolerance);
    apply(o.output, c.output.path);
    apply(o.format, c.output.format);
    apply(o.rel_tol, c.quadrature.relative_tolerance);
    apply(o.abs_tol, c.quadrature.absolute_tolerance);
    apply(o.max_subdivisions, c.quadrature.max_subdivisions);
    apply(o.cutoff_scale, c.quadrature.evanescent_cutoff_scale);
    apply(o.approximation, c.quadrature.approximation);
    c.validate();
    return c;
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

json point_metadata(const RunConfig& c) {
    return {{"model", media::describe(c.model())},
            {"dipoles", DipoleConfig::parse(c.geometry.dipoles).label()},
            {"x_scaled", c.geometry.x},
            {"z_scaled", c.geometry.z},
            {"wavelength", c.geometry.wavelength},
            {"quadrature", to_json(c.coupling_options().quadrature)},
            {"approximation", c.quadrature.approximation},
            {"version", version()},
            {"timestamp", utc_now()}};
}

class Sink {
public:
    Sink(const RunConfig& c, std::ostream& out) : path_(c.output.path), format_(parse_format(c.output.format)), out_(out) {}

    Format format() const { return format_; }

    void emit(const std::string& content) const {
        if (path_.empty())
            out_ << content;
        else
            write_atomic(path_, content);
    }
    void emit(const Table& table) const {
        emit(format_ == Format::csv ? to_csv(table) : to_json(table).dump(2) + "\n");
    }
    void emit(const SweepResult& result) const {
        emit(format_ == Format::csv ? to_csv(result) : to_json(result).dump(2) + "\n");
    }

private:
    std::string path_;
    Format format_;
    std::ostream& out_;
};

json contribution_json(const Contribution& c) {
    return {{"free", c.free}, {"scattering", c.scattering}, {"total", c.total()}};
}

void run_coeffs(const RunConfig& c, std::ostream& out) {
    const CouplingSet set = coupling_set(c.geometry_point(), c.model(), c.coupling_options());
    const RelativeDecay d = relative_decay(set);
    const Contribution decay{d.free, d.scattering};
    const Sink sink(c, out);
    if (sink.format() == Format::json) {
        json j = {{"metadata", point_metadata(c)},
                  {"gamma_self", contribution_json(set.gamma_self)},
                  {"gamma_pair", contribution_json(set.gamma_pair)},
                  {"omega_pair", contribution_json(set.omega_pair)},
                  {"relative_decay", contribution_json(decay)}};
        sink.emit(j.dump(2) + "\n");
        return;
    }
    std::string text = "quantity,free,scattering,total\n";
    auto row = [&](const char* name, const Contribution& v) {
        text += std::string(name) + ',' + format_double(v.free) + ',' + format_double(v.scattering) + ',' +
                format_double(v.total()) + '\n';
    };
    row("gamma_self", set.gamma_self);
    row("gamma_pair", set.gamma_pair);
    row("omega_pair", set.omega_pair);
    row("relative_decay", decay);
    sink.emit(text);
}

void run_trace(const RunConfig& c, std::ostream& out) {
    const ConcurrenceTrace trace =
        concurrence_trace(c.geometry_point(), c.model(), c.trace.t_max, c.trace.samples, c.coupling_options());
    Table table;
    std::vector<double> rho22, rho33, rho44, re23, im23;
    for (const auto& s : trace.states) {
        rho22.push_back(s(eg, eg).real());
        rho33.push_back(s(ge, ge).real());
        rho44.push_back(s(gg, gg).real());
        re23.push_back(s(eg, ge).real());
        im23.push_back(s(eg, ge).imag());
    }
    table.add_column("t_gamma0", trace.t);
    table.add_column("concurrence", trace.concurrence);
    table.add_column("rho22", rho22);
    table.add_column("rho33", rho33);
    table.add_column("rho44", rho44);
    table.add_column("re_rho23", re23);
    table.add_column("im_rho23", im23);
    table.metadata = point_metadata(c);
    table.metadata["couplings"] = {{"gamma", trace.couplings.gamma()},
                                   {"gamma12", trace.couplings.gamma12()},
                                   {"omega12", trace.couplings.omega12()}};
    Sink(c, out).emit(table);
}

void run_optimal(const RunConfig& c, std::ostream& out) {
    const DipoleConfig dipoles = DipoleConfig::parse(c.geometry.dipoles);
    const OptimalZ best = find_optimal_z(c.model(), dipoles, c.geometry.x, c.optimal.z_min, c.optimal.z_max,
                                         c.optimal.tolerance, c.geometry.wavelength, c.coupling_options());
    const CouplingSet set =
        coupling_set(Geometry{c.geometry.x, best.z, dipoles, c.geometry.wavelength}, c.model(), c.coupling_options());
    const double conc = concurrence(evolve_analytical(set, c.trace.t_max));

    Table table;
    table.add_column("x_scaled", {c.geometry.x});
    table.add_column("z_star", {best.z});
    table.add_column("relative_decay", {best.relative_decay});
    table.add_column("at_boundary", {best.at_boundary ? 1.0 : 0.0});
    table.add_column("t_gamma0", {c.trace.t_max});
    table.add_column("concurrence", {conc});
    table.metadata = point_metadata(c);
    table.metadata["scan"] = {{"z_scaled", best.scan_z}, {"relative_decay", best.scan_d}};
    Sink(c, out).emit(table);
}

void run_reproduce(const RunConfig& c, unsigned threads, std::ostream& out) {
    const auto panels = reproduce(c.figure, threads);
    const std::string ext = c.output.format;
    const std::string stem = c.output.path.empty() ? c.figure : c.output.path;
    for (const auto& panel : panels) {
        RunConfig target = c;
        if (panels.size() == 1) {
            target.output.path = c.output.path.empty() ? stem + "." + ext : c.output.path;
        } else {
            std::string base = stem;
            const std::string suffix = "." + ext;
            if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0)
                base.resize(base.size() - suffix.size());
            target.output.path = base + "_" + panel.name + suffix;
        }
        const Sink sink(target, out);
        std::visit([&](const auto& data) { sink.emit(data); }, panel.data);
        out << target.output.path << '\n';
    }
}

} // namespace

unsigned thread_count() {
    const char* env = std::getenv("CP_ENTANGLE_THREADS");
    if (env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (*end != '\0' || value < 1 || value > 4096)
            throw ConfigError(std::string("CP_ENTANGLE_THREADS must be a positive integer, got '") + env + "'");
        return static_cast<unsigned>(value);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collective decay and entanglement of two emitters near a planar surface", "cpent"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    Overrides o;
    register_options(app, o);
    app.fallthrough();
    app.add_subcommand("coeffs", "decay and coupling coefficients at one point");
    app.add_subcommand("decay-map", "observable on an (x~, z~) grid");
    app.add_subcommand("trace", "concurrence time series from |eg>");
    app.add_subcommand("optimal-z", "height minimizing the relative decay at fixed x~");
    auto* repro = app.add_subcommand("reproduce", "figure presets");
    repro->add_option("figure", o.figure, "fig2a | fig3a | fig3b | fig3c | sm-fig1 | sm-fig3 | sm-fig4 | sm-fig5")
        ->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return success;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig config = build_config(command, o);
        if (o.print_config) {
            out << serialize(config);
            return success;
        }
        if (command == "coeffs") {
            run_coeffs(config, out);
        } else if (command == "decay-map") {
            Sink(config, out).emit(evaluate_map(config.sweep_spec(), thread_count()));
        } else if (command == "trace") {
            run_trace(config, out);
        } else if (command == "optimal-z") {
            run_optimal(config, out);
        } else {
            run_reproduce(config, thread_count(), out);
        }
        return success;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return config_error;
    }
}

} // namespace cpent::cli
