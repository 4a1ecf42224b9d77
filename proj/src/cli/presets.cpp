#include "cpent/cli/presets.hpp"

#include <charconv>
#include <functional>

#include "cpent/cli/config.hpp"

namespace cpent::cli {
namespace {

constexpr double kTraceMax = 30.0;
constexpr int kTraceSamples = 301;
constexpr int kLineSamples = 300;

// Shortest round-trip spelling, for column names.
std::string short_label(double v) {
    char buffer[32];
    const auto end = std::to_chars(buffer, buffer + sizeof buffer, v).ptr;
    return std::string(buffer, end);
}

Table base_table(const std::string& id) {
    Table table;
    table.metadata = {{"preset", id}, {"version", version()}, {"wavelength", kDefaultWavelength}};
    return table;
}

std::vector<double> line(const std::vector<double>& axis, const std::function<double(double)>& f) {
    std::vector<double> out;
    out.reserve(axis.size());
    for (double v : axis) out.push_back(f(v));
    return out;
}

double relative_decay_at(double x, double z, const DipoleConfig& d, const media::SurfaceModel& model) {
    const CouplingSet set = coupling_set(Geometry{x, z, d}, model);
    return set.gamma() - set.gamma12();
}

std::vector<double> concurrence_series(double x, double z, const DipoleConfig& d, const media::SurfaceModel& model) {
    return concurrence_trace(Geometry{x, z, d}, model, kTraceMax, kTraceSamples).concurrence;
}

std::vector<double> trace_axis() { return AxisRange{0.0, kTraceMax, kTraceSamples}.points(); }

SweepResult map_of(const media::SurfaceModel& model, unsigned threads) {
    SweepSpec spec;
    spec.model = model;
    return decay_map(spec, threads);
}

std::vector<PresetPanel> fig2a() {
    const auto xx = DipoleConfig::xx();
    const auto zz = DipoleConfig::zz();
    const media::SurfaceModel free = media::FreeSpace{};
    const media::SurfaceModel pc = media::PerfectConductor{};

    Table decay = base_table("fig2a");
    const auto x = AxisRange{0.01, 3.0, kLineSamples}.points();
    decay.add_column("x_scaled", x);
    decay.add_column("d_free_zz", line(x, [&](double v) { return relative_decay_at(v, 0.2, zz, free); }));
    decay.add_column("d_free_xx", line(x, [&](double v) { return relative_decay_at(v, 0.2, xx, free); }));
    decay.add_column("d_perfect_zz", line(x, [&](double v) { return relative_decay_at(v, 0.2, zz, pc); }));
    decay.add_column("d_perfect_xx", line(x, [&](double v) { return relative_decay_at(v, 0.2, xx, pc); }));

    Table inset = base_table("fig2a");
    inset.add_column("t_gamma0", trace_axis());
    inset.add_column("c_perfect_zz", concurrence_series(1.0, 0.2, zz, pc));
    inset.add_column("c_perfect_xx", concurrence_series(1.0, 0.2, xx, pc));
    return {{"decay", decay}, {"concurrence", inset}};
}

std::vector<PresetPanel> fig3c() {
    const auto xx = DipoleConfig::xx();
    Table table = base_table("fig3c");
    table.add_column("t_gamma0", trace_axis());
    table.add_column("c_free", concurrence_series(1.0, 0.2, xx, media::FreeSpace{}));
    table.add_column("c_perfect", concurrence_series(1.0, 0.2, xx, media::PerfectConductor{}));
    table.add_column("c_superconductor", concurrence_series(1.0, 0.2, xx, media::niobium(0.01)));
    table.add_column("c_gold", concurrence_series(1.0, 0.2, xx, media::gold()));
    return {{"traces", table}};
}

std::vector<PresetPanel> sm_fig1() {
    const auto xx = DipoleConfig::xx();
    const auto zz = DipoleConfig::zz();
    const media::SurfaceModel pc = media::PerfectConductor{};

    Table gamma = base_table("sm-fig1");
    const auto z = AxisRange{0.01, 3.0, kLineSamples}.points();
    gamma.add_column("z_scaled", z);
    gamma.add_column("gamma_zz", line(z, [&](double v) { return gamma_self(Geometry{1.0, v, zz}, pc).total(); }));
    gamma.add_column("gamma_xx", line(z, [&](double v) { return gamma_self(Geometry{1.0, v, xx}, pc).total(); }));

    Table decay = base_table("sm-fig1");
    const auto x = AxisRange{0.01, 3.0, kLineSamples}.points();
    decay.add_column("x_scaled", x);
    decay.add_column("d_zz", line(x, [&](double v) { return relative_decay_at(v, 0.01, zz, pc); }));
    decay.add_column("d_xx", line(x, [&](double v) { return relative_decay_at(v, 0.01, xx, pc); }));
    return {{"gamma", gamma}, {"decay", decay}};
}

std::vector<PresetPanel> sm_fig3() {
    const auto xx = DipoleConfig::xx();
    const media::SurfaceModel gold = media::gold();
    Table table = base_table("sm-fig3");
    const auto z = AxisRange{0.05, 1.5, kLineSamples}.points();
    table.add_column("z_scaled", z);
    for (double x : {0.5, 1.0, 1.5}) {
        const std::string name = "d_x" + short_label(x);
        table.add_column(name, line(z, [&](double v) { return relative_decay_at(x, v, xx, gold); }));
    }
    return {{"decay", table}};
}

std::vector<PresetPanel> sm_fig4() {
    const auto xx = DipoleConfig::xx();
    const media::SurfaceModel gold = media::gold();
    Table table = base_table("sm-fig4");
    table.add_column("t_gamma0", trace_axis());
    for (double z : {0.2, 0.4, 1.0}) table.add_column("c_z" + short_label(z), concurrence_series(1.0, z, xx, gold));
    return {{"traces", table}};
}

} // namespace

const std::vector<std::string>& preset_ids() {
    static const std::vector<std::string> ids{"fig2a",   "fig3a",   "fig3b",   "fig3c",
                                              "sm-fig1", "sm-fig3", "sm-fig4", "sm-fig5"};
    return ids;
}

std::vector<PresetPanel> reproduce(const std::string& id, unsigned threads) {
    if (id == "fig2a") return fig2a();
    if (id == "fig3a") return {{"map", map_of(media::niobium(0.01), threads)}};
    if (id == "fig3b") return {{"map", map_of(media::gold(), threads)}};
    if (id == "fig3c") return fig3c();
    if (id == "sm-fig1") return sm_fig1();
    if (id == "sm-fig3") return sm_fig3();
    if (id == "sm-fig4") return sm_fig4();
    if (id == "sm-fig5")
        return {{"t0.1", map_of(media::niobium(0.1), threads)}, {"t0.01", map_of(media::niobium(0.01), threads)}};
    throw ConfigError("unknown figure '" + id + "'");
}

} // namespace cpent::cli
