#include "cpent/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cpent/errors.hpp"

#ifndef CPENT_VERSION
#define CPENT_VERSION "unknown"
#endif

namespace cpent {
namespace {

constexpr std::size_t kNoFailure = std::numeric_limits<std::size_t>::max();

// Runs task(k) for k in [0, n). Every index below the first failure is
// evaluated, so the reported failure is the lowest failing index whatever the
// scheduling.
template <typename Task, typename Describe>
void parallel_for(std::size_t n, unsigned threads, Task&& task, Describe&& describe) {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_failure{kNoFailure};
    std::mutex guard;
    std::string failure_message;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n || k > first_failure.load()) return;
            try {
                task(k);
            } catch (const std::exception& e) {
                std::lock_guard lock(guard);
                if (k < first_failure.load()) {
                    first_failure = k;
                    failure_message = describe(k) + ": " + e.what();
                }
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_failure.load() != kNoFailure) throw NumericalError(failure_message);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void require_axis(const AxisRange& axis, const char* name, double lower_bound) {
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument(std::string(name) + " axis: " + what);
    };
    if (axis.count < 1) fail("count must be >= 1");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max)) fail("bounds must be finite");
    if (axis.max < axis.min) fail("max must be >= min");
    if (axis.count == 1 && axis.max != axis.min) fail("a single-point axis needs min == max");
    if (!(axis.min >= lower_bound)) {
        std::ostringstream msg;
        msg << "min " << axis.min << " is below the validity bound " << lower_bound;
        fail(msg.str());
    }
}

double golden_section(const std::function<double(double)>& f, double a, double b, double tolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tolerance) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

} // namespace

const char* version() { return CPENT_VERSION; }

double AxisRange::at(int i) const {
    if (count == 1) return min;
    return min + ((max - min) * i) / (count - 1);
}

std::vector<double> AxisRange::points() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
}

ObservableSpec ObservableSpec::parse(const std::string& text) {
    if (text == "relative_decay") return {Observable::relative_decay};
    if (text == "gamma_self") return {Observable::gamma_self};
    if (text == "gamma_pair") return {Observable::gamma_pair};
    if (text == "omega_pair") return {Observable::omega_pair};
    const std::string prefix = "concurrence_at";
    if (text.rfind(prefix, 0) == 0) {
        ObservableSpec spec{Observable::concurrence_at};
        if (text.size() == prefix.size()) return spec;
        if (text[prefix.size()] == ':') {
            try {
                std::size_t used = 0;
                const std::string value = text.substr(prefix.size() + 1);
                spec.time = std::stod(value, &used);
                if (used == value.size() && spec.time >= 0.0 && std::isfinite(spec.time)) return spec;
            } catch (const std::exception&) {
            }
        }
    }
    throw std::invalid_argument("unknown observable '" + text + "'");
}

std::string ObservableSpec::label() const {
    switch (kind) {
        case Observable::relative_decay: return "relative_decay";
        case Observable::gamma_self: return "gamma_self";
        case Observable::gamma_pair: return "gamma_pair";
        case Observable::omega_pair: return "omega_pair";
        case Observable::concurrence_at: {
            std::ostringstream out;
            out.precision(17);
            out << "concurrence_at:" << time;
            return out.str();
        }
    }
    return "unknown";
}

void SweepSpec::validate() const {
    media::validate(model);
    require_axis(x, "x", 0.0);
    if (!(x.min > 0.0)) throw std::invalid_argument("x axis: separations must be > 0");
    require_axis(z, "z", kMinimumHeight);
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw std::invalid_argument("wavelength must be positive and finite");
    if (observable.kind == Observable::concurrence_at && !(observable.time >= 0.0))
        throw std::invalid_argument("concurrence time must be >= 0");
    options.quadrature.validate();
}

SweepResult evaluate_map(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    SweepResult result;
    result.x = spec.x.points();
    result.z = spec.z.points();
    const std::size_t nx = result.x.size();
    const std::size_t nz = result.z.size();
    result.values.resize(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nz));

    auto geometry_at = [&](double x, double z) { return Geometry{x, z, spec.dipoles, spec.wavelength}; };
    auto coordinates = [](double x, double z) {
        std::ostringstream out;
        out.precision(17);
        out << "cell (x~=" << x << ", z~=" << z << ")";
        return out.str();
    };

    // The self term depends on z only.
    std::vector<Contribution> self(nz);
    parallel_for(
        nz, threads,
        [&](std::size_t j) { self[j] = gamma_self(geometry_at(result.x.front(), result.z[j]), spec.model, spec.options); },
        [&](std::size_t j) { return coordinates(result.x.front(), result.z[j]); });

    parallel_for(
        nx * nz, threads,
        [&](std::size_t k) {
            const std::size_t i = k / nz;
            const std::size_t j = k % nz;
            const Geometry geometry = geometry_at(result.x[i], result.z[j]);
            double value = 0.0;
            if (spec.observable.kind == Observable::gamma_self) {
                value = self[j].total();
            } else {
                const CouplingSet set = combine(self[j], pair_coupling(geometry, spec.model, spec.options), geometry,
                                                spec.options.positivity_tolerance);
                switch (spec.observable.kind) {
                    case Observable::relative_decay: value = set.gamma() - set.gamma12(); break;
                    case Observable::gamma_pair: value = set.gamma12(); break;
                    case Observable::omega_pair: value = set.omega12(); break;
                    case Observable::concurrence_at:
                        value = concurrence(evolve_analytical(set, spec.observable.time));
                        break;
                    case Observable::gamma_self: break;
                }
            }
            if (!std::isfinite(value)) throw NumericalError("non-finite value");
            result.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
        },
        [&](std::size_t k) { return coordinates(result.x[k / nz], result.z[k % nz]); });

    result.metadata.model = media::describe(spec.model);
    result.metadata.dipoles = spec.dipoles.label();
    result.metadata.observable = spec.observable.label();
    result.metadata.wavelength = spec.wavelength;
    result.metadata.quadrature = spec.options.quadrature;
    result.metadata.version = version();
    result.metadata.timestamp = utc_timestamp();
    return result;
}

SweepResult decay_map(const SweepSpec& spec, unsigned threads) {
    if (spec.observable.kind != Observable::relative_decay)
        throw std::invalid_argument("decay_map: observable must be relative_decay");
    return evaluate_map(spec, threads);
}

ConcurrenceTrace concurrence_trace(const CouplingSet& couplings, double t_max, int samples) {
    if (samples < 2) throw std::invalid_argument("concurrence_trace: samples must be >= 2");
    if (!(t_max > 0.0) || !std::isfinite(t_max))
        throw std::invalid_argument("concurrence_trace: t_max must be positive and finite");
    ConcurrenceTrace trace{couplings, {}, {}, {}};
    const AxisRange axis{0.0, t_max, samples};
    trace.t = axis.points();
    trace.states.reserve(trace.t.size());
    trace.concurrence.reserve(trace.t.size());
    for (double t : trace.t) {
        trace.states.push_back(evolve_analytical(couplings, t));
        trace.concurrence.push_back(concurrence(trace.states.back()));
    }
    return trace;
}

ConcurrenceTrace concurrence_trace(const Geometry& geometry, const media::SurfaceModel& model, double t_max,
                                   int samples, const CouplingOptions& options) {
    return concurrence_trace(coupling_set(geometry, model, options), t_max, samples);
}

OptimalZ find_optimal_z(const media::SurfaceModel& model, const DipoleConfig& dipoles, double x_scaled,
                        double z_min, double z_max, double tolerance, double wavelength,
                        const CouplingOptions& options) {
    if (!(x_scaled > 0.0) || !std::isfinite(x_scaled)) throw std::invalid_argument("find_optimal_z: x~ must be > 0");
    if (!(z_min >= kMinimumHeight) || !(z_max > z_min) || !std::isfinite(z_max))
        throw std::invalid_argument("find_optimal_z: need 1e-3 <= z_min < z_max");
    if (!(tolerance > 0.0)) throw std::invalid_argument("find_optimal_z: tolerance must be > 0");

    auto relative = [&](double z) {
        const CouplingSet set = coupling_set(Geometry{x_scaled, z, dipoles, wavelength}, model, options);
        return set.gamma() - set.gamma12();
    };

    OptimalZ out;
    out.scan_z = AxisRange{z_min, z_max, kOptimalScanPoints}.points();
    out.scan_d.reserve(out.scan_z.size());
    for (double z : out.scan_z) out.scan_d.push_back(relative(z));

    const int n = kOptimalScanPoints;
    int interior_minima = 0;
    for (int k = 1; k + 1 < n; ++k)
        if (out.scan_d[k] < out.scan_d[k - 1] && out.scan_d[k] <= out.scan_d[k + 1]) ++interior_minima;
    if (interior_minima > 1) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "find_optimal_z: D(z~) is not unimodal on [" << z_min << ", " << z_max << "]; samples (z~, D):";
        for (int k = 0; k < n; ++k) msg << " (" << out.scan_z[k] << ", " << out.scan_d[k] << ")";
        throw NumericalError(msg.str());
    }

    const auto best = std::min_element(out.scan_d.begin(), out.scan_d.end()) - out.scan_d.begin();
    const int k = static_cast<int>(best);
    const double a = out.scan_z[std::max(k - 1, 0)];
    const double b = out.scan_z[std::min(k + 1, n - 1)];
    out.z = golden_section(relative, a, b, tolerance);
    out.relative_decay = relative(out.z);
    // Keep a scanned endpoint if the refinement did not improve on it.
    if (out.scan_d[k] < out.relative_decay) {
        out.z = out.scan_z[k];
        out.relative_decay = out.scan_d[k];
    }
    out.at_boundary = (k == 0 || k == n - 1) && std::abs(out.z - out.scan_z[k]) <= tolerance;
    return out;
}

} // namespace cpent
