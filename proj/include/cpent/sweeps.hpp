// sweeps.hpp — grid maps, concurrence traces and the optimal-height search

#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "cpent/dynamics.hpp"
#include "cpent/greens.hpp"
#include "cpent/media.hpp"

namespace cpent {

const char* version();

// Uniform axis; point i is min + ((max - min) * i) / (count - 1), so doubling
// the density (count -> 2 count - 1) reproduces every previous point exactly.
struct AxisRange {
    double min{0.0};
    double max{0.0};
    int count{1};

    double at(int i) const;
    std::vector<double> points() const;
};

enum class Observable { relative_decay, gamma_self, gamma_pair, omega_pair, concurrence_at };

struct ObservableSpec {
    Observable kind{Observable::relative_decay};
    double time{30.0}; // Gamma0 t, concurrence_at only

    // "relative_decay", "gamma_self", "gamma_pair", "omega_pair",
    // "concurrence_at" or "concurrence_at:<t>"
    static ObservableSpec parse(const std::string& text);
    std::string label() const;
};

inline constexpr double kDefaultXMin = 0.05;
inline constexpr double kDefaultXMax = 3.0;
inline constexpr double kDefaultZMin = 0.05;
inline constexpr double kDefaultZMax = 1.5;
inline constexpr int kDefaultGridCount = 60;

struct SweepSpec {
    media::SurfaceModel model{media::FreeSpace{}};
    DipoleConfig dipoles{DipoleConfig::xx()};
    AxisRange x{kDefaultXMin, kDefaultXMax, kDefaultGridCount};
    AxisRange z{kDefaultZMin, kDefaultZMax, kDefaultGridCount};
    double wavelength{kDefaultWavelength};
    ObservableSpec observable{};
    CouplingOptions options{};

    void validate() const;
};

struct SweepMetadata {
    std::string model;
    std::string dipoles;
    std::string observable;
    double wavelength{kDefaultWavelength};
    numerics::QuadratureSpec quadrature{};
    std::string version;
    std::string timestamp; // UTC, ISO 8601
};

struct SweepResult {
    std::vector<double> x;
    std::vector<double> z;
    Eigen::MatrixXd values; // values(i, j) at (x[i], z[j])
    SweepMetadata metadata;
};

// Evaluates the observable on every grid cell. Cells are distributed over
// `threads` workers (0 or 1 runs serially); the result does not depend on the
// thread count. The first failing cell in row-major order aborts the sweep
// with a NumericalError naming its coordinates.
SweepResult evaluate_map(const SweepSpec& spec, unsigned threads = 1);

// evaluate_map restricted to the relative-decay observable.
SweepResult decay_map(const SweepSpec& spec, unsigned threads = 1);

struct ConcurrenceTrace {
    CouplingSet couplings;
    std::vector<double> t;
    std::vector<TwoQubitState> states;
    std::vector<double> concurrence;
};

// |eg> evolution sampled on a uniform grid over [0, t_max].
ConcurrenceTrace concurrence_trace(const Geometry& geometry, const media::SurfaceModel& model, double t_max,
                                   int samples, const CouplingOptions& options = {});
ConcurrenceTrace concurrence_trace(const CouplingSet& couplings, double t_max, int samples);

struct OptimalZ {
    double z{0.0};
    double relative_decay{0.0};
    bool at_boundary{false};
    std::vector<double> scan_z;
    std::vector<double> scan_d;
};

inline constexpr int kOptimalScanPoints = 32;

// Minimizes z~ -> D(x~, z~) on [z_min, z_max]: a uniform scan brackets the
// minimum, golden-section search refines it to `tolerance`. Throws
// NumericalError, listing the scan samples, if the scan shows more than one
// interior local minimum.
OptimalZ find_optimal_z(const media::SurfaceModel& model, const DipoleConfig& dipoles, double x_scaled,
                        double z_min, double z_max, double tolerance = 1e-4, double wavelength = kDefaultWavelength,
                        const CouplingOptions& options = {});

} // namespace cpent
