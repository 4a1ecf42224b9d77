// media.hpp — half-space dispersion models and Fresnel reflection

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>

namespace cpent {

namespace constants {
inline constexpr double speed_of_light = 299792458.0;       // m/s
inline constexpr double vacuum_permeability = 1.25663706212e-6; // N/A^2
} // namespace constants

namespace media {

using complex = std::complex<double>;

struct FreeSpace {};
struct PerfectConductor {};

struct Drude {
    double plasma_frequency; // rad/s
    double loss_rate;        // rad/s
};

struct Superconductor {
    double critical_temperature; // K
    double temperature;          // K
    double london_length_zero;   // m
    double conductivity;         // S/m

    double reduced_temperature() const { return temperature / critical_temperature; }
    // lambda_L^2(T) = lambda_L^2(0) / (1 - (T/Tc)^4)
    double london_length_squared() const;
    // delta_L^2(T) = 2 / (omega mu0 sigma (T/Tc)^4)
    double skin_depth_squared(double omega) const;
};

using SurfaceModel = std::variant<FreeSpace, PerfectConductor, Drude, Superconductor>;

// Validating constructors; each throws std::invalid_argument on a violated
// parameter invariant.
SurfaceModel make_drude(double plasma_frequency, double loss_rate);
SurfaceModel make_superconductor(double critical_temperature, double temperature,
                                 double london_length_zero, double conductivity);
void validate(const SurfaceModel& model);

// Parameter sets used throughout the examples and presets.
SurfaceModel gold();
SurfaceModel niobium(double reduced_temperature = 0.01);

std::string name(const SurfaceModel& model);
std::string describe(const SurfaceModel& model);

// Dielectric function of a dispersive half-space; FreeSpace and
// PerfectConductor have no finite permittivity and are rejected.
complex permittivity(const SurfaceModel& model, double omega);

struct FresnelPair {
    complex r_s;
    complex r_p;
};

// Square root on the branch Im >= 0 (decaying / outgoing waves).
complex upper_sqrt(complex z);

// Fresnel coefficients for parallel wavenumber k_parallel (rad/m).
FresnelPair fresnel(const SurfaceModel& model, double omega, double k_parallel);

// Non-retarded closed form for a London superconductor: r_s = 0 and
// r_p = (d^2 - 2i l^2) / (d^2 - 2i l^2 - 2 w^2 d^2 l^2 / c^2).
FresnelPair fresnel_nonretarded_superconductor(const SurfaceModel& model, double omega);

// Fresnel evaluator with the permittivity resolved once for a fixed frequency.
// Wavenumbers are in units of k0 = omega / c.
class Reflector {
public:
    Reflector(const SurfaceModel& model, double omega);

    // normal: scaled k_perp on the Im >= 0 branch; parallel_squared: (k_par / k0)^2.
    FresnelPair at(complex normal, double parallel_squared) const;
    FresnelPair at_parallel(double parallel) const;

    // (eps - 1) / (eps + 1); +1 for a perfect conductor, 0 in free space.
    complex nonretarded_r_p() const;

    bool is_perfect_conductor() const { return kind_ == Kind::perfect; }
    bool is_free_space() const { return kind_ == Kind::free; }
    std::optional<complex> epsilon() const;

    // Evanescent-branch locations (kappa = Im k_perp / k0) where the
    // integrands are sharply peaked or non-smooth: the surface-plasmon pole of
    // r_p (Re eps < -1) and the k_perp^1 branch point (Re eps > 1).
    std::optional<double> plasmon_kappa() const;
    std::optional<double> branch_point_kappa() const;

private:
    enum class Kind { free, perfect, dielectric };
    Kind kind_;
    complex eps_{1.0, 0.0};
};

} // namespace media
} // namespace cpent
