#include "cpent/greens.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "cpent/bessel.hpp"

namespace cpent {
namespace {

using complex = std::complex<double>;
using std::numbers::pi;
constexpr complex I{0.0, 1.0};

// Nonzero components of the reflected tensor for lateral offset along x:
// (xx, yy, zz, xz); zx = -xz.
using Components = Eigen::Matrix<complex, 4, 1>;

// Im and Re of the scaled free tensor along (parallel) and across
// (perpendicular) the separation axis. Small-argument series keep the
// imaginary parts accurate where the closed forms cancel.
struct FreeScaled {
    complex parallel;
    complex perpendicular;
};

// (sin x - x cos x) / x^3
double sinc_derivative_ratio(double x) {
    if (x < 0.5) {
        const double x2 = x * x;
        double term = 1.0 / 3.0; // k = 1
        double sum = term;
        // term_k = (-1)^(k+1) 2k x^(2k-2) / (2k+1)!
        for (int k = 2; k < 20; ++k) {
            term *= -x2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        return sum;
    }
    return (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double sinc(double x) {
    if (x < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

FreeScaled free_scaled(double x) {
    const double x3 = x * x * x;
    // G_par = e^{ix} (1 - i x) / (2 pi x^3), G_perp = e^{ix} (x^2 + i x - 1) / (4 pi x^3)
    const double re_par = (std::cos(x) + x * std::sin(x)) / (2.0 * pi * x3);
    const double im_par = sinc_derivative_ratio(x) / (2.0 * pi);
    const double re_perp = ((x * x - 1.0) * std::cos(x) - x * std::sin(x)) / (4.0 * pi * x3);
    const double im_perp = (sinc(x) - sinc_derivative_ratio(x)) / (4.0 * pi);
    return {{re_par, im_par}, {re_perp, im_perp}};
}

void require_height(double z_scaled) {
    if (!(z_scaled >= kMinimumHeight) || !std::isfinite(z_scaled))
        throw std::invalid_argument("height z~ must be >= " + std::to_string(kMinimumHeight) + ", got " +
                                    std::to_string(z_scaled));
}

// Bracket of the Sommerfeld integrand for scaled k_perp (normal), with
// q = k_par / k0 and the e^{2 i k_perp z} factor applied.
Components bracket(complex normal, double q, double q2, double x, complex phase, const media::FresnelPair& r) {
    const double arg = q * std::abs(x);
    const numerics::BesselJ012 j = arg == 0.0 ? numerics::BesselJ012{1.0, 0.0, 0.0} : numerics::bessel_j012(arg);
    const double j1 = x < 0.0 ? -j.j1 : j.j1;
    const double sum = j.j0 + j.j2;
    const double diff = j.j0 - j.j2;
    const complex n2 = normal * normal;
    Components c;
    c(0) = r.r_s * sum - n2 * diff * r.r_p;
    c(1) = r.r_s * diff - n2 * sum * r.r_p;
    c(2) = 2.0 * q2 * j.j0 * r.r_p;
    c(3) = -2.0 * I * q * normal * j1 * r.r_p;
    return c * phase;
}

std::string branch_context(const char* branch, double x, double z) {
    return std::string(branch) + " branch at x~=" + std::to_string(x) + ", z~=" + std::to_string(z);
}

// Scaled tensor g = G / k0.
GreensTensor scattering_scaled(double x, double z, const media::SurfaceModel& model, double omega,
                               const CouplingOptions& options) {
    require_height(z);
    if (std::holds_alternative<media::FreeSpace>(model))
        throw std::invalid_argument("greens_scattering: free space has no scattered field");
    media::validate(model);
    const media::Reflector reflector(model, omega);
    const bool p_only = options.approximation == FresnelApproximation::nonretarded_p_only;
    const media::FresnelPair fixed{0.0, reflector.nonretarded_r_p()};
    auto reflect = [&](complex normal, double q2) { return p_only ? fixed : reflector.at(normal, q2); };

    auto propagating = [&](double phi) {
        const double normal = std::sin(phi);
        const double q = std::cos(phi);
        const double q2 = q * q;
        const complex phase = std::exp(2.0 * I * normal * z);
        // dk_perp = cos(phi) dphi
        return Components(bracket(normal, q, q2, x, phase, reflect(normal, q2)) * q);
    };
    auto evanescent = [&](double kappa) {
        const double q2 = 1.0 + kappa * kappa;
        const double q = std::sqrt(q2);
        const complex normal = I * kappa;
        const double phase = std::exp(-2.0 * kappa * z);
        return Components(bracket(normal, q, q2, x, phase, reflect(normal, q2)));
    };

    std::vector<double> breakpoints;
    if (!p_only) {
        if (auto k = reflector.plasmon_kappa()) breakpoints.push_back(*k);
        if (auto k = reflector.branch_point_kappa()) breakpoints.push_back(*k);
    }

    Components prop;
    Components evan;
    try {
        prop = numerics::integrate_finite(propagating, 0.0, pi / 2.0, options.quadrature).value;
    } catch (const numerics::QuadratureFailure& e) {
        throw numerics::QuadratureFailure(branch_context("propagating", x, z) + ": " + e.what(), e.error_estimate(),
                                          e.subdivisions());
    }
    try {
        evan = numerics::integrate_evanescent(evanescent, 2.0 * z, options.quadrature, breakpoints).value;
    } catch (const numerics::QuadratureFailure& e) {
        throw numerics::QuadratureFailure(branch_context("evanescent", x, z) + ": " + e.what(), e.error_estimate(),
                                          e.subdivisions());
    }
    // q dq / k_perp = -dk_perp (propagating), = -i dkappa (evanescent)
    const Components total = (I / (8.0 * pi)) * (prop - I * evan);
    GreensTensor g = GreensTensor::Zero();
    g(0, 0) = total(0);
    g(1, 1) = total(1);
    g(2, 2) = total(2);
    g(0, 2) = total(3);
    g(2, 0) = -total(3);
    return g;
}

GreensTensor free_scaled_tensor(double x) {
    const FreeScaled f = free_scaled(x);
    GreensTensor g = GreensTensor::Zero();
    g(0, 0) = f.parallel;
    g(1, 1) = f.perpendicular;
    g(2, 2) = f.perpendicular;
    return g;
}

void require_separation(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument("lateral separation x~ must be > 0, got " + std::to_string(x));
}

complex contract(const GreensTensor& g, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2) {
    return d1.cast<complex>().dot(g * d2.cast<complex>());
}

} // namespace

DipoleConfig DipoleConfig::zz() { return DipoleConfig(Kind::zz, pi / 2.0); }

DipoleConfig DipoleConfig::angle(double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("dipole angle must be finite");
    return DipoleConfig(Kind::angle, theta);
}

DipoleConfig DipoleConfig::parse(const std::string& text) {
    if (text == "xx") return xx();
    if (text == "zz") return zz();
    std::size_t used = 0;
    double theta = 0.0;
    try {
        theta = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw std::invalid_argument("dipole config must be xx, zz or an angle in radians, got '" + text + "'");
    return angle(theta);
}

Eigen::Vector3d DipoleConfig::direction() const {
    switch (kind_) {
        case Kind::xx: return Eigen::Vector3d::UnitX();
        case Kind::zz: return Eigen::Vector3d::UnitZ();
        case Kind::angle: break;
    }
    return {std::cos(theta_), 0.0, std::sin(theta_)};
}

std::string DipoleConfig::label() const {
    switch (kind_) {
        case Kind::xx: return "xx";
        case Kind::zz: return "zz";
        case Kind::angle: break;
    }
    return "theta=" + std::to_string(theta_);
}

double Geometry::k0() const {
    if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
    return 2.0 * pi / wavelength;
}

double Geometry::omega() const { return constants::speed_of_light * k0(); }

GreensTensor greens_free(double x_scaled, double omega) {
    require_separation(x_scaled);
    if (!(omega > 0.0)) throw std::invalid_argument("greens_free: omega must be positive");
    return free_scaled_tensor(x_scaled) * complex(omega / constants::speed_of_light);
}

GreensTensor greens_scattering_at(double x_scaled, double z_scaled, const media::SurfaceModel& model, double omega,
                                  const CouplingOptions& options) {
    if (!std::isfinite(x_scaled)) throw std::invalid_argument("lateral offset must be finite");
    if (!(omega > 0.0)) throw std::invalid_argument("greens_scattering: omega must be positive");
    return scattering_scaled(x_scaled, z_scaled, model, omega, options) * complex(omega / constants::speed_of_light);
}

GreensTensor greens_scattering(const Geometry& geometry, const media::SurfaceModel& model, double omega,
                               const CouplingOptions& options) {
    if (!(geometry.x_scaled >= 0.0)) throw std::invalid_argument("x~ must be >= 0");
    return greens_scattering_at(geometry.x_scaled, geometry.z_scaled, model, omega, options);
}

double gamma_from_tensor(const GreensTensor& g, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2, double k0) {
    return 6.0 * pi / k0 * contract(g, d1, d2).imag();
}

double omega_from_tensor(const GreensTensor& g, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2, double k0) {
    return -3.0 * pi / k0 * contract(g, d1, d2).real();
}

Contribution gamma_self(const Geometry& geometry, const media::SurfaceModel& model, const CouplingOptions& options) {
    Contribution out{1.0, 0.0};
    if (std::holds_alternative<media::FreeSpace>(model)) return out;
    const Eigen::Vector3d d = geometry.dipoles.direction();
    const GreensTensor g = scattering_scaled(0.0, geometry.z_scaled, model, geometry.omega(), options);
    out.scattering = gamma_from_tensor(g, d, d, 1.0);
    return out;
}

Contribution gamma_pair(const Geometry& geometry, const media::SurfaceModel& model, const CouplingOptions& options) {
    require_separation(geometry.x_scaled);
    const Eigen::Vector3d d = geometry.dipoles.direction();
    Contribution out;
    out.free = gamma_from_tensor(free_scaled_tensor(geometry.x_scaled), d, d, 1.0);
    if (!std::holds_alternative<media::FreeSpace>(model)) {
        const GreensTensor g =
            scattering_scaled(geometry.x_scaled, geometry.z_scaled, model, geometry.omega(), options);
        out.scattering = gamma_from_tensor(g, d, d, 1.0);
    }
    return out;
}

Contribution omega_pair(const Geometry& geometry, const media::SurfaceModel& model, const CouplingOptions& options) {
    require_separation(geometry.x_scaled);
    const Eigen::Vector3d d = geometry.dipoles.direction();
    Contribution out;
    out.free = omega_from_tensor(free_scaled_tensor(geometry.x_scaled), d, d, 1.0);
    if (!std::holds_alternative<media::FreeSpace>(model)) {
        const GreensTensor g =
            scattering_scaled(geometry.x_scaled, geometry.z_scaled, model, geometry.omega(), options);
        out.scattering = omega_from_tensor(g, d, d, 1.0);
    }
    return out;
}

CouplingSet CouplingSet::from_totals(double gamma, double gamma12, double omega12) {
    return {{gamma, 0.0}, {gamma12, 0.0}, {omega12, 0.0}};
}

PairCoupling pair_coupling(const Geometry& geometry, const media::SurfaceModel& model, const CouplingOptions& options) {
    require_separation(geometry.x_scaled);
    const Eigen::Vector3d d = geometry.dipoles.direction();
    const GreensTensor free = free_scaled_tensor(geometry.x_scaled);
    PairCoupling out;
    out.gamma_pair = {gamma_from_tensor(free, d, d, 1.0), 0.0};
    out.omega_pair = {omega_from_tensor(free, d, d, 1.0), 0.0};
    if (!std::holds_alternative<media::FreeSpace>(model)) {
        const GreensTensor pair =
            scattering_scaled(geometry.x_scaled, geometry.z_scaled, model, geometry.omega(), options);
        out.gamma_pair.scattering = gamma_from_tensor(pair, d, d, 1.0);
        out.omega_pair.scattering = omega_from_tensor(pair, d, d, 1.0);
    }
    return out;
}

CouplingSet combine(const Contribution& gamma_self, const PairCoupling& pair, const Geometry& geometry,
                    double positivity_tolerance) {
    CouplingSet set{gamma_self, pair.gamma_pair, pair.omega_pair};
    if (!std::isfinite(set.gamma()) || !std::isfinite(set.gamma12()) || !std::isfinite(set.omega12()) ||
        std::abs(set.gamma12()) > set.gamma() + positivity_tolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "coupling_set: |Gamma12| = " << std::abs(set.gamma12()) << " exceeds Gamma = " << set.gamma()
            << " at x~=" << geometry.x_scaled << ", z~=" << geometry.z_scaled;
        throw NumericalError(msg.str());
    }
    return set;
}

CouplingSet coupling_set(const Geometry& geometry, const media::SurfaceModel& model, const CouplingOptions& options) {
    require_separation(geometry.x_scaled);
    return combine(gamma_self(geometry, model, options), pair_coupling(geometry, model, options), geometry,
                   options.positivity_tolerance);
}

double gamma_self_scattering_p_only(double z, const DipoleConfig& dipoles, complex r_p) {
    require_height(z);
    const double s = std::sin(2.0 * z);
    const double c = std::cos(2.0 * z);
    const double z3 = z * z * z;
    switch (dipoles.kind()) {
        case DipoleConfig::Kind::zz:
            return 3.0 / (8.0 * z3) * ((s - 2.0 * z * c) * r_p.real() + (2.0 * z * s + c) * r_p.imag());
        case DipoleConfig::Kind::xx:
            return -3.0 / (16.0 * z3) *
                   ((2.0 * z * c + (2.0 * z * z - 1.0) * s) * r_p.real() -
                    (2.0 * z * s + (1.0 - 2.0 * z * z) * c) * r_p.imag());
        case DipoleConfig::Kind::angle: break;
    }
    throw std::invalid_argument("gamma_self_scattering_p_only: only xx and zz are supported");
}

double relative_decay_drude_nonretarded(double x, double z, const media::Drude& metal, double omega,
                                        const numerics::QuadratureSpec& quadrature) {
    require_separation(x);
    require_height(z);
    auto integrand = [&](double kappa) {
        const double arg = x * std::sqrt(1.0 + kappa * kappa);
        const numerics::BesselJ012 j = numerics::bessel_j012(arg);
        return std::exp(-2.0 * kappa * z) * kappa * kappa * (j.j0 - j.j2);
    };
    const double f = numerics::integrate_evanescent(integrand, 2.0 * z, quadrature).value;
    const double free = 1.0 - 3.0 * sinc_derivative_ratio(x);
    const double loss = omega * metal.loss_rate / (metal.plasma_frequency * metal.plasma_frequency);
    return free + 3.0 / 8.0 * loss * (1.0 / (z * z * z) - 4.0 * f);
}

} // namespace cpent
