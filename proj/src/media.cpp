#include "cpent/media.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cpent::media {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_frequency(double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("frequency must be positive and finite");
}

} // namespace

double Superconductor::london_length_squared() const {
    const double t4 = std::pow(reduced_temperature(), 4);
    return london_length_zero * london_length_zero / (1.0 - t4);
}

double Superconductor::skin_depth_squared(double omega) const {
    const double t4 = std::pow(reduced_temperature(), 4);
    return 2.0 / (omega * constants::vacuum_permeability * conductivity * t4);
}

void validate(const SurfaceModel& model) {
    std::visit(overloaded{
                   [](const FreeSpace&) {},
                   [](const PerfectConductor&) {},
                   [](const Drude& d) {
                       if (!(d.plasma_frequency > 0.0))
                           throw std::invalid_argument("Drude: plasma_frequency must be > 0");
                       if (!(d.loss_rate >= 0.0))
                           throw std::invalid_argument("Drude: loss_rate must be >= 0");
                   },
                   [](const Superconductor& s) {
                       if (!(s.temperature > 0.0 && s.temperature < s.critical_temperature))
                           throw std::invalid_argument("Superconductor: requires 0 < T < T_c");
                       if (!(s.london_length_zero > 0.0))
                           throw std::invalid_argument("Superconductor: london_length_zero must be > 0");
                       if (!(s.conductivity > 0.0))
                           throw std::invalid_argument("Superconductor: conductivity must be > 0");
                   },
               },
               model);
}

SurfaceModel make_drude(double plasma_frequency, double loss_rate) {
    SurfaceModel model = Drude{plasma_frequency, loss_rate};
    validate(model);
    return model;
}

SurfaceModel make_superconductor(double critical_temperature, double temperature,
                                 double london_length_zero, double conductivity) {
    SurfaceModel model = Superconductor{critical_temperature, temperature, london_length_zero, conductivity};
    validate(model);
    return model;
}

SurfaceModel gold() { return make_drude(1.37e16, 5.31e13); }

SurfaceModel niobium(double reduced_temperature) {
    constexpr double tc = 8.31;
    return make_superconductor(tc, reduced_temperature * tc, 35e-9, 2e9);
}

std::string name(const SurfaceModel& model) {
    return std::visit(overloaded{
                          [](const FreeSpace&) { return std::string("free"); },
                          [](const PerfectConductor&) { return std::string("perfect"); },
                          [](const Drude&) { return std::string("drude"); },
                          [](const Superconductor&) { return std::string("superconductor"); },
                      },
                      model);
}

std::string describe(const SurfaceModel& model) {
    std::ostringstream out;
    out.precision(17);
    std::visit(overloaded{
                   [&](const FreeSpace&) { out << "free"; },
                   [&](const PerfectConductor&) { out << "perfect"; },
                   [&](const Drude& d) {
                       out << "drude(plasma_frequency=" << d.plasma_frequency << ", loss_rate=" << d.loss_rate << ")";
                   },
                   [&](const Superconductor& s) {
                       out << "superconductor(critical_temperature=" << s.critical_temperature
                           << ", temperature=" << s.temperature << ", london_length_zero=" << s.london_length_zero
                           << ", conductivity=" << s.conductivity << ")";
                   },
               },
               model);
    return out.str();
}

complex permittivity(const SurfaceModel& model, double omega) {
    require_frequency(omega);
    validate(model);
    return std::visit(
        overloaded{
            [](const FreeSpace&) -> complex {
                throw std::invalid_argument("permittivity: free space has no medium");
            },
            [](const PerfectConductor&) -> complex {
                throw std::invalid_argument("permittivity: perfect conductor is handled by its Fresnel limit");
            },
            [&](const Drude& d) -> complex {
                const double wp2 = d.plasma_frequency * d.plasma_frequency;
                return 1.0 - wp2 / complex(omega * omega, omega * d.loss_rate);
            },
            [&](const Superconductor& s) -> complex {
                constexpr double c2 = constants::speed_of_light * constants::speed_of_light;
                const double w2 = omega * omega;
                return {1.0 - c2 / (w2 * s.london_length_squared()), 2.0 * c2 / (w2 * s.skin_depth_squared(omega))};
            },
        },
        model);
}

complex upper_sqrt(complex z) {
    complex root = std::sqrt(z);
    if (root.imag() < 0.0) root = -root;
    return root;
}

Reflector::Reflector(const SurfaceModel& model, double omega) {
    require_frequency(omega);
    if (std::holds_alternative<FreeSpace>(model)) {
        kind_ = Kind::free;
    } else if (std::holds_alternative<PerfectConductor>(model)) {
        kind_ = Kind::perfect;
    } else {
        kind_ = Kind::dielectric;
        eps_ = permittivity(model, omega);
    }
}

FresnelPair Reflector::at(complex normal, double parallel_squared) const {
    switch (kind_) {
        case Kind::free: return {0.0, 0.0};
        case Kind::perfect: return {-1.0, 1.0};
        case Kind::dielectric: break;
    }
    const complex transmitted = upper_sqrt(eps_ - parallel_squared);
    return {(normal - transmitted) / (normal + transmitted),
            (eps_ * normal - transmitted) / (eps_ * normal + transmitted)};
}

FresnelPair Reflector::at_parallel(double parallel) const {
    const double q2 = parallel * parallel;
    return at(upper_sqrt(complex(1.0 - q2, 0.0)), q2);
}

complex Reflector::nonretarded_r_p() const {
    switch (kind_) {
        case Kind::free: return 0.0;
        case Kind::perfect: return 1.0;
        case Kind::dielectric: break;
    }
    return (eps_ - 1.0) / (eps_ + 1.0);
}

std::optional<complex> Reflector::epsilon() const {
    if (kind_ != Kind::dielectric) return std::nullopt;
    return eps_;
}

std::optional<double> Reflector::plasmon_kappa() const {
    if (kind_ != Kind::dielectric || !(eps_.real() < -1.0)) return std::nullopt;
    // r_p pole: q^2 = eps / (eps + 1), kappa^2 = q^2 - 1 = -1 / (eps + 1)
    return std::sqrt(-1.0 / (eps_ + 1.0)).real();
}

std::optional<double> Reflector::branch_point_kappa() const {
    if (kind_ != Kind::dielectric || !(eps_.real() > 1.0)) return std::nullopt;
    return std::sqrt(eps_.real() - 1.0);
}

FresnelPair fresnel(const SurfaceModel& model, double omega, double k_parallel) {
    if (!(k_parallel >= 0.0)) throw std::invalid_argument("fresnel: k_parallel must be >= 0");
    const Reflector reflector(model, omega);
    return reflector.at_parallel(k_parallel * constants::speed_of_light / omega);
}

FresnelPair fresnel_nonretarded_superconductor(const SurfaceModel& model, double omega) {
    const auto* sc = std::get_if<Superconductor>(&model);
    if (sc == nullptr) throw std::invalid_argument("fresnel_nonretarded_superconductor: model is not a superconductor");
    require_frequency(omega);
    validate(model);
    constexpr double c2 = constants::speed_of_light * constants::speed_of_light;
    const double l2 = sc->london_length_squared();
    const double d2 = sc->skin_depth_squared(omega);
    const complex numerator(d2, -2.0 * l2);
    return {0.0, numerator / (numerator - 2.0 * omega * omega * d2 * l2 / c2)};
}

} // namespace cpent::media
