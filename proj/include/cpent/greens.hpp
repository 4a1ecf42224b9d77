// greens.hpp — dyadic Green's tensors above a planar half-space and the
// collective decay / coupling coefficients derived from them.
//
// Both emitters sit at the same height z above the interface (plane z = 0),
// separated laterally along +x. Lengths enter scaled by k0 = omega0 / c:
// x~ = k0 x, z~ = k0 z. All rates are reported in units of the free-space
// spontaneous emission rate Gamma0, so dipole magnitudes, hbar and eps0 drop
// out: Gamma_ij / Gamma0 = 6 pi / k0 Im[d_i . G . d_j] and
// Omega_ij / Gamma0 = -3 pi / k0 Re[d_i . G . d_j] for unit dipoles.
//
// The Casimir–Polder level shifts of each emitter are equal for equal heights
// and do not enter the collective dynamics, so they are not computed here.

#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

#include "cpent/media.hpp"
#include "cpent/quadrature.hpp"

namespace cpent {

template <typename Scalar>
using GreensTensorT = Eigen::Matrix<std::complex<Scalar>, 3, 3>;
using GreensTensor = GreensTensorT<double>;

// Orientation shared by both dipoles, tilted by theta from the x axis in the
// x–z plane: d = (cos theta, 0, sin theta).
class DipoleConfig {
public:
    enum class Kind { xx, zz, angle };

    static DipoleConfig xx() { return DipoleConfig(Kind::xx, 0.0); }
    static DipoleConfig zz();
    static DipoleConfig angle(double theta);
    static DipoleConfig parse(const std::string& text);

    Kind kind() const { return kind_; }
    double theta() const { return theta_; }
    Eigen::Vector3d direction() const;
    std::string label() const;

private:
    DipoleConfig(Kind kind, double theta) : kind_(kind), theta_(theta) {}
    Kind kind_;
    double theta_;
};

inline constexpr double kDefaultWavelength = 737e-9;
inline constexpr double kMinimumHeight = 1e-3;

struct Geometry {
    double x_scaled{1.0};
    double z_scaled{0.2};
    DipoleConfig dipoles{DipoleConfig::xx()};
    double wavelength{kDefaultWavelength};

    double k0() const;
    double omega() const;
};

enum class FresnelApproximation {
    exact,
    // r_s = 0, r_p = (eps - 1) / (eps + 1) independent of k_par; reproduces the
    // p-polarized closed forms used for the non-retarded regime.
    nonretarded_p_only,
};

struct CouplingOptions {
    numerics::QuadratureSpec quadrature{};
    FresnelApproximation approximation{FresnelApproximation::exact};
    // Allowed excess |Gamma12| - Gamma before coupling_set reports an error.
    double positivity_tolerance{1e-6};
};

// Free-space dyadic Green's tensor (1/m) for two points separated by
// x~ / k0 along x. Requires x~ > 0.
GreensTensor greens_free(double x_scaled, double omega);

// Reflected (scattering) Green's tensor (1/m) for source and observation
// points at common height z~ with signed lateral offset x~ = k0 (x1 - x2).
// Sommerfeld integral split into the propagating branch (k_par <= k0,
// integrated in phi with k_perp = k0 sin phi) and the evanescent branch
// (k_perp = i k0 kappa).
GreensTensor greens_scattering_at(double x_scaled, double z_scaled, const media::SurfaceModel& model,
                                  double omega, const CouplingOptions& options = {});
GreensTensor greens_scattering(const Geometry& geometry, const media::SurfaceModel& model, double omega,
                               const CouplingOptions& options = {});

// d1* . G . d2 in units where the free coincidence limit Im G = k0 / (6 pi)
// maps to a decay rate of Gamma0.
double gamma_from_tensor(const GreensTensor& g, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2, double k0);
double omega_from_tensor(const GreensTensor& g, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2, double k0);

// A coefficient split into its free-space and surface-scattering parts.
struct Contribution {
    double free{0.0};
    double scattering{0.0};
    double total() const { return free + scattering; }
};

Contribution gamma_self(const Geometry& geometry, const media::SurfaceModel& model,
                        const CouplingOptions& options = {});
Contribution gamma_pair(const Geometry& geometry, const media::SurfaceModel& model,
                        const CouplingOptions& options = {});
Contribution omega_pair(const Geometry& geometry, const media::SurfaceModel& model,
                        const CouplingOptions& options = {});

struct CouplingSet {
    Contribution gamma_self;
    Contribution gamma_pair;
    Contribution omega_pair;

    double gamma() const { return gamma_self.total(); }
    double gamma12() const { return gamma_pair.total(); }
    double omega12() const { return omega_pair.total(); }

    // For dynamics studies that prescribe the rates directly.
    static CouplingSet from_totals(double gamma, double gamma12, double omega12);
};

struct PairCoupling {
    Contribution gamma_pair;
    Contribution omega_pair;
};

// Gamma12 and Omega12 from a single pair tensor evaluation.
PairCoupling pair_coupling(const Geometry& geometry, const media::SurfaceModel& model,
                           const CouplingOptions& options = {});

// Assembles a CouplingSet from a (possibly cached) self term, applying the
// |Gamma12| <= Gamma check.
CouplingSet combine(const Contribution& gamma_self, const PairCoupling& pair, const Geometry& geometry,
                    double positivity_tolerance);

// Bundles the three coefficients, evaluating each tensor once. Throws
// NumericalError if |Gamma12| exceeds Gamma by more than the tolerance.
CouplingSet coupling_set(const Geometry& geometry, const media::SurfaceModel& model,
                         const CouplingOptions& options = {});

// Closed-form scattering decay of a single emitter in the p-only,
// k-independent r_p approximation (xx or zz only).
double gamma_self_scattering_p_only(double z_scaled, const DipoleConfig& dipoles, std::complex<double> r_p);

// Relative decay for xx dipoles above a Drude metal in the non-retarded
// limit: free part plus (3/8)(omega gamma / omega_p^2)(1/z^3 - 4 F(x, z)).
double relative_decay_drude_nonretarded(double x_scaled, double z_scaled, const media::Drude& metal, double omega,
                                        const numerics::QuadratureSpec& quadrature = {});

} // namespace cpent
