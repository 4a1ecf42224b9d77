// dynamics.hpp — two-emitter master-equation dynamics, concurrence and the
// entangled steady state.
//
// Basis order is (|ee>, |eg>, |ge>, |gg>); the element rho_ij
// with 1-based indices corresponds to rho(i - 1, j - 1). Time is always the
// dimensionless Gamma0 t.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "cpent/greens.hpp"

namespace cpent {

template <typename Scalar>
using DensityMatrixT = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
using DensityMatrix = DensityMatrixT<double>;

enum BasisIndex : int { ee = 0, eg = 1, ge = 2, gg = 3 };

struct StateTolerance {
    double hermiticity{1e-12};
    double trace{1e-12};
    double positivity{1e-10};
};

// Density matrix checked on construction: Hermitian, unit trace and
// positive semidefinite within the tolerances.
class TwoQubitState {
public:
    explicit TwoQubitState(const DensityMatrix& rho, const StateTolerance& tolerance = {});

    static TwoQubitState basis(BasisIndex index);
    // (|eg> - |ge>) / sqrt(2)
    static TwoQubitState subradiant();
    // (|psi_sub><psi_sub| + |gg><gg|) / 2
    static TwoQubitState entangled_steady();

    const DensityMatrix& matrix() const { return rho_; }
    std::complex<double> operator()(int row, int col) const { return rho_(row, col); }
    double population(BasisIndex index) const { return rho_(index, index).real(); }
    double min_eigenvalue() const;

private:
    DensityMatrix rho_;
};

// Phi+- = rho22 +- rho33, Psi+- = rho23 +- rho32.
struct SymmetricAntisymmetricView {
    std::complex<double> phi_plus;
    std::complex<double> phi_minus;
    std::complex<double> psi_plus;
    std::complex<double> psi_minus;
};

SymmetricAntisymmetricView symmetric_view(const TwoQubitState& state);

// Closed-form evolution of |eg><eg| at time Gamma0 t >= 0.
TwoQubitState evolve_analytical(const CouplingSet& couplings, double t);

struct PropagatorOptions {
    // Richardson local-error bound per unit time.
    double tolerance_per_time{1e-9};
    double max_step{0.01};
    double min_step{1e-10};
};

// RK4 integration of the closed six-element sector
// {rho11, rho22, rho33, rho23, rho32, rho44}. Initial states with weight on
// any other element are rejected. The grid must start at 0 and increase
// strictly; one state is returned per grid point, each validated.
std::vector<TwoQubitState> evolve_numerical(const CouplingSet& couplings, const TwoQubitState& initial,
                                            std::span<const double> t_grid, const PropagatorOptions& options = {});

// Wootters concurrence.
double concurrence(const TwoQubitState& state);

struct RelativeDecay {
    double free;
    double scattering;
    double total() const { return free + scattering; }
};

// D = Gamma - Gamma12 with its free / scattering split.
RelativeDecay relative_decay(const CouplingSet& couplings);

struct SteadyState {
    enum class Kind { entangled_steady, trivial_ground };
    TwoQubitState state;
    Kind kind;
};

inline constexpr double kDefaultSteadyThreshold = 1e-6;

// Long-time limit of the |eg> evolution: the half-subradiant mixture when
// |D| <= threshold, otherwise the ground state.
SteadyState steady_state(const CouplingSet& couplings, double threshold = kDefaultSteadyThreshold);

} // namespace cpent
