#include "cpent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cpent/errors.hpp"

namespace cpent {
namespace {

using complex = std::complex<double>;
using Sector = Eigen::Matrix<complex, 6, 1>;

// Sector layout: rho11, rho22, rho33, rho23, rho32, rho44.
enum : int { s11 = 0, s22, s33, s23, s32, s44 };

Eigen::Vector4d sorted_eigenvalues(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void require_couplings(const CouplingSet& c) {
    if (!std::isfinite(c.gamma()) || !std::isfinite(c.gamma12()) || !std::isfinite(c.omega12()))
        throw std::invalid_argument("couplings must be finite");
    if (!(c.gamma() >= 0.0)) throw std::invalid_argument("couplings: Gamma must be >= 0");
}

Sector to_sector(const TwoQubitState& state) {
    const DensityMatrix& rho = state.matrix();
    double outside = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const bool inside = (r == c) || (r == eg && c == ge) || (r == ge && c == eg);
            if (!inside) outside = std::max(outside, std::abs(rho(r, c)));
        }
    if (outside > 0.0) {
        std::ostringstream msg;
        msg << "evolve_numerical: initial state has coherences outside the closed sector (max |element| = " << outside
            << ")";
        throw std::invalid_argument(msg.str());
    }
    Sector y;
    y << rho(ee, ee), rho(eg, eg), rho(ge, ge), rho(eg, ge), rho(ge, eg), rho(gg, gg);
    return y;
}

DensityMatrix from_sector(const Sector& y) {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(ee, ee) = y[s11];
    rho(eg, eg) = y[s22];
    rho(ge, ge) = y[s33];
    rho(eg, ge) = y[s23];
    rho(ge, eg) = y[s32];
    rho(gg, gg) = y[s44];
    return rho;
}

class SectorGenerator {
public:
    explicit SectorGenerator(const CouplingSet& c) : g_(c.gamma()), g12_(c.gamma12()), w_(c.omega12()) {}

    Sector operator()(const Sector& y) const {
        const complex i(0.0, 1.0);
        const complex coh = y[s23] + y[s32];
        Sector d;
        d[s11] = -2.0 * g_ * y[s11];
        d[s44] = g_ * (y[s22] + y[s33]) + g12_ * coh;
        d[s22] = -i * w_ * (y[s32] - y[s23]) + g_ * (y[s11] - y[s22]) - 0.5 * g12_ * coh;
        d[s33] = -i * w_ * (y[s23] - y[s32]) + g_ * (y[s11] - y[s33]) - 0.5 * g12_ * coh;
        const complex feed = 0.5 * g12_ * (2.0 * y[s11] - y[s22] - y[s33]);
        d[s23] = -i * w_ * (y[s33] - y[s22]) - g_ * y[s23] + feed;
        d[s32] = -i * w_ * (y[s22] - y[s33]) - g_ * y[s32] + feed;
        return d;
    }

    double fastest_rate() const { return std::max(g_ + std::abs(g12_), 2.0 * std::abs(w_)); }

private:
    double g_;
    double g12_;
    double w_;
};

Sector rk4_step(const SectorGenerator& f, const Sector& y, double h) {
    const Sector k1 = f(y);
    const Sector k2 = f(y + 0.5 * h * k1);
    const Sector k3 = f(y + 0.5 * h * k2);
    const Sector k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

TwoQubitState::TwoQubitState(const DensityMatrix& rho, const StateTolerance& tolerance) : rho_(rho) {
    if (!rho.allFinite()) throw std::invalid_argument("TwoQubitState: non-finite element");
    const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerance.hermiticity) {
        std::ostringstream msg;
        msg << "TwoQubitState: not Hermitian (max |rho - rho^dagger| = " << asym << ")";
        throw std::invalid_argument(msg.str());
    }
    const complex tr = rho.trace();
    if (std::abs(tr - 1.0) > tolerance.trace) {
        std::ostringstream msg;
        msg << "TwoQubitState: trace " << tr.real() << " differs from 1";
        throw std::invalid_argument(msg.str());
    }
    const double lowest = min_eigenvalue();
    if (lowest < -tolerance.positivity) {
        std::ostringstream msg;
        msg << "TwoQubitState: not positive semidefinite (min eigenvalue " << lowest << ")";
        throw std::invalid_argument(msg.str());
    }
}

TwoQubitState TwoQubitState::basis(BasisIndex index) {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(index, index) = 1.0;
    return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::subradiant() {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(eg, eg) = rho(ge, ge) = 0.5;
    rho(eg, ge) = rho(ge, eg) = -0.5;
    return TwoQubitState(rho);
}

TwoQubitState TwoQubitState::entangled_steady() {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(eg, eg) = rho(ge, ge) = 0.25;
    rho(eg, ge) = rho(ge, eg) = -0.25;
    rho(gg, gg) = 0.5;
    return TwoQubitState(rho);
}

double TwoQubitState::min_eigenvalue() const { return sorted_eigenvalues(rho_)[0]; }

SymmetricAntisymmetricView symmetric_view(const TwoQubitState& state) {
    const auto& r = state.matrix();
    return {r(eg, eg) + r(ge, ge), r(eg, eg) - r(ge, ge), r(eg, ge) + r(ge, eg), r(eg, ge) - r(ge, eg)};
}

TwoQubitState evolve_analytical(const CouplingSet& couplings, double t) {
    require_couplings(couplings);
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolve_analytical: t must be finite and >= 0");
    const double g = couplings.gamma();
    const double g12 = couplings.gamma12();
    const double w = couplings.omega12();

    const double slow = std::exp(-(g - g12) * t);
    const double fast = std::exp(-(g + g12) * t);
    const double damp = std::exp(-g * t);

    const double phi_plus = 0.5 * (slow + fast);
    const double psi_plus = -0.5 * (slow - fast);
    const double phi_minus = std::cos(2.0 * w * t) * damp;
    const complex psi_minus(0.0, std::sin(2.0 * w * t) * damp);

    DensityMatrix rho = DensityMatrix::Zero();
    rho(eg, eg) = 0.5 * (phi_plus + phi_minus);
    rho(ge, ge) = 0.5 * (phi_plus - phi_minus);
    rho(eg, ge) = 0.5 * (psi_plus + psi_minus);
    rho(ge, eg) = 0.5 * (psi_plus - psi_minus);
    rho(gg, gg) = 1.0 - phi_plus;
    return TwoQubitState(rho);
}

std::vector<TwoQubitState> evolve_numerical(const CouplingSet& couplings, const TwoQubitState& initial,
                                            std::span<const double> t_grid, const PropagatorOptions& options) {
    require_couplings(couplings);
    if (t_grid.empty()) throw std::invalid_argument("evolve_numerical: empty time grid");
    if (t_grid.front() != 0.0) throw std::invalid_argument("evolve_numerical: time grid must start at 0");
    for (std::size_t k = 1; k < t_grid.size(); ++k)
        if (!(t_grid[k] > t_grid[k - 1]) || !std::isfinite(t_grid[k]))
            throw std::invalid_argument("evolve_numerical: time grid must be strictly increasing and finite");

    const SectorGenerator f(couplings);
    const double rate = f.fastest_rate();
    const double nominal = rate > 0.0 ? std::min(options.max_step, 0.1 / rate) : options.max_step;

    Sector y = to_sector(initial);
    std::vector<TwoQubitState> out;
    out.reserve(t_grid.size());
    out.push_back(initial);

    double t = 0.0;
    double h = nominal;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        const double target = t_grid[k];
        const double snap = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, target);
        while (t < target) {
            const double remaining = target - t;
            if (remaining <= snap) {
                t = target;
                break;
            }
            const bool last = h >= remaining;
            const double step = last ? remaining : h;
            const Sector full = rk4_step(f, y, step);
            const Sector half = rk4_step(f, rk4_step(f, y, 0.5 * step), 0.5 * step);
            const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
            const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * half.cwiseAbs().maxCoeff();
            if (err <= std::max(options.tolerance_per_time * step, roundoff)) {
                y = half + (half - full) / 15.0;
                t = last ? target : t + step;
                h = std::min(nominal, 2.0 * h);
            } else {
                h = 0.5 * step;
                if (h < options.min_step) {
                    std::ostringstream msg;
                    msg << "evolve_numerical: step control failed at t = " << t << " (h = " << h << ")";
                    throw NumericalError(msg.str());
                }
            }
        }
        out.emplace_back(from_sector(y));
    }
    return out;
}

double concurrence(const TwoQubitState& state) {
    const DensityMatrix& rho = state.matrix();
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(rho);
    const Eigen::Vector4d values = solver.eigenvalues();
    const double cutoff = 16.0 * std::numeric_limits<double>::epsilon() * std::max(values.maxCoeff(), 0.0);

    Eigen::Matrix<complex, 4, Eigen::Dynamic> w(4, 0);
    for (int k = 0; k < 4; ++k) {
        if (values[k] <= cutoff) continue;
        w.conservativeResize(Eigen::NoChange, w.cols() + 1);
        w.col(w.cols() - 1) = solver.eigenvectors().col(k) * std::sqrt(values[k]);
    }
    if (w.cols() == 0) return 0.0;

    // sigma_y (x) sigma_y in the (ee, eg, ge, gg) basis
    DensityMatrix flip = DensityMatrix::Zero();
    flip(ee, gg) = flip(gg, ee) = -1.0;
    flip(eg, ge) = flip(ge, eg) = 1.0;

    const Eigen::MatrixXcd tau = w.transpose() * flip * w;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
    const Eigen::VectorXd s = svd.singularValues();
    double c = s[0];
    for (Eigen::Index k = 1; k < s.size(); ++k) c -= s[k];
    return std::clamp(c, 0.0, 1.0);
}

RelativeDecay relative_decay(const CouplingSet& couplings) {
    return {couplings.gamma_self.free - couplings.gamma_pair.free,
            couplings.gamma_self.scattering - couplings.gamma_pair.scattering};
}

SteadyState steady_state(const CouplingSet& couplings, double threshold) {
    require_couplings(couplings);
    if (!(threshold >= 0.0)) throw std::invalid_argument("steady_state: threshold must be >= 0");
    const double d = couplings.gamma() - couplings.gamma12();
    if (std::abs(d) <= threshold) return {TwoQubitState::entangled_steady(), SteadyState::Kind::entangled_steady};
    return {TwoQubitState::basis(gg), SteadyState::Kind::trivial_ground};
}

} // namespace cpent
