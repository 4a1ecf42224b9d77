#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cpent/dynamics.hpp"
#include "cpent/errors.hpp"

using namespace cpent;
using complex = std::complex<double>;

namespace {

struct Closed {
    double phi_plus;
    double psi_plus;
    complex phi_minus;
    complex psi_minus;
};

// Hand-solved |eg> evolution: the symmetric pair decays with Gamma +- Gamma12,
// the antisymmetric pair rotates at 2 Omega12 while decaying at Gamma.
Closed closed_form(double g, double g12, double w, double t) {
    const double fast = std::exp(-(g + g12) * t), slow = std::exp(-(g - g12) * t);
    const double damp = std::exp(-g * t);
    return {(fast + slow) / 2.0, (fast - slow) / 2.0, damp * std::cos(2.0 * w * t),
            complex(0.0, damp * std::sin(2.0 * w * t))};
}

std::vector<double> grid(double t_max, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
    return t;
}

TwoQubitState pure(const Eigen::Vector4cd& v) {
    const Eigen::Vector4cd u = v.normalized();
    return TwoQubitState(u * u.adjoint());
}

} // namespace

TEST_CASE("state validation") {
    DensityMatrix rho = DensityMatrix::Zero();
    rho(eg, eg) = 1.0;
    CHECK_NOTHROW(TwoQubitState{rho});
    rho(eg, eg) = 0.9;
    CHECK_THROWS_AS(TwoQubitState{rho}, std::invalid_argument);
    rho(eg, eg) = 0.5;
    rho(ge, ge) = 0.5;
    rho(eg, ge) = 0.1;
    CHECK_THROWS_AS(TwoQubitState{rho}, std::invalid_argument);
    rho(ge, eg) = 0.1;
    CHECK_NOTHROW(TwoQubitState{rho});
    rho(eg, ge) = rho(ge, eg) = 0.8;
    CHECK_THROWS_AS(TwoQubitState{rho}, std::invalid_argument);
}

TEST_CASE("named states") {
    const auto sub = TwoQubitState::subradiant();
    CHECK(sub(eg, ge).real() == doctest::Approx(-0.5));
    CHECK(sub.population(eg) == doctest::Approx(0.5));
    const auto steady = TwoQubitState::entangled_steady();
    CHECK(steady.population(gg) == doctest::Approx(0.5));
    CHECK(steady.population(eg) == doctest::Approx(0.25));
    CHECK(concurrence(steady) == doctest::Approx(0.5));
    CHECK(concurrence(sub) == doctest::Approx(1.0));
    CHECK(concurrence(TwoQubitState::basis(eg)) == 0.0);
    const auto view = symmetric_view(sub);
    CHECK(view.phi_plus.real() == doctest::Approx(1.0));
    CHECK(view.psi_plus.real() == doctest::Approx(-1.0));
    CHECK(std::abs(view.phi_minus) < 1e-15);
}

TEST_CASE("concurrence against pure-state and Werner oracles") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::Vector4cd v;
        for (int k = 0; k < 4; ++k) v(k) = complex(n(rng), n(rng));
        v.normalize();
        const double expected = 2.0 * std::abs(v(ee) * v(gg) - v(eg) * v(ge));
        CHECK(concurrence(pure(v)) == doctest::Approx(expected).epsilon(1e-10));
    }
    Eigen::Vector4cd bell = Eigen::Vector4cd::Zero();
    bell(ee) = bell(gg) = 1.0 / std::sqrt(2.0);
    const DensityMatrix b = bell * bell.adjoint();
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
        const TwoQubitState w(p * b + (1.0 - p) / 4.0 * DensityMatrix::Identity());
        CHECK(concurrence(w) == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)).epsilon(1e-10));
    }
}

TEST_CASE("analytic evolution matches the hand solution") {
    const double g = 1.0, g12 = 0.9, w = -2.07;
    for (double t : {0.0, 0.1, 1.0, 7.5, 30.0}) {
        const auto s = evolve_analytical(CouplingSet::from_totals(g, g12, w), t);
        const auto c = closed_form(g, g12, w, t);
        const auto v = symmetric_view(s);
        CHECK(v.phi_plus.real() == doctest::Approx(c.phi_plus).epsilon(1e-13));
        CHECK(v.psi_plus.real() == doctest::Approx(c.psi_plus).epsilon(1e-13));
        CHECK(std::abs(v.phi_minus - c.phi_minus) < 1e-13);
        CHECK(std::abs(v.psi_minus - c.psi_minus) < 1e-13);
        CHECK(s.population(gg) == doctest::Approx(1.0 - c.phi_plus).epsilon(1e-13));
        CHECK(s.population(ee) == 0.0);
    }
}

TEST_CASE("numerical propagation agrees with the analytic solution for random couplings") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gamma(0.05, 3.0), frac(-1.0, 1.0), omega(-5.0, 5.0);
    const auto t = grid(30.0, 61);
    for (int trial = 0; trial < 50; ++trial) {
        const double g = gamma(rng);
        const auto set = CouplingSet::from_totals(g, frac(rng) * g, omega(rng));
        const auto states = evolve_numerical(set, TwoQubitState::basis(eg), t);
        REQUIRE(states.size() == t.size());
        for (std::size_t k = 0; k < t.size(); ++k) {
            const auto exact = evolve_analytical(set, t[k]);
            CHECK((states[k].matrix() - exact.matrix()).cwiseAbs().maxCoeff() <= 1e-7);
        }
    }
}

TEST_CASE("ground population is monotone and concurrence is 2|rho23|") {
    const auto set = CouplingSet::from_totals(0.245, 0.160, -0.739);
    const auto t = grid(30.0, 301);
    const auto states = evolve_numerical(set, TwoQubitState::basis(eg), t);
    for (std::size_t k = 1; k < states.size(); ++k) CHECK(states[k].population(gg) >= states[k - 1].population(gg));
    for (const auto& s : states) {
        CHECK(concurrence(s) == doctest::Approx(2.0 * std::abs(s(eg, ge))).epsilon(1e-12));
        CHECK(s.min_eigenvalue() >= -1e-10);
    }
}

TEST_CASE("the coherent exchange does not touch the symmetric sector") {
    const auto t = grid(10.0, 41);
    const auto a = evolve_numerical(CouplingSet::from_totals(0.8, 0.5, 0.0), TwoQubitState::basis(eg), t);
    const auto b = evolve_numerical(CouplingSet::from_totals(0.8, 0.5, 3.0), TwoQubitState::basis(eg), t);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto va = symmetric_view(a[k]), vb = symmetric_view(b[k]);
        CHECK(std::abs(va.phi_plus - vb.phi_plus) < 1e-9);
        CHECK(std::abs(va.psi_plus - vb.psi_plus) < 1e-9);
        CHECK(a[k].population(gg) == doctest::Approx(b[k].population(gg)).epsilon(1e-9));
    }
}

TEST_CASE("stationary states") {
    const auto t = grid(20.0, 11);
    const auto set = CouplingSet::from_totals(1.0, 1.0, -0.7);
    for (const auto& s : evolve_numerical(set, TwoQubitState::subradiant(), t))
        CHECK((s.matrix() - TwoQubitState::subradiant().matrix()).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& s : evolve_numerical(CouplingSet::from_totals(0.3, 0.1, 2.0), TwoQubitState::basis(gg), t))
        CHECK(s.population(gg) == 1.0);
    // Perfect antisymmetric protection: |eg> relaxes to the half-subradiant mixture.
    const auto last = evolve_numerical(set, TwoQubitState::basis(eg), grid(60.0, 3)).back();
    CHECK((last.matrix() - TwoQubitState::entangled_steady().matrix()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("doubly excited initial state decays into both single excitations") {
    const auto set = CouplingSet::from_totals(1.0, 0.4, 0.5);
    const auto s = evolve_numerical(set, TwoQubitState::basis(ee), grid(1.0, 3)).back();
    CHECK(s.population(ee) == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
    CHECK(s.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("propagator input validation") {
    const auto set = CouplingSet::from_totals(1.0, 0.5, 0.1);
    DensityMatrix rho = DensityMatrix::Zero();
    rho(ee, ee) = rho(gg, gg) = 0.5;
    rho(ee, gg) = rho(gg, ee) = 0.5;
    const std::vector<double> t{0.0, 1.0};
    CHECK_THROWS_AS(evolve_numerical(set, TwoQubitState(rho), t), std::invalid_argument);
    const std::vector<double> bad_start{0.5, 1.0}, not_increasing{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(evolve_numerical(set, TwoQubitState::basis(eg), bad_start), std::invalid_argument);
    CHECK_THROWS_AS(evolve_numerical(set, TwoQubitState::basis(eg), not_increasing), std::invalid_argument);
    CHECK_THROWS_AS(evolve_analytical(set, -1.0), std::invalid_argument);
}

TEST_CASE("relative decay and steady state classification") {
    const auto d = relative_decay(coupling_set(Geometry{1.0, 0.2}, media::FreeSpace{}));
    CHECK(d.scattering == 0.0);
    CHECK(d.total() == doctest::Approx(1.0 - 3.0 * (std::sin(1.0) - std::cos(1.0))).epsilon(1e-12));

    const auto protected_pair = steady_state(CouplingSet::from_totals(0.5, 0.5, 0.2));
    CHECK(protected_pair.kind == SteadyState::Kind::entangled_steady);
    CHECK(concurrence(protected_pair.state) == doctest::Approx(0.5));
    const auto leaky = steady_state(CouplingSet::from_totals(0.5, 0.4, 0.2));
    CHECK(leaky.kind == SteadyState::Kind::trivial_ground);
    CHECK(leaky.state.population(gg) == 1.0);
    CHECK(steady_state(CouplingSet::from_totals(0.5, 0.49, 0.2), 0.02).kind == SteadyState::Kind::entangled_steady);
}
