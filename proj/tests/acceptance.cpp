// acceptance.cpp — one PASS/FAIL line per acceptance criterion

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpent/dynamics.hpp"
#include "cpent/greens.hpp"
#include "cpent/sweeps.hpp"

using namespace cpent;
using complex = std::complex<double>;
using std::numbers::pi;

namespace {

struct Verdict {
    bool pass{true};
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        detail << (ok ? "" : "[miss] ") << what << "; ";
    }
};

std::string num(double v, int digits = 4) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.*g", digits, v);
    return buffer;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

int failures = 0;

void criterion(int id, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.check(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failures;
    std::printf("%s criterion %d (%.3f s): %s\n", v.pass ? "PASS" : "FAIL", id, seconds, v.detail.str().c_str());
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double decay_at(double x, double z, const media::SurfaceModel& m) {
    const CouplingSet s = coupling_set(Geometry{x, z}, m);
    return s.gamma() - s.gamma12();
}

double concurrence_at(double x, double z, const media::SurfaceModel& m, double t) {
    return concurrence(evolve_analytical(coupling_set(Geometry{x, z}, m), t));
}

// Free dyadic in k0-scaled units and its mirror image for a perfect conductor.
GreensTensor free_dyadic(const Eigen::Vector3d& r) {
    const complex i(0.0, 1.0);
    const double d = r.norm();
    const Eigen::Vector3d u = r / d;
    const complex e = std::exp(i * d) / (4.0 * pi * d);
    return e * (1.0 + i / d - 1.0 / (d * d)) * GreensTensor::Identity() +
           e * (-1.0 - 3.0 * i / d + 3.0 / (d * d)) * (u * u.transpose()).cast<complex>();
}

GreensTensor image_tensor(double x, double z) {
    return free_dyadic(Eigen::Vector3d(x, 0.0, 2.0 * z)) * Eigen::Vector3d(-1.0, -1.0, 1.0).cast<complex>().asDiagonal();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) mx += std::log(x[k]), my += std::log(y[k]);
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = std::log(x[k]) - mx;
        sxy += dx * (std::log(y[k]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

bool state_ok(const TwoQubitState& s) {
    const DensityMatrix& m = s.matrix();
    return std::abs(m.trace() - 1.0) <= 1e-12 && (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 &&
           s.min_eigenvalue() >= -1e-10;
}

} // namespace

int main() {
    const auto suite_start = std::chrono::steady_clock::now();
    const media::SurfaceModel free = media::FreeSpace{};
    const media::SurfaceModel pc = media::PerfectConductor{};
    const media::SurfaceModel gold = media::gold();
    const media::SurfaceModel nb = media::niobium(0.01);

    criterion(1, [](Verdict& v) {
        const auto set = CouplingSet::from_totals(0.7, 0.7, -0.3);
        const auto start = std::chrono::steady_clock::now();
        const auto s = evolve_analytical(set, 1e3);
        const double c = concurrence(s);
        const double elapsed = seconds_since(start);
        const double dev = (s.matrix() - TwoQubitState::entangled_steady().matrix()).cwiseAbs().maxCoeff();
        v.check(within(c, 0.5, 1e-6), "C=" + num(c, 10));
        v.check(dev <= 1e-8, "max|rho-rho_steady|=" + num(dev, 3));
        v.check(elapsed < 1e-3, "runtime " + num(elapsed * 1e3, 3) + " ms");
    });

    criterion(2, [&](Verdict& v) {
        const auto start = std::chrono::steady_clock::now();
        const double dp = decay_at(1.0, 0.2, pc), dn = decay_at(1.0, 0.2, nb), dg = decay_at(1.0, 0.2, gold);
        const double elapsed = seconds_since(start);
        v.check(within(dp, 2.2e-3, 0.2 * 2.2e-3), "perfect D=" + num(dp) + " (2.2e-3 +-20%)");
        v.check(within(dn, 4.7e-3, 0.2 * 4.7e-3), "Nb D=" + num(dn) + " (4.7e-3 +-20%)");
        v.check(within(dg, 0.037, 0.15 * 0.037), "gold D=" + num(dg) + " (0.037 +-15%)");
        v.check(elapsed < 5.0, "runtime " + num(elapsed, 3) + " s");
    });

    criterion(3, [&](Verdict& v) {
        const double cp = concurrence_at(1.0, 0.2, pc, 30.0);
        const double cn = concurrence_at(1.0, 0.2, nb, 30.0);
        const double cg = concurrence_at(1.0, 0.2, gold, 30.0);
        v.check(within(cp, 0.41, 0.05), "perfect C=" + num(cp) + " (0.41 +-0.05)");
        v.check(within(cn, 0.37, 0.05), "Nb C=" + num(cn) + " (0.37 +-0.05)");
        v.check(within(cg, 0.05, 0.04), "gold C=" + num(cg) + " (0.05 +-0.04)");

        const auto trace = concurrence_trace(Geometry{1.0, 0.2}, free, 30.0, 301);
        const double g = trace.couplings.gamma(), g12 = trace.couplings.gamma12(), w = trace.couplings.omega12();
        double worst = 0.0;
        for (std::size_t k = 0; k < trace.t.size(); ++k) {
            const double t = trace.t[k];
            const double psi_plus = (std::exp(-(g + g12) * t) - std::exp(-(g - g12) * t)) / 2.0;
            const complex psi_minus(0.0, std::exp(-g * t) * std::sin(2.0 * w * t));
            const double expected = std::abs(psi_plus + psi_minus);
            worst = std::max(worst, std::abs(trace.concurrence[k] - expected));
        }
        const double cf = trace.concurrence.back();
        v.check(worst <= 1e-9, "free trace vs closed form max dev " + num(worst, 3));
        v.check(cf >= 0.02 && cf <= 0.12, "free C=" + num(cf) + " in [0.02, 0.12]");
    });

    criterion(4, [&](Verdict& v) {
        const auto opt = find_optimal_z(gold, DipoleConfig::xx(), 1.0, 0.1, 1.5);
        const double c = concurrence_at(1.0, opt.z, gold, 30.0);
        v.check(within(opt.z, 0.4, 0.05), "z*=" + num(opt.z) + " (0.4 +-0.05), D=" + num(opt.relative_decay));
        v.check(within(c, 0.24, 0.04), "C(z*)=" + num(c) + " (0.24 +-0.04)");
    });

    criterion(5, [&](Verdict& v) {
        const double zz = gamma_self(Geometry{1.0, 0.01, DipoleConfig::zz()}, pc).total();
        const double xx = gamma_self(Geometry{1.0, 0.01, DipoleConfig::xx()}, pc).total();
        v.check(within(zz, 2.0, 1e-3), "Gamma_zz=" + num(zz, 8));
        v.check(within(xx, 0.0, 1e-3), "Gamma_xx=" + num(xx, 3));
    });

    criterion(6, [&](Verdict& v) {
        const auto start = std::chrono::steady_clock::now();
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> pos(0.1, 3.0);
        double worst_image = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double x = pos(rng), z = pos(rng);
            const GreensTensor ref = image_tensor(x, z);
            for (const auto& d : {DipoleConfig::xx(), DipoleConfig::zz()}) {
                const Eigen::Vector3cd u = d.direction().cast<complex>();
                const complex dgd = (u.transpose() * ref * u)(0);
                const Geometry geo{x, z, d};
                const auto pair = pair_coupling(geo, pc);
                const double g_ref = 6.0 * pi * dgd.imag(), w_ref = -3.0 * pi * dgd.real();
                worst_image = std::max(worst_image, std::abs(pair.gamma_pair.scattering - g_ref) / std::abs(g_ref));
                worst_image = std::max(worst_image, std::abs(pair.omega_pair.scattering - w_ref) / std::abs(w_ref));
            }
        }
        v.check(worst_image <= 1e-6, "image-dipole max rel err " + num(worst_image, 3));

        std::uniform_real_distribution<double> rate(0.05, 3.0), frac(-1.0, 1.0), omega(-5.0, 5.0);
        std::vector<double> t(301);
        for (int k = 0; k < 301; ++k) t[k] = 0.1 * k;
        double worst_prop = 0.0;
        for (int k = 0; k < 50; ++k) {
            const double g = rate(rng);
            const auto set = CouplingSet::from_totals(g, frac(rng) * g, omega(rng));
            const auto states = evolve_numerical(set, TwoQubitState::basis(eg), t);
            for (std::size_t n = 0; n < t.size(); ++n)
                worst_prop = std::max(worst_prop,
                                      (states[n].matrix() - evolve_analytical(set, t[n]).matrix()).cwiseAbs().maxCoeff());
        }
        v.check(worst_prop <= 1e-7, "propagator max dev " + num(worst_prop, 3));
        const double elapsed = seconds_since(start);
        v.check(elapsed < 30.0, "runtime " + num(elapsed, 3) + " s");
    });

    criterion(7, [&](Verdict& v) {
        std::vector<double> zs{0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08}, dsc;
        for (double z : zs) dsc.push_back(relative_decay(coupling_set(Geometry{1.0, z}, gold)).scattering);
        const double slope = fit_slope(zs, dsc);
        v.check(within(slope, -3.0, 0.2), "Drude D^sc slope " + num(slope) + " (-3 +-0.2)");

        const double reference = decay_at(1.0, 0.2, pc);
        std::vector<double> ts{0.01, 0.02, 0.05, 0.1}, excess;
        std::string listing;
        for (double tr : ts) {
            excess.push_back(decay_at(1.0, 0.2, media::niobium(tr)) - reference);
            listing += num(excess.back()) + " ";
        }
        const double exponent = fit_slope(ts, excess);
        v.check(within(exponent, 4.0, 0.3), "Nb excess exponent " + num(exponent) + " (4 +-0.3), excess " + listing);
    });

    criterion(8, [&](Verdict& v) {
        bool states_ok = true;
        std::vector<double> t(301);
        for (int k = 0; k < 301; ++k) t[k] = 0.1 * k;
        for (const auto* m : {&free, &pc, &gold, &nb}) {
            const auto set = coupling_set(Geometry{1.0, 0.2}, *m);
            for (const auto& s : concurrence_trace(set, 30.0, 301).states) states_ok = states_ok && state_ok(s);
            for (const auto& s : evolve_numerical(set, TwoQubitState::basis(eg), t)) states_ok = states_ok && state_ok(s);
        }
        v.check(states_ok, "trace/Hermiticity/positivity on all trajectory samples");

        for (const auto* m : {&free, &pc, &gold, &nb}) {
            SweepSpec spec;
            spec.model = *m;
            spec.observable = ObservableSpec::parse("gamma_self");
            const auto g = evaluate_map(spec, 0);
            spec.observable = ObservableSpec::parse("gamma_pair");
            const auto g12 = evaluate_map(spec, 0);
            const double margin = (g.values - g12.values.cwiseAbs()).minCoeff();
            v.check(margin >= 0.0, media::name(*m) + " 60x60 min(Gamma-|Gamma12|)=" + num(margin, 3));
        }

        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double x = 0.01 + 0.05 * k;
            const long double xl = x, s = std::sin(xl), c = std::cos(xl), x3 = xl * xl * xl;
            const double dxx = static_cast<double>(1.0L - 3.0L * (s - xl * c) / x3);
            const double dzz = static_cast<double>(1.0L - 1.5L * (xl * xl * s + xl * c - s) / x3);
            worst = std::max(worst, std::abs(decay_at(x, 0.2, free) - dxx) / std::abs(dxx));
            worst = std::max(worst, std::abs(relative_decay(coupling_set(Geometry{x, 0.2, DipoleConfig::zz()}, free)).total() - dzz) /
                                        std::abs(dzz));
        }
        v.check(worst <= 1e-8, "free closed forms on 200 points, max rel err " + num(worst, 3));
    });

    const double total = seconds_since(suite_start);
    std::printf("suite runtime %.1f s (budget 180 s); %d criteria failed\n", total, failures);
    return failures == 0 ? 0 : 1;
}
