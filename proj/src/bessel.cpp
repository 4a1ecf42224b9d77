#include "cpent/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cpent::numerics {
namespace {

constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

// sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
double series(int n, double x) {
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = 1.0;
    for (int i = 1; i <= n; ++i) term *= half / i;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * (k + n));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

BesselJ012 miller(double x) {
    int start = static_cast<int>(x + 30.0 + 2.0 * std::sqrt(40.0 * x));
    start += start % 2;
    double above = 0.0;
    double current = 1e-30;
    double norm = 0.0;
    BesselJ012 out{0.0, 0.0, 0.0};
    for (int k = start; k > 0; --k) {
        const double below = 2.0 * k / x * current - above;
        above = current;
        current = below;
        // current now holds J_{k-1}
        const int order = k - 1;
        if (order > 0 && order % 2 == 0) norm += 2.0 * current;
        if (order == 2) out.j2 = current;
        if (order == 1) out.j1 = current;
        if (std::abs(current) > 1e250) {
            current *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
            out.j2 *= 1e-250;
            out.j1 *= 1e-250;
        }
    }
    out.j0 = current;
    norm += current;
    out.j0 /= norm;
    out.j1 /= norm;
    out.j2 /= norm;
    return out;
}

// Hankel expansion J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi), nu in {0, 1}.
double hankel(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        const double magnitude = std::abs(term);
        if (magnitude > previous) break;
        previous = magnitude;
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            case 0: p += term; break;
        }
        if (magnitude < 1e-17) break;
    }
    // cos/sin of chi = x - (nu/2 + 1/4) pi, expanded to avoid cancellation.
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double cos_chi = nu == 0 ? (c + s) * std::numbers::sqrt2 / 2.0 : (s - c) * std::numbers::sqrt2 / 2.0;
    const double sin_chi = nu == 0 ? (s - c) * std::numbers::sqrt2 / 2.0 : -(s + c) * std::numbers::sqrt2 / 2.0;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

void check_argument(double x) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("bessel_j: argument must be finite and non-negative, got " + std::to_string(x));
}

} // namespace

BesselJ012 bessel_j012(double x) {
    check_argument(x);
    if (x < kSeriesLimit) return {series(0, x), series(1, x), series(2, x)};
    if (x < kAsymptoticLimit) return miller(x);
    const double j0 = hankel(0, x);
    const double j1 = hankel(1, x);
    return {j0, j1, 2.0 * j1 / x - j0};
}

double bessel_j(int order, double x) {
    if (order < 0 || order > 2)
        throw std::invalid_argument("bessel_j: unsupported order " + std::to_string(order));
    const BesselJ012 j = bessel_j012(x);
    return order == 0 ? j.j0 : order == 1 ? j.j1 : j.j2;
}

} // namespace cpent::numerics
