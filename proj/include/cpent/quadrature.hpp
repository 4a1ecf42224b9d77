// quadrature.hpp — globally adaptive Gauss–Kronrod (7/15) integration
//
// Integrands may return double, std::complex<double> or any fixed-size Eigen
// vector/matrix; the error norm is the largest absolute component. All entry
// points are pure and safe to call concurrently.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cpent/errors.hpp"

namespace cpent::numerics {

struct QuadratureSpec {
    double relative_tolerance{1e-10};
    double absolute_tolerance{1e-14};
    int max_subdivisions{2000};
    // Semi-infinite integrals are cut at evanescent_cutoff_scale / decay_scale.
    double evanescent_cutoff_scale{40.0};

    void validate() const {
        if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
            throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
        if (!(evanescent_cutoff_scale > 0.0))
            throw std::invalid_argument("QuadratureSpec: evanescent_cutoff_scale must be positive");
    }
};

template <typename T>
struct QuadratureResult {
    T value;
    double error;
    int subdivisions;
};

inline double magnitude(double v) { return std::abs(v); }
template <typename Scalar>
double magnitude(const std::complex<Scalar>& v) { return std::abs(v); }
template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) { return v.cwiseAbs().maxCoeff(); }

// Non-convergence after max_subdivisions. The best estimate is available
// through the typed subclass; callers that only need the message catch this.
class QuadratureFailure : public NumericalError {
public:
    QuadratureFailure(const std::string& what, double error_estimate, int subdivisions)
        : NumericalError(what), error_estimate_(error_estimate), subdivisions_(subdivisions) {}
    double error_estimate() const { return error_estimate_; }
    int subdivisions() const { return subdivisions_; }

private:
    double error_estimate_;
    int subdivisions_;
};

template <typename T>
class QuadratureFailureWith : public QuadratureFailure {
public:
    QuadratureFailureWith(const std::string& what, QuadratureResult<T> best)
        : QuadratureFailure(what, best.error, best.subdivisions), best_(std::move(best)) {}
    const QuadratureResult<T>& best_estimate() const { return best_; }

private:
    QuadratureResult<T> best_;
};

namespace detail {

// Kronrod abscissae (positive half) and weights; Gauss weights for the
// odd-indexed abscissae.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline std::string scientific(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.3e", v);
    return buffer;
}

template <typename T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    double roundoff; // 50 eps * integral of |f| over the panel
};

// QK15 with the QUADPACK error heuristic.
template <typename T, typename F>
Panel<T> gauss_kronrod(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T fv[15] = {f(center)};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv[1 + 2 * j] = f(center - dx);
        fv[2 + 2 * j] = f(center + dx);
    }
    T kronrod = fv[0] * kWgk[7];
    T gauss = fv[0] * kWg[3];
    double abs_sum = kWgk[7] * magnitude(fv[0]);
    for (int j = 0; j < 7; ++j) {
        const T sum = fv[1 + 2 * j] + fv[2 + 2 * j];
        kronrod += sum * kWgk[j];
        if (j % 2 == 1) gauss += sum * kWg[j / 2];
        abs_sum += kWgk[j] * (magnitude(fv[1 + 2 * j]) + magnitude(fv[2 + 2 * j]));
    }
    const T mean = kronrod * 0.5;
    double asc = kWgk[7] * magnitude(T(fv[0] - mean));
    for (int j = 0; j < 7; ++j)
        asc += kWgk[j] * (magnitude(T(fv[1 + 2 * j] - mean)) + magnitude(T(fv[2 + 2 * j] - mean)));

    const double width = std::abs(half);
    double error = magnitude(T((kronrod - gauss) * half));
    asc *= width;
    if (asc > 0.0 && error > 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    kronrod *= half;
    return {a, b, std::move(kronrod), error, 50.0 * eps * abs_sum * width};
}

template <typename T>
bool panel_less(const Panel<T>& lhs, const Panel<T>& rhs) { return lhs.error < rhs.error; }

template <typename T, typename F>
QuadratureResult<T> adaptive(F& f, std::vector<double> nodes, const QuadratureSpec& spec,
                             double extra_error, const char* label) {
    std::vector<Panel<T>> heap;
    heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) heap.push_back(gauss_kronrod<T>(f, nodes[i], nodes[i + 1]));
    std::make_heap(heap.begin(), heap.end(), panel_less<T>);

    double roundoff = 0.0;
    auto totals = [&] {
        T value = heap.front().value;
        double error = heap.front().error;
        roundoff = heap.front().roundoff;
        for (std::size_t i = 1; i < heap.size(); ++i) {
            value += heap[i].value;
            error += heap[i].error;
            roundoff += heap[i].roundoff;
        }
        return std::pair<T, double>(std::move(value), error + extra_error);
    };

    T value;
    double error;
    std::tie(value, error) = totals();
    // Cancellation can put the requested relative accuracy below what double
    // arithmetic resolves; the roundoff level then counts as converged.
    auto tolerance = [&](const T& v) {
        return std::max({spec.relative_tolerance * magnitude(v), spec.absolute_tolerance, roundoff});
    };
    while (error > tolerance(value)) {
        if (static_cast<int>(heap.size()) >= spec.max_subdivisions) {
            throw QuadratureFailureWith<T>(
                std::string(label) + ": no convergence after " + std::to_string(heap.size()) +
                    " subdivisions (error " + scientific(error) + ", target " + scientific(tolerance(value)) + ")",
                QuadratureResult<T>{value, error, static_cast<int>(heap.size())});
        }
        std::pop_heap(heap.begin(), heap.end(), panel_less<T>);
        Panel<T> worst = std::move(heap.back());
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw QuadratureFailureWith<T>(std::string(label) + ": panel width underflow",
                                           QuadratureResult<T>{value, error, static_cast<int>(heap.size()) + 1});
        }
        heap.push_back(gauss_kronrod<T>(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end(), panel_less<T>);
        heap.push_back(gauss_kronrod<T>(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end(), panel_less<T>);
        std::tie(value, error) = totals();
    }
    return {std::move(value), std::max(error, roundoff), static_cast<int>(heap.size())};
}

inline std::vector<double> interval_nodes(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> nodes{a};
    std::vector<double> inner;
    for (double p : breakpoints)
        if (p > a && p < b) inner.push_back(p);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    nodes.insert(nodes.end(), inner.begin(), inner.end());
    nodes.push_back(b);
    return nodes;
}

} // namespace detail

// Adaptive integral of f over [a, b]. Breakpoints strictly inside (a, b) seed
// the initial panels (use them for known peaks or kinks).
template <typename F>
auto integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {},
                      std::span<const double> breakpoints = {}) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    spec.validate();
    if (!(std::isfinite(a) && std::isfinite(b) && a < b))
        throw std::invalid_argument("integrate_finite: requires finite a < b");
    return detail::adaptive<T>(f, detail::interval_nodes(a, b, breakpoints), spec, 0.0, "integrate_finite");
}

// Integral of f over [0, inf) for integrands bounded by a polynomial times
// exp(-decay_scale * k). The range is truncated at
// spec.evanescent_cutoff_scale / decay_scale; the tail estimate
// 2 |f(k_max)| / decay_scale is added to the reported error.
template <typename F>
auto integrate_evanescent(F&& f, double decay_scale, const QuadratureSpec& spec = {},
                          std::span<const double> breakpoints = {}) {
    using T = std::decay_t<std::invoke_result_t<F&, double>>;
    spec.validate();
    if (!(decay_scale > 0.0) || !std::isfinite(decay_scale))
        throw std::invalid_argument("integrate_evanescent: decay_scale must be positive");
    const double upper = spec.evanescent_cutoff_scale / decay_scale;
    const double tail = 2.0 * magnitude(f(upper)) / decay_scale;
    return detail::adaptive<T>(f, detail::interval_nodes(0.0, upper, breakpoints), spec, tail,
                               "integrate_evanescent");
}

} // namespace cpent::numerics
