// bessel.hpp — Bessel functions of the first kind, orders 0, 1 and 2

#pragma once

namespace cpent::numerics {

struct BesselJ012 {
    double j0;
    double j1;
    double j2;
};

// J_0, J_1 and J_2 at a non-negative real argument, evaluated together.
// Power series below 8, Miller backward recurrence on [8, 25), Hankel
// asymptotic expansion from 25 upwards. Absolute error ~1e-15.
BesselJ012 bessel_j012(double x);

// Single-order entry point; throws std::invalid_argument for an order outside
// {0, 1, 2} or a negative / non-finite argument.
double bessel_j(int order, double x);

} // namespace cpent::numerics
