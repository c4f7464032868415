#pragma once

#include <cmath>
#include <numbers>

namespace pafour {

/// Exponentially scaled modified Bessel function of order zero, e^{-|x|} I0(x).
///
/// Power series below the switch point, Hankel asymptotic expansion above it.
/// Both branches stay finite for arguments where I0 itself overflows.
inline double bessel_i0_scaled(double x)
{
    x = std::fabs(x);
    constexpr double switch_point = 15.0;
    if (x < switch_point) {
        const double q = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) {
                break;
            }
        }
        return sum * std::exp(-x);
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * odd * odd / (8.0 * k * x);
        if (next > term) {
            break; // asymptotic series starts diverging
        }
        term = next;
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

/// log I0(x), finite for all finite x.
inline double log_bessel_i0(double x)
{
    return std::fabs(x) + std::log(bessel_i0_scaled(x));
}

inline double bessel_i0(double x)
{
    return bessel_i0_scaled(x) * std::exp(std::fabs(x));
}

} // namespace pafour
