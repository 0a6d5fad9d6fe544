#pragma once

// Derivatives 1..4 of a scalar function by central differences, extrapolated to zero step
// with Ridders' adaptive Richardson tableau.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace quartic::testing {

inline double central_difference(const std::function<double(double)>& f, double x, double h, int order) {
    switch (order) {
        case 1:
            return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2:
            return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3:
            return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
        default:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) / (h * h * h * h);
    }
}

/// Ridders' extrapolation of central_difference(h) as h -> 0, starting from step h.
inline double ridders_derivative(const std::function<double(double)>& f, double x, double h, int order) {
    constexpr int ntab = 10;
    constexpr double con = 1.4;
    constexpr double con2 = con * con;
    constexpr double safe = 2.0;
    double a[ntab][ntab];
    a[0][0] = central_difference(f, x, h, order);
    double err = std::numeric_limits<double>::max();
    double ans = a[0][0];
    for (int i = 1; i < ntab; ++i) {
        h /= con;
        a[0][i] = central_difference(f, x, h, order);
        double fac = con2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= con2;
            const double errt = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (errt <= err) {
                err = errt;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= safe * err) break;
    }
    return ans;
}

/// {f, f', f'', f''', f''''} at x > 0; the stencil stays inside (0, inf).
inline std::array<double, 5> finite_difference_jet(const std::function<double(double)>& f, double x) {
    const double h = 0.1 * std::min(x, 2.0);
    std::array<double, 5> out{f(x)};
    for (int d = 1; d <= 4; ++d) out[d] = ridders_derivative(f, x, h, d);
    return out;
}

}  // namespace quartic::testing
