#pragma once

// Scalar-generic Bessel kernels shared by the real public API and the complex
// contour evaluator. T is double or std::complex<double>.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "quartic/errors.hpp"

namespace quartic::specfun::detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Taylor coefficients of 1/Gamma(z) about 0; index k multiplies z^k.
inline constexpr std::array<double, 29> kRecipGammaTaylor = {
    0.0,
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
};

// Gamma-function combinations for Temme's series, valid for |mu| <= 1/2:
//   gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),  gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2,
//   gampl = 1/G(1+mu),  gammi = 1/G(1-mu).
struct TemmeGammas {
    double gam1;
    double gam2;
    double gampl;
    double gammi;
};

inline TemmeGammas temme_gammas(double mu) {
    double even = 0.0;  // sum over even k of c_k mu^(k-2)
    double odd = 0.0;   // sum over odd k of c_k mu^(k-1)
    for (std::size_t k = kRecipGammaTaylor.size() - 1; k >= 1; --k) {
        if (k % 2 == 0) {
            even = even * mu * mu + kRecipGammaTaylor[k];
        } else {
            odd = odd * mu * mu + kRecipGammaTaylor[k];
        }
    }
    TemmeGammas g{};
    g.gam1 = -even;
    g.gam2 = odd;
    g.gampl = g.gam2 - mu * g.gam1;
    g.gammi = g.gam2 + mu * g.gam1;
    return g;
}

template <class T>
struct KPair {
    T k_nu;   // K_nu(z)
    T k_nu1;  // K_{nu+1}(z)
};

/// K_nu(z) and K_{nu+1}(z) for nu >= 0 and Re z > 0, optionally multiplied by e^z.
/// Temme's series for |z| < 2, Steed's continued fraction otherwise, then upward recurrence.
template <class T>
KPair<T> bessel_k_pair(double nu, T z, bool scaled) {
    using std::abs;
    using std::cosh;
    using std::exp;
    using std::log;
    using std::sinh;
    using std::sqrt;
    constexpr double pi = 3.14159265358979323846264338327950288;
    constexpr int max_iter = 100000;

    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const T xi = T(1.0) / z;
    const T xi2 = T(2.0) * xi;

    T rkmu;
    T rk1;
    if (abs(z) < 2.0) {
        const T x2 = 0.5 * z;
        const double pimu = pi * xmu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        T d = -log(x2);
        T e = xmu * d;
        const T fact2 = abs(e) < kEps ? T(1.0) : T(sinh(e) / e);
        const TemmeGammas g = temme_gammas(xmu);
        T ff = fact * (g.gam1 * cosh(e) + g.gam2 * fact2 * d);
        T sum = ff;
        e = exp(e);
        T p = 0.5 * e / g.gampl;
        T q = 0.5 / (e * g.gammi);
        T c = 1.0;
        d = x2 * x2;
        T sum1 = p;
        int i = 1;
        for (; i <= max_iter; ++i) {
            const double di = i;
            ff = (di * ff + p + q) / (di * di - xmu2);
            c *= d / di;
            p /= (di - xmu);
            q /= (di + xmu);
            const T del = c * ff;
            sum += del;
            const T del1 = c * (p - di * ff);
            sum1 += del1;
            if (abs(del) < abs(sum) * kEps) break;
        }
        if (i > max_iter) throw AccuracyError("bessel_k: Temme series did not converge", abs(z));
        rkmu = sum;
        rk1 = sum1 * xi2;
        if (scaled) {
            const T ez = exp(z);
            rkmu *= ez;
            rk1 *= ez;
        }
    } else {
        T b = 2.0 * (1.0 + z);
        T d = T(1.0) / b;
        T h = d;
        T delh = d;
        T q1 = 0.0;
        T q2 = 1.0;
        const double a1 = 0.25 - xmu2;
        T q = a1;
        double c = a1;
        double a = -a1;
        T s = 1.0 + q * delh;
        int i = 1;
        for (; i <= max_iter; ++i) {
            a -= 2 * i;
            c = -a * c / (i + 1.0);
            const T qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = T(1.0) / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const T dels = q * delh;
            s += dels;
            if (abs(dels / s) < kEps) break;
        }
        if (i > max_iter) throw AccuracyError("bessel_k: continued fraction did not converge", abs(z));
        h = a1 * h;
        rkmu = sqrt(pi / (2.0 * z)) / s;
        rk1 = rkmu * (xmu + z + 0.5 - h) * xi;
        if (!scaled) {
            const T emz = exp(-z);
            rkmu *= emz;
            rk1 *= emz;
        }
    }
    for (int i = 1; i <= nl; ++i) {
        const T next = (xmu + i) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = next;
    }
    return {rkmu, rk1};
}

/// Ascending series sum_k (sign z^2/4)^k / (k! Gamma(k+a+1)). sign = +1 gives I~_a, -1 gives J~_a.
/// The series is entire in z; cancellation limits its use for J~ to moderate |z|.
template <class T>
T normalized_ascending_series(double alpha, T z, double sign, double inv_gamma_alpha1) {
    using std::abs;
    const T w = sign * 0.25 * z * z;
    T term = inv_gamma_alpha1;
    T sum = term;
    const double peak = 0.5 * abs(z);
    for (int k = 0; k < 5000; ++k) {
        term *= w / ((k + 1.0) * (k + 1.0 + alpha));
        sum += term;
        if (k + 1 > peak && abs(term) <= 0.25 * kEps * abs(sum)) return sum;
        if (term == T(0.0)) return sum;
    }
    throw AccuracyError("ascending Bessel series did not converge", abs(z));
}

}  // namespace quartic::specfun::detail
