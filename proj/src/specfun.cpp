#include "quartic/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quartic/detail/bessel_kernels.hpp"
#include "quartic/errors.hpp"

namespace quartic::specfun {
namespace {

using detail::kEps;
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;
constexpr int kMaxIter = 200000;

// Below this |x| the ascending series for J~ loses at most ~1.5 digits.
constexpr double kJSeriesLimit = 4.0;
// I~ ascending series has positive terms; its only cost is the term count.
constexpr double kISeriesLimit = 25.0;

void require_order(double alpha, const char* who) {
    if (!(alpha >= -0.5) || !std::isfinite(alpha)) {
        throw DomainError(std::string(who) + ": order must be >= -1/2");
    }
}

struct JPair {
    double j_nu;
    double j_nu1;
};

// Steed's method: continued fraction CF1 for J'/J, complex CF2 for p + iq,
// normalized through the Wronskian. nu >= 0, x >= 2.
JPair bessel_j_steed(double nu, double x) {
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl;
    const double xmu2 = xmu * xmu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / kPi;

    int isign = 1;
    double h = std::max(nu * xi, kFpMin);
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 0;
    for (; i < kMaxIter; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b - 1.0 / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) <= kEps) break;
    }
    if (i == kMaxIter) throw AccuracyError("bessel_j: CF1 did not converge", x);

    double rjl = isign * kFpMin;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    const double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    fact = a * xi / (p * p + q * q);
    double cr = br + q * fact;
    double ci = bi + p * fact;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    for (i = 1; i < kMaxIter; ++i) {
        a += 2 * i;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < kFpMin) dr = kFpMin;
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if (std::abs(cr) + std::abs(ci) < kFpMin) cr = kFpMin;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
    }
    if (i == kMaxIter) throw AccuracyError("bessel_j: CF2 did not converge", x);

    const double gam = (p - f) / q;
    const double rjmu = std::copysign(std::sqrt(w / ((p - f) * gam + q)), rjl);
    const double scale = rjmu / rjl;
    const double j_nu = rjl1 * scale;
    const double jp_nu = rjp1 * scale;
    return {j_nu, nu * xi * j_nu - jp_nu};
}

// Unnormalized J_a(x) on the Steed branch, any a >= -1/2.
double bessel_j_large(double alpha, double x) {
    if (alpha >= 0.0) return bessel_j_steed(alpha, x).j_nu;
    // J_a = (2(a+1)/x) J_{a+1} - J_{a+2}
    const JPair up = bessel_j_steed(alpha + 1.0, x);
    return 2.0 * (alpha + 1.0) / x * up.j_nu - up.j_nu1;
}

// e^{-x} I_nu(x) for nu >= 0, x >= 2, via CF1 for I'/I and the scaled K pair (Wronskian).
double bessel_i_scaled_steed(double nu, double x) {
    const int nl = static_cast<int>(nu + 0.5);
    const double xmu = nu - nl;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;

    double h = std::max(nu * xi, kFpMin);
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int i = 0;
    for (; i < kMaxIter; ++i) {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    if (i == kMaxIter) throw AccuracyError("bessel_i: CF1 did not converge", x);

    double ril = kFpMin;
    double ripl = h * ril;
    const double ril1 = ril;
    double fact = nu * xi;
    for (int l = nl - 1; l >= 0; --l) {
        const double ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    const double f = ripl / ril;
    const auto k = detail::bessel_k_pair(xmu, x, /*scaled=*/true);
    const double rkmup = xmu * xi * k.k_nu - k.k_nu1;
    const double rimu = xi / (f * k.k_nu - rkmup);
    return rimu * ril1 / ril;
}

double bessel_i_scaled_large(double alpha, double x) {
    if (alpha >= 0.0) return bessel_i_scaled_steed(alpha, x);
    // I_a = I_{a+2} + (2(a+1)/x) I_{a+1}
    const double i1 = bessel_i_scaled_steed(alpha + 1.0, x);
    const double i2 = bessel_i_scaled_steed(alpha + 2.0, x);
    return i2 + 2.0 * (alpha + 1.0) / x * i1;
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double bessel_j_norm(double alpha, double x) {
    require_order(alpha, "bessel_j_norm");
    if (!(x >= 0.0)) throw DomainError("bessel_j_norm: x must be >= 0");
    if (alpha == -0.5) return std::cos(x) / kSqrtPi;
    if (x <= kJSeriesLimit || x * x <= 4.0 * (alpha + 1.0)) {
        return detail::normalized_ascending_series(alpha, x, -1.0, std::exp(-log_gamma(alpha + 1.0)));
    }
    return bessel_j_large(alpha, x) * std::pow(0.5 * x, -alpha);
}

double bessel_j(double alpha, double x) {
    require_order(alpha, "bessel_j");
    if (!(x >= 0.0)) throw DomainError("bessel_j: x must be >= 0");
    if (x > kJSeriesLimit && x * x > 4.0 * (alpha + 1.0)) return bessel_j_large(alpha, x);
    if (x == 0.0) {
        if (alpha == 0.0) return 1.0;
        if (alpha > 0.0) return 0.0;
        throw RangeError("bessel_j: J_a(0) is infinite for a < 0");
    }
    return bessel_j_norm(alpha, x) * std::pow(0.5 * x, alpha);
}

double bessel_i_norm_scaled(double alpha, double x) {
    require_order(alpha, "bessel_i_norm_scaled");
    if (!(x >= 0.0)) throw DomainError("bessel_i_norm_scaled: x must be >= 0");
    if (alpha == -0.5) return 0.5 * (1.0 + std::exp(-2.0 * x)) / kSqrtPi;
    if (x <= kISeriesLimit) {
        return std::exp(-x) *
               detail::normalized_ascending_series(alpha, x, 1.0, std::exp(-log_gamma(alpha + 1.0)));
    }
    return bessel_i_scaled_large(alpha, x) * std::pow(0.5 * x, -alpha);
}

double bessel_i_norm(double alpha, double x) {
    require_order(alpha, "bessel_i_norm");
    if (!(x >= 0.0)) throw DomainError("bessel_i_norm: x must be >= 0");
    if (alpha == -0.5) return std::cosh(x) / kSqrtPi;
    double value = 0.0;
    if (x <= kISeriesLimit) {
        value = detail::normalized_ascending_series(alpha, x, 1.0, std::exp(-log_gamma(alpha + 1.0)));
    } else {
        // Split e^x so that moderate overflow of the scaled value times e^x is still caught.
        value = bessel_i_scaled_large(alpha, x) * std::pow(0.5 * x, -alpha) * std::exp(x);
    }
    if (!std::isfinite(value)) throw RangeError("bessel_i_norm: overflow, use bessel_i_norm_scaled");
    return value;
}

double bessel_k_norm_scaled(double alpha, double x) {
    require_order(alpha, "bessel_k_norm_scaled");
    if (!(x > 0.0)) throw DomainError("bessel_k_norm_scaled: x must be > 0");
    const auto k = detail::bessel_k_pair(std::abs(alpha), x, /*scaled=*/true);
    return k.k_nu * std::pow(0.5 * x, -alpha);
}

double bessel_k_norm(double alpha, double x) {
    require_order(alpha, "bessel_k_norm");
    if (!(x > 0.0)) throw DomainError("bessel_k_norm: x must be > 0");
    const auto k = detail::bessel_k_pair(std::abs(alpha), x, /*scaled=*/false);
    const double value = k.k_nu * std::pow(0.5 * x, -alpha);
    if (!std::isfinite(value)) throw RangeError("bessel_k_norm: overflow");
    return value;
}

double bessel_k(double alpha, double x) {
    require_order(alpha, "bessel_k");
    if (!(x > 0.0)) throw DomainError("bessel_k: x must be > 0");
    return detail::bessel_k_pair(std::abs(alpha), x, /*scaled=*/false).k_nu;
}

double gegenbauer_norm(int n, double lambda, double x) {
    if (n < 0) throw DomainError("gegenbauer_norm: degree must be >= 0");
    if (!(lambda >= 0.0)) throw DomainError("gegenbauer_norm: lambda must be >= 0");
    if (lambda == 0.0) {
        if (n == 0) throw DomainError("gegenbauer_norm: lambda = 0 requires n >= 1 (limit diverges at n = 0)");
        // lim_{l->0} Gamma(l) C_n^l(x) = (2/n) T_n(x)
        double t0 = 1.0;
        double t1 = x;
        for (int k = 1; k < n; ++k) {
            const double t2 = 2.0 * x * t1 - t0;
            t0 = t1;
            t1 = t2;
        }
        return 2.0 / n * t1;
    }
    double c0 = 1.0;
    if (n == 0) return gamma_fn(lambda);
    double c1 = 2.0 * lambda * x;
    for (int k = 2; k <= n; ++k) {
        const double c2 = (2.0 * (k + lambda - 1.0) * x * c1 - (k + 2.0 * lambda - 2.0) * c0) / k;
        c0 = c1;
        c1 = c2;
    }
    return gamma_fn(lambda) * c1;
}

double laguerre(int j, double mu, double x) {
    if (j < 0) throw DomainError("laguerre: degree must be >= 0");
    double l0 = 1.0;
    if (j == 0) return l0;
    double l1 = 1.0 + mu - x;
    for (int n = 1; n < j; ++n) {
        const double l2 = ((2.0 * n + 1.0 + mu - x) * l1 - (n + mu) * l0) / (n + 1.0);
        l0 = l1;
        l1 = l2;
    }
    return l1;
}

double hyp2f1(double a, double b, double c, double z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("hyp2f1: series requires |z| < 1");
    if (c <= 0.0 && c == std::floor(c)) throw DomainError("hyp2f1: c is a non-positive integer");
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < kMaxIter; ++n) {
        const double ratio = (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        term *= ratio;
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(ratio) < 1.0 && std::abs(term) <= 0.25 * kEps * std::abs(sum)) return sum;
    }
    throw AccuracyError("hyp2f1: series did not converge", z);
}

}  // namespace quartic::specfun
