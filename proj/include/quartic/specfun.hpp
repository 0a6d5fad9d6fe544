#pragma once

// Real-argument special functions: Gamma, the normalized Bessel functions
//   J~_a(x) = (x/2)^-a J_a(x),  I~_a(x) = (x/2)^-a I_a(x),  K~_a(x) = (x/2)^-a K_a(x),
// the normalized Gegenbauer polynomial C~_n^l = Gamma(l) C_n^l, generalized
// Laguerre polynomials and the Gauss hypergeometric series.
//
// Orders are restricted to a >= -1/2. Everything is pure and reentrant.

namespace quartic::specfun {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// Gamma(x) for x > 0. Throws DomainError at x <= 0.
double gamma_fn(double x);

/// log Gamma(x) for x > 0, reentrant (no global signgam).
double log_gamma(double x);

double bessel_j_norm(double alpha, double x);

/// I~_a(x). Throws RangeError when the value overflows; use the scaled form beyond x ~ 700.
double bessel_i_norm(double alpha, double x);

/// e^{-x} I~_a(x), finite for all x >= 0.
double bessel_i_norm_scaled(double alpha, double x);

/// K~_a(x) for x > 0. Throws DomainError at x == 0.
double bessel_k_norm(double alpha, double x);

/// e^{x} K~_a(x) for x > 0.
double bessel_k_norm_scaled(double alpha, double x);

/// Unnormalized J_a(x), I_a(x), K_a(x); thin wrappers used by the bottom-layer identity.
double bessel_j(double alpha, double x);
double bessel_k(double alpha, double x);

/// Gamma(lambda) C_n^lambda(x) by three-term recurrence.
/// lambda == 0 (n >= 1) returns the limit (2/n) T_n(x); lambda == 0, n == 0 throws DomainError.
double gegenbauer_norm(int n, double lambda, double x);

/// Generalized Laguerre polynomial L_j^mu(x).
double laguerre(int j, double mu, double x);

/// 2F1(a, b; c; z) by its Gauss series, |z| < 1.
double hyp2f1(double a, double b, double c, double z);

}  // namespace quartic::specfun
