#include "quartic/params.hpp"

#include <cmath>
#include <cstdlib>

#include "quartic/errors.hpp"
#include "quartic/specfun.hpp"

namespace quartic {

ParamPair ParamPair::validate(int mu, int nu) {
    if (mu == -1 && nu == -1) {
        throw ValidationError(ParamClause::not_both_minus_one, "not-both-minus-one: (mu, nu) = (-1, -1) is excluded");
    }
    if (!(mu >= nu && nu >= -1)) {
        throw ValidationError(ParamClause::ordering, "ordering: require mu >= nu >= -1, got mu=" +
                                                         std::to_string(mu) + " nu=" + std::to_string(nu));
    }
    if (std::abs(mu - nu) % 2 != 0) {
        throw ValidationError(ParamClause::parity, "parity: mu and nu must be integers of the same parity, got mu=" +
                                                       std::to_string(mu) + " nu=" + std::to_string(nu));
    }
    return ParamPair(mu, nu);
}

SpectralIndex::SpectralIndex(int j) : j_(j) {
    if (j < 0) throw DomainError("spectral index must be >= 0");
}

namespace params {
namespace {

// Products of Gamma factors are accumulated as sign * exp(log_abs).
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;

    SignedLog& operator*=(const SignedLog& o) {
        log_abs += o.log_abs;
        sign *= o.sign;
        return *this;
    }
    SignedLog& operator/=(const SignedLog& o) {
        log_abs -= o.log_abs;
        sign *= o.sign;
        return *this;
    }
    double value() const { return sign * std::exp(log_abs); }
};

SignedLog from_value(double v) { return {std::log(std::abs(v)), v < 0.0 ? -1 : 1}; }

SignedLog pow2(double k) { return {k * std::log(2.0), 1}; }

SignedLog alternating(int j) { return {0.0, j % 2 == 0 ? 1 : -1}; }

// Gamma(x) off the poles; negative arguments through the reflection formula
// Gamma(x) = pi / (sin(pi x) Gamma(1 - x)). Only Gamma(-1/2) = -2 sqrt(pi) is reached.
SignedLog gamma_signed(double x) {
    if (x > 0.0) return {specfun::log_gamma(x), 1};
    if (x == std::floor(x)) throw DomainError("Gamma pole at non-positive integer");
    const double s = std::sin(specfun::kPi * x);
    return {std::log(specfun::kPi) - std::log(std::abs(s)) - specfun::log_gamma(1.0 - x), s < 0.0 ? -1 : 1};
}

SignedLog factorial(int j) { return {specfun::log_gamma(j + 1.0), 1}; }

}  // namespace

double eigenvalue(ParamPair p, SpectralIndex j) {
    const double jj = j.value();
    return 4.0 * jj * (jj + p.mu() + 1.0);
}

double constant_B(ParamPair p, SpectralIndex idx) {
    const int mu = p.mu();
    const int nu = p.nu();
    const int j = idx.value();
    const double abs_nu = std::abs(nu);

    SignedLog b = gamma_signed(j + 0.5 * (mu - abs_nu + 2));
    b /= factorial(j);
    b /= gamma_signed(0.5 * (mu + 2));
    b /= gamma_signed(0.5 * (mu - abs_nu + 2));
    if (nu > 0) {
        b *= pow2(nu - 1);
        b *= gamma_signed(0.5 * nu);
    } else if (nu == 0) {
        b *= from_value(-1.0);
    } else {
        b *= from_value(0.5);
        b *= gamma_signed(-0.5 * nu);
    }
    return b.value();
}

double constant_A(ParamPair p, SpectralIndex idx) {
    const int mu = p.mu();
    const int nu = p.nu();
    const int j = idx.value();
    SignedLog a = alternating(j);
    a *= pow2(2 * (mu + nu));
    a *= gamma_signed(j + 0.5 * (mu - nu + 2));
    a /= from_value(specfun::kPi);
    a /= gamma_signed(j + mu + 1.0);
    return a.value();
}

double ratio_AB(ParamPair p, SpectralIndex idx) {
    const int mu = p.mu();
    const int nu = p.nu();
    const int j = idx.value();
    const double abs_nu = std::abs(nu);

    SignedLog r = alternating(j);
    r *= factorial(j);
    r *= pow2(2 * mu + nu);
    r *= gamma_signed(0.5 * (mu + 2));
    r *= gamma_signed(0.5 * (mu - abs_nu + 2));
    r *= gamma_signed(j + 0.5 * (mu - nu + 2));
    r /= gamma_signed(j + 0.5 * (mu - abs_nu + 2));
    r /= from_value(specfun::kPi);
    r /= gamma_signed(j + mu + 1.0);
    if (nu > 0) {
        r *= from_value(2.0);
        r /= gamma_signed(0.5 * nu);
    } else if (nu == 0) {
        r *= from_value(-1.0);
    } else {
        r *= from_value(-2.0);
        r /= gamma_signed(0.5 * nu);
    }
    return r.value();
}

double l1_value(ParamPair p, SpectralIndex idx) {
    const int j = idx.value();
    SignedLog v = alternating(j);
    v *= pow2(p.mu() + p.nu());
    v *= gamma_signed(j + p.weight());
    v /= factorial(j);
    return v.value();
}

double l2_norm_sq(ParamPair p, SpectralIndex idx) {
    const int mu = p.mu();
    const int nu = p.nu();
    const int j = idx.value();
    SignedLog v = pow2(mu + nu - 1);
    v *= gamma_signed(j + p.weight());
    v *= gamma_signed(j + 0.5 * (mu - nu + 2));
    v /= factorial(j);
    v /= from_value(2.0 * j + mu + 1.0);
    v /= gamma_signed(j + mu + 1.0);
    return v.value();
}

}  // namespace params
}  // namespace quartic
