#pragma once

// The admissible parameter domain (mu, nu) and the closed-form constants
// attached to (mu, nu, j).

#include <stdexcept>
#include <string>

namespace quartic {

/// Which clause of the integrality condition a pair violates.
enum class ParamClause {
    ordering,   // mu >= nu >= -1
    parity,     // mu and nu of the same parity
    not_both_minus_one,
};

class ValidationError : public std::invalid_argument {
public:
    ValidationError(ParamClause clause, const std::string& what)
        : std::invalid_argument(what), clause_(clause) {}

    ParamClause clause() const noexcept { return clause_; }

private:
    ParamClause clause_;
};

/// Integer pair with mu >= nu >= -1, mu = nu (mod 2), (mu, nu) != (-1, -1).
class ParamPair {
public:
    static ParamPair validate(int mu, int nu);

    int mu() const noexcept { return mu_; }
    int nu() const noexcept { return nu_; }

    /// (mu + nu + 2) / 2, the recurring weight exponent.
    double weight() const noexcept { return 0.5 * (mu_ + nu_ + 2); }

    friend bool operator==(const ParamPair&, const ParamPair&) = default;

private:
    ParamPair(int mu, int nu) : mu_(mu), nu_(nu) {}

    int mu_;
    int nu_;
};

/// Eigenvalue index j >= 0.
class SpectralIndex {
public:
    explicit SpectralIndex(int j);

    int value() const noexcept { return j_; }

    friend bool operator==(const SpectralIndex&, const SpectralIndex&) = default;

private:
    int j_;
};

namespace params {

/// 4 j (j + mu + 1).
double eigenvalue(ParamPair p, SpectralIndex j);

/// Leading small-x coefficient B_j of Lambda_j against x^-nu, log(x/2) or 1.
double constant_B(ParamPair p, SpectralIndex j);

/// Constant A_j in the Bessel-Gegenbauer integral formula for Lambda_j.
double constant_A(ParamPair p, SpectralIndex j);

/// A_j / B_j as a standalone closed form (valid for every L^2 solution).
double ratio_AB(ParamPair p, SpectralIndex j);

/// int_0^inf Lambda_j(x) x^{mu+nu+1} dx.
double l1_value(ParamPair p, SpectralIndex j);

/// ||Lambda_j||^2 in L^2(R_+, x^{mu+nu+1} dx).
double l2_norm_sq(ParamPair p, SpectralIndex j);

}  // namespace params
}  // namespace quartic
