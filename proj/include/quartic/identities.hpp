#pragma once

// One verification driver per integral identity or closed-form constant. Each driver
// computes the two sides independently (quadrature or extraction against closed forms)
// and reports per-sample residuals.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quartic/eigenfunction.hpp"
#include "quartic/params.hpp"
#include "quartic/quad.hpp"

namespace quartic {

/// Angle pair with the transform arguments
///   a = sin(theta) / (cos(theta) + cos(phi)),  b = sin(phi) / (cos(theta) + cos(phi)).
class AngleSample {
public:
    /// Throws DomainError unless cos(theta) + cos(phi) > 0.
    static AngleSample make(double theta, double phi);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double cos_sum() const noexcept { return cos_sum_; }

private:
    AngleSample(double theta, double phi, double cos_sum, double a, double b)
        : theta_(theta), phi_(phi), cos_sum_(cos_sum), a_(a), b_(b) {}

    double theta_;
    double phi_;
    double cos_sum_;
    double a_;
    double b_;
};

/// n_theta x n_phi uniform grid on [lo, hi]^2 keeping cos(theta) + cos(phi) >= min_cos_sum.
std::vector<AngleSample> angle_grid(int n_theta, int n_phi, double lo, double hi, double min_cos_sum = 0.3);

enum class IdentityId {
    theorem_a,
    theorem_b,
    corollary_c,
    generating_integral,
    l1,
    l2_norm,
    gegenbauer_norm,
    poisson_partial,
    poisson_kernel,
    bottom_layer,
};

std::string to_string(IdentityId id);
/// Inverse of to_string; throws DomainError on an unknown name.
IdentityId identity_from_string(const std::string& name);
const std::vector<IdentityId>& all_identities();

using NamedValues = std::vector<std::pair<std::string, double>>;

struct Sample {
    /// Which side-pair of a multi-part identity this sample checks ("cos", "norm", "hyp2f1", ...).
    std::string label;
    NamedValues point;
    double lhs = 0.0;
    double rhs = 0.0;
    /// Infinite when error is set.
    double rel_residual = 0.0;
    std::optional<std::string> error;
};

struct VerificationReport {
    IdentityId identity = IdentityId::theorem_a;
    NamedValues params;
    std::optional<int> j;
    double tolerance = 0.0;
    std::vector<Sample> samples;
    double max_rel_residual = 0.0;
    bool passed = false;

    /// Recomputes max_rel_residual and passed (a sample with an error fails the report).
    void finalize();
};

struct VerifyOptions {
    QuadratureConfig quad = default_quadrature();
    ExtractionConfig extraction{};
    /// Overrides the identity's default tolerance when set.
    std::optional<double> tolerance;

    static QuadratureConfig default_quadrature() {
        QuadratureConfig q;
        q.rel_tol = 1e-12;
        q.abs_tol = 1e-300;
        return q;
    }
};

/// Default tolerance of an identity (Theorem A: 1e-8 for j <= 2, else 1e-7).
double default_tolerance(IdentityId id, const std::optional<int>& j = std::nullopt, int nu = 1);

VerificationReport verify_theorem_A(ParamPair p, SpectralIndex j, const std::vector<AngleSample>& grid,
                                    const VerifyOptions& opt = {});

/// Small-x leading coefficient of Lambda_j against x^-nu, log(x/2) or 1, fitted from
/// x_k = 0.1 * 2^-k, k = 0..8. Throws AccuracyError when window estimates do not contract.
double estimate_B_numeric(ParamPair p, SpectralIndex j, const ExtractionConfig& cfg = {});

VerificationReport verify_theorem_B(ParamPair p, SpectralIndex j, const VerifyOptions& opt = {});

/// Cosine and sine Laguerre integrals; mu odd >= 1.
VerificationReport verify_corollary_C(int mu, SpectralIndex j, const std::vector<AngleSample>& grid,
                                      const VerifyOptions& opt = {});

/// int G(t, x) x^{mu+nu+1} dx by quadrature and by the 2F1 route against the closed form, plus
/// [t^j] of the closed form (trapezoid rule on |t| = 1/2) against l1_value for j <= 6.
VerificationReport verify_generating_integral(ParamPair p, const std::vector<double>& ts, const VerifyOptions& opt = {});

VerificationReport verify_l1(ParamPair p, SpectralIndex j, const VerifyOptions& opt = {});

/// ||Lambda_j||^2 and the inner products with Lambda_k, k <= 3, k != j.
VerificationReport verify_l2_norm(ParamPair p, SpectralIndex j, const VerifyOptions& opt = {});

VerificationReport verify_gegenbauer_norm(int n, double lambda, const VerifyOptions& opt = {});

/// Residuals are divided by a rigorous tail bound plus the quadrature error; passes at <= 1.
VerificationReport verify_poisson_partial(ParamPair p, double t, const std::vector<AngleSample>& samples, int j_max,
                                          const VerifyOptions& opt = {});

/// lambda with 2 lambda a positive integer, |t| <= 0.5. Same residual convention as poisson_partial.
VerificationReport verify_poisson_kernel(double lambda, double t, const std::vector<AngleSample>& samples, int n_max,
                                         const VerifyOptions& opt = {});

/// nu > -1.
VerificationReport verify_bottom_layer(ParamPair p, const std::vector<AngleSample>& grid, const VerifyOptions& opt = {});

}  // namespace quartic
