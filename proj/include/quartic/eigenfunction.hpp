#pragma once

// The generating function
//   G(t, x) = (1-t)^{-(mu+nu+2)/2} I~_{mu/2}(t x / (1-t)) K~_{nu/2}(x / (1-t)),
// its Taylor coefficients Lambda_j(x) = [t^j] G(t, x), their x-derivatives, and the
// fourth-order operator
//   D = x^-2 ((th+mu)(th+mu+nu) - x^2) (th(th+nu) - x^2),   th = x d/dx.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "quartic/params.hpp"

namespace quartic {

enum class ExtractionMethod {
    automatic,  // taylor, falling back to contour when its rounding bound is loose
    taylor,     // exact power-series recursion in t
    contour,    // trapezoid rule for the Cauchy integral on |t| = r
};

struct ExtractionConfig {
    double contour_radius = 0.5;
    int num_nodes = 256;
    double target_rel_err = 1e-9;
    ExtractionMethod method = ExtractionMethod::automatic;

    /// Throws DomainError unless 0 < r < 1, num_nodes is a power of two >= 64 and target > 0.
    void validate() const;
};

struct EigenfunctionSpec {
    ParamPair params;
    SpectralIndex j;
    ExtractionConfig extraction{};
};

/// u, u', u'', u''', u'''' at x.
struct FunctionJet {
    double x = 0.0;
    std::array<double, 5> values{};
};

double gen_g(ParamPair p, double t, double x);
std::complex<double> gen_g(ParamPair p, std::complex<double> t, double x);

double lambda_j(const EigenfunctionSpec& spec, double x);

/// Lambda_0(x), ..., Lambda_{j_max}(x) from one extraction.
std::vector<double> lambda_range(ParamPair p, int j_max, double x, const ExtractionConfig& cfg = {});

FunctionJet lambda_jet(const EigenfunctionSpec& spec, double x);

/// D_{mu,nu} u at jet.x from the expanded five-coefficient form.
double apply_D(ParamPair p, const FunctionJet& jet);

/// D_{mu,nu} x^k from the factored form, using th x^k = k x^k.
double apply_D_monomial(ParamPair p, int k, double x);

/// Jet of x^k at x.
FunctionJet monomial_jet(int k, double x);

/// max over xs of |D Lambda_j - lambda_j Lambda_j| / (|lambda_j Lambda_j| + max_xs |Lambda_j|).
double eigen_residual(const EigenfunctionSpec& spec, std::span<const double> xs);

}  // namespace quartic
