#pragma once

// Adaptive Gauss-Kronrod (10/21) quadrature on (0, inf) for integrands with an
// algebraic or logarithmic endpoint at 0 and exponential decay at infinity.

#include <functional>
#include <string>

#include "quartic/errors.hpp"

namespace quartic {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 40;
    double truncation_cut = 1e-18;
    /// Multiplies the truncation point derived from the envelope (1 = as derived).
    double truncation_scale = 1.0;

    /// Throws DomainError unless eps < rel_tol, abs_tol > 0, 0 < max_depth <= 60, cut in (0, 1).
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;
    double truncation_point = 0.0;
    long evaluations = 0;
};

/// Subdivision limit reached before the tolerance; partial() holds the best result so far.
class QuadratureError : public AccuracyError {
public:
    QuadratureError(const std::string& what, const QuadResult& partial)
        : AccuracyError(what, partial.err_estimate), partial_(partial) {}

    const QuadResult& partial() const noexcept { return partial_; }

private:
    QuadResult partial_;
};

/// Envelope |f(x)| <~ C x^tail_power e^{-rate x} for large x.
/// origin_exponent is the algebraic order at 0 (informational; the first panel is always
/// integrated in s = sqrt(x)).
struct Decay {
    double origin_exponent = 0.0;
    double rate = 1.0;
    double tail_power = 0.0;
};

/// int_0^inf f(x) dx. Throws QuadratureError when subdivision exhausts max_depth and
/// DomainError (naming the abscissa) on a non-finite sample.
QuadResult integrate_halfline(const std::function<double(double)>& f, const Decay& decay,
                              const QuadratureConfig& cfg = {});

namespace detail {

/// int_a^b f(x) dx with the same adaptive rule; finite intervals only.
QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b,
                              const QuadratureConfig& cfg = {});

}  // namespace detail
}  // namespace quartic
