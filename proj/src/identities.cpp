#include "quartic/identities.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>

#include "quartic/errors.hpp"
#include "quartic/specfun.hpp"

namespace quartic {
namespace {

namespace sf = specfun;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();

double log2_pow(double k) { return k * std::log(2.0); }

NamedValues angle_point(const AngleSample& s) { return {{"theta", s.theta()}, {"phi", s.phi()}}; }

// Runs compute() and turns numerical failures into a sample error instead of aborting the report.
template <class F>
Sample guarded(std::string label, NamedValues point, F&& compute) {
    Sample s;
    s.label = std::move(label);
    s.point = std::move(point);
    try {
        compute(s);
    } catch (const AccuracyError& e) {
        s.error = e.what();
    } catch (const DomainError& e) {
        s.error = e.what();
    } catch (const RangeError& e) {
        s.error = e.what();
    }
    if (s.error) s.rel_residual = kInf;
    return s;
}

double relative(double lhs, double rhs) {
    const double scale = std::abs(rhs);
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : std::abs(lhs - rhs);
}

// Residual relative to max(|rhs| at the point, max |rhs| over the report's samples with this label).
void normalize_by_grid(std::vector<Sample>& samples, const std::string& label) {
    double grid_max = 0.0;
    for (const auto& s : samples)
        if (s.label == label && !s.error) grid_max = std::max(grid_max, std::abs(s.rhs));
    if (grid_max == 0.0)
        for (const auto& s : samples)
            if (s.label == label && !s.error) grid_max = std::max(grid_max, std::abs(s.lhs));
    for (auto& s : samples) {
        if (s.label != label || s.error) continue;
        const double scale = std::max(std::abs(s.rhs), grid_max);
        s.rel_residual = scale > 0.0 ? std::abs(s.lhs - s.rhs) / scale : std::abs(s.lhs - s.rhs);
    }
}

VerificationReport make_report(IdentityId id, NamedValues params, std::optional<int> j, double tol) {
    VerificationReport r;
    r.identity = id;
    r.params = std::move(params);
    r.j = j;
    r.tolerance = tol;
    return r;
}

NamedValues pair_params(ParamPair p) { return {{"mu", p.mu()}, {"nu", p.nu()}}; }

double tolerance_for(const VerifyOptions& opt, IdentityId id, std::optional<int> j, int nu) {
    if (opt.tolerance) {
        if (!(*opt.tolerance > 0.0)) throw DomainError("tolerance must be > 0");
        return *opt.tolerance;
    }
    return default_tolerance(id, j, nu);
}

// Integral of Lambda_j * weight(x) * x^{mu+nu+1}.
QuadResult lambda_integral(ParamPair p, SpectralIndex j, const VerifyOptions& opt,
                           const std::function<double(double)>& weight) {
    const EigenfunctionSpec spec{p, j, opt.extraction};
    const double power = p.mu() + p.nu() + 1.0;
    auto f = [&](double x) { return lambda_j(spec, x) * weight(x) * std::pow(x, power); };
    return integrate_halfline(f, {power - std::max(0, p.nu()), 1.0, j.value() + power}, opt.quad);
}

// Theorem A right-hand side without the constant: ((cos t + cos f)/2)^p C~_j^{(mu+1)/2}(cos t) C~_{j+(mu-nu)/2}^{(nu+1)/2}(cos f).
double theorem_a_shape(ParamPair p, int j, const AngleSample& s) {
    return std::pow(0.5 * s.cos_sum(), p.weight()) * sf::gegenbauer_norm(j, 0.5 * (p.mu() + 1), std::cos(s.theta())) *
           sf::gegenbauer_norm(j + (p.mu() - p.nu()) / 2, 0.5 * (p.nu() + 1), std::cos(s.phi()));
}

// I~_alpha(s x/(1-s)) K~_beta(x/(1-s)) with the exponentials combined to avoid overflow.
double ik_product(double alpha, double beta, double s, double x) {
    const double w = std::abs(s) * x / (1.0 - s);
    const double z = x / (1.0 - s);
    return sf::bessel_i_norm_scaled(alpha, w) * sf::bessel_k_norm_scaled(beta, z) * std::exp(w - z);
}

// Coefficient of C~C~ t^j in the bilinear expansion of the generating integral.
double bilinear_coefficient(ParamPair p, int j) {
    const int mu = p.mu();
    const int nu = p.nu();
    const double log_abs = log2_pow(2.0 * (mu + nu)) - std::log(sf::kPi) + sf::log_gamma(j + 0.5 * (mu - nu + 2)) -
                           sf::log_gamma(j + mu + 1.0);
    return (j % 2 == 0 ? 1.0 : -1.0) * std::exp(log_abs);
}

// Sum of |a_n| for n > n_max with a_n = term(n) >= 0 eventually decreasing geometrically.
double tail_sum(const std::function<double(int)>& term, int n_max) {
    double sum = 0.0;
    double prev = kInf;
    for (int n = n_max + 1; n < n_max + 20000; ++n) {
        const double a = term(n);
        sum += a;
        if (a < prev && a <= 1e-18 * sum) return sum;
        prev = a;
    }
    throw AccuracyError("tail bound: series did not converge", sum);
}

// Least-squares coefficient of basis column 0 over sample rows [first, last).
double fit_leading(const Eigen::MatrixXd& basis, const Eigen::VectorXd& y, int first, int last) {
    const int rows = last - first;
    Eigen::MatrixXd a = basis.middleRows(first, rows);
    Eigen::VectorXd b = y.segment(first, rows);
    // Column equilibration keeps the x^4 columns from being swamped.
    Eigen::VectorXd scale(a.cols());
    for (int c = 0; c < a.cols(); ++c) {
        scale(c) = a.col(c).cwiseAbs().maxCoeff();
        if (scale(c) > 0.0) a.col(c) /= scale(c);
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
    return coef(0) / scale(0);
}

}  // namespace

AngleSample AngleSample::make(double theta, double phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("AngleSample: angles must be finite");
    const double c = std::cos(theta) + std::cos(phi);
    if (!(c > 0.0)) throw DomainError("AngleSample: require cos(theta) + cos(phi) > 0");
    return AngleSample(theta, phi, c, std::sin(theta) / c, std::sin(phi) / c);
}

std::vector<AngleSample> angle_grid(int n_theta, int n_phi, double lo, double hi, double min_cos_sum) {
    if (n_theta < 1 || n_phi < 1) throw DomainError("angle_grid: counts must be >= 1");
    if (!(hi >= lo)) throw DomainError("angle_grid: require hi >= lo");
    auto node = [&](int i, int n) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
    std::vector<AngleSample> grid;
    for (int i = 0; i < n_theta; ++i) {
        for (int k = 0; k < n_phi; ++k) {
            const double th = node(i, n_theta);
            const double ph = node(k, n_phi);
            if (std::cos(th) + std::cos(ph) >= min_cos_sum) grid.push_back(AngleSample::make(th, ph));
        }
    }
    if (grid.empty()) throw DomainError("angle_grid: no sample satisfies the cos(theta) + cos(phi) bound");
    return grid;
}

namespace {

const std::vector<std::pair<IdentityId, std::string>>& identity_names() {
    static const std::vector<std::pair<IdentityId, std::string>> names = {
        {IdentityId::theorem_a, "theorem-a"},
        {IdentityId::theorem_b, "theorem-b"},
        {IdentityId::corollary_c, "corollary-c"},
        {IdentityId::generating_integral, "generating-integral"},
        {IdentityId::l1, "l1"},
        {IdentityId::l2_norm, "l2-norm"},
        {IdentityId::gegenbauer_norm, "gegenbauer-norm"},
        {IdentityId::poisson_partial, "poisson-partial"},
        {IdentityId::poisson_kernel, "poisson-kernel"},
        {IdentityId::bottom_layer, "bottom-layer"},
    };
    return names;
}

}  // namespace

std::string to_string(IdentityId id) {
    for (const auto& [k, v] : identity_names())
        if (k == id) return v;
    return "unknown";
}

IdentityId identity_from_string(const std::string& name) {
    for (const auto& [k, v] : identity_names())
        if (v == name) return k;
    throw DomainError("unknown identity '" + name + "'");
}

const std::vector<IdentityId>& all_identities() {
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const auto& entry : identity_names()) v.push_back(entry.first);
        return v;
    }();
    return ids;
}

void VerificationReport::finalize() {
    max_rel_residual = 0.0;
    bool any_error = false;
    for (const auto& s : samples) {
        max_rel_residual = std::max(max_rel_residual, s.rel_residual);
        any_error = any_error || s.error.has_value() || std::isnan(s.rel_residual);
    }
    passed = !samples.empty() && !any_error && max_rel_residual <= tolerance;
}

double default_tolerance(IdentityId id, const std::optional<int>& j, int nu) {
    switch (id) {
        case IdentityId::theorem_a: return j && *j > 2 ? 1e-7 : 1e-8;
        case IdentityId::theorem_b: return nu == 0 ? 1e-3 : 1e-4;
        case IdentityId::corollary_c: return 1e-8;
        case IdentityId::generating_integral: return 1e-9;
        case IdentityId::l1: return 1e-9;
        case IdentityId::l2_norm: return 1e-8;
        case IdentityId::gegenbauer_norm: return 1e-10;
        case IdentityId::poisson_partial: return 1.0;
        case IdentityId::poisson_kernel: return 1.0;
        case IdentityId::bottom_layer: return 1e-8;
    }
    return 0.0;
}

VerificationReport verify_theorem_A(ParamPair p, SpectralIndex j, const std::vector<AngleSample>& grid,
                                    const VerifyOptions& opt) {
    if (grid.empty()) throw DomainError("verify_theorem_A: empty grid");
    auto report = make_report(IdentityId::theorem_a, pair_params(p), j.value(),
                              tolerance_for(opt, IdentityId::theorem_a, j.value(), p.nu()));
    const double alpha = 0.5 * p.mu();
    const double beta = 0.5 * p.nu();
    const double a_const = params::constant_A(p, j);
    for (const auto& s : grid) {
        report.samples.push_back(guarded("", angle_point(s), [&](Sample& out) {
            out.rhs = a_const * theorem_a_shape(p, j.value(), s);
            out.lhs = lambda_integral(p, j, opt, [&](double x) {
                          return sf::bessel_j_norm(alpha, s.a() * x) * sf::bessel_j_norm(beta, s.b() * x);
                      }).value;
        }));
    }
    normalize_by_grid(report.samples, "");
    report.finalize();
    return report;
}

double estimate_B_numeric(ParamPair p, SpectralIndex j, const ExtractionConfig& cfg) {
    constexpr int kPoints = 9;
    const int nu = p.nu();
    const EigenfunctionSpec spec{p, j, cfg};

    // Columns: the leading term first, then the analytic and logarithmic corrections of the branch.
    std::vector<std::function<double(double)>> columns;
    std::function<double(double)> target;
    if (nu == 0) {
        columns = {[](double x) { return std::log(0.5 * x); }, [](double) { return 1.0; },
                   [](double x) { return x * x * std::log(x); }, [](double x) { return x * x; },
                   [](double x) { return std::pow(x, 4) * std::log(x); }, [](double x) { return std::pow(x, 4); }};
        target = [&](double x) { return lambda_j(spec, x); };
    } else if (nu % 2 == 0) {
        columns = {[](double) { return 1.0; }};
        for (int k = 2; k <= nu + 2; k += 2) columns.push_back([k](double x) { return std::pow(x, k); });
        for (int k = nu; k <= nu + 2; k += 2) columns.push_back([k](double x) { return std::pow(x, k) * std::log(x); });
        target = [&](double x) { return std::pow(x, nu) * lambda_j(spec, x); };
    } else {
        columns = {[](double) { return 1.0; }};
        for (int k = 1; k <= 4; ++k) columns.push_back([k](double x) { return std::pow(x, k); });
        target = [&](double x) { return std::pow(x, std::max(nu, 0)) * lambda_j(spec, x); };
    }

    Eigen::MatrixXd basis(kPoints, static_cast<int>(columns.size()));
    Eigen::VectorXd y(kPoints);
    for (int k = 0; k < kPoints; ++k) {
        const double x = 0.1 * std::ldexp(1.0, -k);
        for (std::size_t c = 0; c < columns.size(); ++c) basis(k, static_cast<int>(c)) = columns[c](x);
        y(k) = target(x);
    }

    const double e0 = fit_leading(basis, y, 0, kPoints - 2);
    const double e1 = fit_leading(basis, y, 1, kPoints - 1);
    const double e2 = fit_leading(basis, y, 2, kPoints);
    const double full = fit_leading(basis, y, 0, kPoints);
    const double noise = 1e-9 * std::abs(full);
    const double d1 = std::abs(e1 - e0);
    const double d2 = std::abs(e2 - e1);
    if (!std::isfinite(full) || (d2 > d1 && d2 > noise)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "estimate_B_numeric: window estimates do not contract (" << e0 << ", " << e1 << ", " << e2 << ")";
        throw AccuracyError(msg.str(), d2);
    }
    return full;
}

VerificationReport verify_theorem_B(ParamPair p, SpectralIndex j, const VerifyOptions& opt) {
    auto report = make_report(IdentityId::theorem_b, pair_params(p), j.value(),
                              tolerance_for(opt, IdentityId::theorem_b, j.value(), p.nu()));
    double b_num = NAN;
    report.samples.push_back(guarded("B", {}, [&](Sample& out) {
        out.rhs = params::constant_B(p, j);
        b_num = estimate_B_numeric(p, j, opt.extraction);
        out.lhs = b_num;
        out.rel_residual = relative(out.lhs, out.rhs);
    }));
    report.samples.push_back(guarded("A/B", {}, [&](Sample& out) {
        out.rhs = params::ratio_AB(p, j);
        if (std::isnan(b_num)) throw AccuracyError("A/B: small-x constant unavailable", kInf);
        const auto origin = AngleSample::make(0.0, 0.0);
        const double lhs_integral = lambda_integral(p, j, opt, [&](double) {
                                        return sf::bessel_j_norm(0.5 * p.mu(), 0.0) * sf::bessel_j_norm(0.5 * p.nu(), 0.0);
                                    }).value;
        const double a_num = lhs_integral / theorem_a_shape(p, j.value(), origin);
        out.lhs = a_num / b_num;
        out.rel_residual = relative(out.lhs, out.rhs);
    }));
    report.finalize();
    return report;
}

VerificationReport verify_corollary_C(int mu, SpectralIndex j, const std::vector<AngleSample>& grid,
                                      const VerifyOptions& opt) {
    if (mu < 1 || mu % 2 == 0) throw DomainError("verify_corollary_C: mu must be an odd integer >= 1");
    if (grid.empty()) throw DomainError("verify_corollary_C: empty grid");
    const int jj = j.value();
    auto report = make_report(IdentityId::corollary_c, {{"mu", mu}}, jj, tolerance_for(opt, IdentityId::corollary_c, jj, -1));
    const double m = mu;
    const double lam = 0.5 * (m + 1.0);
    const double prefactor = (jj % 2 == 0 ? 1.0 : -1.0) * std::exp(log2_pow(m)) / sf::kSqrtPi;
    for (const char* kind : {"cos", "sin"}) {
        const bool is_cos = kind[0] == 'c';
        for (const auto& s : grid) {
            report.samples.push_back(guarded(kind, angle_point(s), [&](Sample& out) {
                const double angle = (jj + lam) * s.phi();
                out.rhs = prefactor * std::pow(0.5 * s.cos_sum(), lam) * (is_cos ? std::cos(angle) : std::sin(angle)) *
                          sf::gegenbauer_norm(jj, lam, std::cos(s.theta()));
                auto f = [&](double x) {
                    const double trig = is_cos ? std::cos(s.b() * x) : std::sin(s.b() * x);
                    return sf::laguerre(jj, m, 2.0 * x) * sf::bessel_j_norm(0.5 * m, s.a() * x) * trig * std::pow(x, m) *
                           std::exp(-x);
                };
                out.lhs = integrate_halfline(f, {m, 1.0, m + jj}, opt.quad).value;
            }));
        }
        normalize_by_grid(report.samples, kind);
    }
    report.finalize();
    return report;
}

VerificationReport verify_generating_integral(ParamPair p, const std::vector<double>& ts, const VerifyOptions& opt) {
    if (ts.empty()) throw DomainError("verify_generating_integral: no t values");
    auto report = make_report(IdentityId::generating_integral, pair_params(p), std::nullopt,
                              tolerance_for(opt, IdentityId::generating_integral, std::nullopt, p.nu()));
    const double pw = p.weight();
    const double power = p.mu() + p.nu() + 1.0;
    const double scale = std::exp(log2_pow(p.mu() + p.nu()) + sf::log_gamma(pw));
    auto closed = [&](double t) { return scale * std::pow(1.0 + t, -pw); };

    for (double t : ts) {
        if (!(std::abs(t) < 1.0)) throw DomainError("verify_generating_integral: require |t| < 1");
        report.samples.push_back(guarded("quadrature", {{"t", t}}, [&](Sample& out) {
            out.rhs = closed(t);
            const double rate = (1.0 - std::abs(t)) / (1.0 - t);
            auto f = [&](double x) {
                return std::pow(1.0 - t, -pw) * ik_product(0.5 * p.mu(), 0.5 * p.nu(), t, x) * std::pow(x, power);
            };
            out.lhs = integrate_halfline(f, {power - std::max(0, p.nu()), rate, power}, opt.quad).value;
            out.rel_residual = relative(out.lhs, out.rhs);
        }));
        report.samples.push_back(guarded("hyp2f1", {{"t", t}}, [&](Sample& out) {
            out.rhs = closed(t);
            const double c = 0.5 * (p.mu() + 2);
            out.lhs = scale * std::pow(1.0 - t, pw) * sf::hyp2f1(pw, c, c, t * t);
            out.rel_residual = relative(out.lhs, out.rhs);
        }));
    }

    // Taylor coefficients of the closed form by the trapezoid rule on |t| = 1/2.
    constexpr int kNodes = 128;
    constexpr double kRadius = 0.5;
    std::vector<std::complex<double>> values(kNodes);
    for (int k = 0; k < kNodes; ++k) {
        const std::complex<double> t = std::polar(kRadius, 2.0 * sf::kPi * k / kNodes);
        values[k] = scale * std::pow(1.0 + t, -pw);
    }
    for (int jj = 0; jj <= 6; ++jj) {
        report.samples.push_back(guarded("coefficient", {{"j", jj}}, [&](Sample& out) {
            std::complex<double> acc = 0.0;
            for (int k = 0; k < kNodes; ++k) acc += values[k] * std::polar(1.0, -2.0 * sf::kPi * k * jj / kNodes);
            const double coef = acc.real() / kNodes / std::pow(kRadius, jj);
            out.lhs = coef;
            out.rhs = params::l1_value(p, SpectralIndex(jj));
            out.rel_residual = relative(out.lhs, out.rhs);
        }));
    }
    report.finalize();
    return report;
}

VerificationReport verify_l1(ParamPair p, SpectralIndex j, const VerifyOptions& opt) {
    auto report = make_report(IdentityId::l1, pair_params(p), j.value(), tolerance_for(opt, IdentityId::l1, j.value(), p.nu()));
    report.samples.push_back(guarded("", {}, [&](Sample& out) {
        out.rhs = params::l1_value(p, j);
        out.lhs = lambda_integral(p, j, opt, [](double) { return 1.0; }).value;
        out.rel_residual = relative(out.lhs, out.rhs);
    }));
    report.finalize();
    return report;
}

VerificationReport verify_l2_norm(ParamPair p, SpectralIndex j, const VerifyOptions& opt) {
    const int jj = j.value();
    auto report = make_report(IdentityId::l2_norm, pair_params(p), jj, tolerance_for(opt, IdentityId::l2_norm, jj, p.nu()));
    const int top = std::max(jj, 3);
    const double power = p.mu() + p.nu() + 1.0;
    const Decay decay{power - 2.0 * std::max(0, p.nu()), 2.0, 2.0 * top + power};

    auto inner = [&](int k) {
        auto f = [&](double x) {
            const auto row = lambda_range(p, top, x, opt.extraction);
            return row[jj] * row[k] * std::pow(x, power);
        };
        return integrate_halfline(f, decay, opt.quad).value;
    };

    report.samples.push_back(guarded("norm", {{"k", jj}}, [&](Sample& out) {
        out.rhs = params::l2_norm_sq(p, j);
        out.lhs = inner(jj);
        out.rel_residual = relative(out.lhs, out.rhs);
    }));
    for (int k = 0; k <= 3; ++k) {
        if (k == jj) continue;
        report.samples.push_back(guarded("inner", {{"k", k}}, [&](Sample& out) {
            out.rhs = 0.0;
            out.lhs = inner(k);
            const double norms = std::sqrt(params::l2_norm_sq(p, j) * params::l2_norm_sq(p, SpectralIndex(k)));
            out.rel_residual = std::abs(out.lhs) / norms;
        }));
    }
    report.finalize();
    return report;
}

VerificationReport verify_gegenbauer_norm(int n, double lambda, const VerifyOptions& opt) {
    if (n < 0) throw DomainError("verify_gegenbauer_norm: n must be >= 0");
    if (!(lambda > 0.0)) throw DomainError("verify_gegenbauer_norm: lambda must be > 0");
    auto report = make_report(IdentityId::gegenbauer_norm, {{"n", n}, {"lambda", lambda}}, std::nullopt,
                              tolerance_for(opt, IdentityId::gegenbauer_norm, std::nullopt, 0));
    report.samples.push_back(guarded("", {}, [&](Sample& out) {
        out.rhs = sf::kPi * std::exp(log2_pow(1.0 - 2.0 * lambda) + sf::log_gamma(n + 2.0 * lambda) - sf::log_gamma(n + 1.0)) /
                  (n + lambda);
        auto f = [&](double th) {
            const double c = sf::gegenbauer_norm(n, lambda, std::cos(th));
            return c * c * std::pow(std::sin(th), 2.0 * lambda);
        };
        out.lhs = detail::integrate_interval(f, 0.0, sf::kPi, opt.quad).value;
        out.rel_residual = relative(out.lhs, out.rhs);
    }));
    report.finalize();
    return report;
}

VerificationReport verify_poisson_partial(ParamPair p, double t, const std::vector<AngleSample>& samples, int j_max,
                                          const VerifyOptions& opt) {
    if (!(std::abs(t) <= 0.6)) throw DomainError("verify_poisson_partial: require |t| <= 0.6");
    if (j_max < 1 || j_max > 12) throw DomainError("verify_poisson_partial: require 1 <= j_max <= 12");
    if (samples.empty()) throw DomainError("verify_poisson_partial: no angle samples");
    auto report = make_report(IdentityId::poisson_partial, {{"mu", p.mu()}, {"nu", p.nu()}, {"t", t}, {"j_max", j_max}},
                              std::nullopt, tolerance_for(opt, IdentityId::poisson_partial, std::nullopt, p.nu()));
    const double alpha = 0.5 * p.mu();
    const double beta = 0.5 * p.nu();
    const double lam1 = 0.5 * (p.mu() + 1);
    const double lam2 = 0.5 * (p.nu() + 1);
    const int shift = (p.mu() - p.nu()) / 2;
    const double pw = p.weight();
    const double power = p.mu() + p.nu() + 1.0;

    // |C~_n^l(x)| <= C~_n^l(1) on [-1, 1].
    const double tail = tail_sum(
        [&](int jj) {
            return std::abs(bilinear_coefficient(p, jj)) * sf::gegenbauer_norm(jj, lam1, 1.0) *
                   sf::gegenbauer_norm(jj + shift, lam2, 1.0) * std::pow(std::abs(t), jj);
        },
        j_max);

    for (const auto& s : samples) {
        report.samples.push_back(guarded("", angle_point(s), [&](Sample& out) {
            double sum = 0.0;
            double abs_sum = 0.0;
            for (int jj = 0; jj <= j_max; ++jj) {
                const double term = bilinear_coefficient(p, jj) * sf::gegenbauer_norm(jj, lam1, std::cos(s.theta())) *
                                    sf::gegenbauer_norm(jj + shift, lam2, std::cos(s.phi())) * std::pow(t, jj);
                sum += term;
                abs_sum += std::abs(term);
            }
            out.rhs = sum;
            const double factor = std::pow(1.0 - t, -pw) * std::pow(0.5 * s.cos_sum(), -pw);
            auto f = [&](double x) {
                return ik_product(alpha, beta, t, x) * sf::bessel_j_norm(alpha, s.a() * x) *
                       sf::bessel_j_norm(beta, s.b() * x) * std::pow(x, power);
            };
            const auto q = integrate_halfline(f, {power - std::max(0, p.nu()), (1.0 - std::abs(t)) / (1.0 - t), power}, opt.quad);
            out.lhs = factor * q.value;
            const double allowance = tail + factor * q.err_estimate + 64.0 * kEps * abs_sum;
            out.rel_residual = std::abs(out.lhs - out.rhs) / allowance;
        }));
    }
    report.finalize();
    return report;
}

VerificationReport verify_poisson_kernel(double lambda, double t, const std::vector<AngleSample>& samples, int n_max,
                                         const VerifyOptions& opt) {
    const double two_lambda = 2.0 * lambda;
    if (!(lambda > 0.0) || two_lambda != std::round(two_lambda))
        throw DomainError("verify_poisson_kernel: 2 lambda must be a positive integer");
    if (!(std::abs(t) <= 0.5)) throw DomainError("verify_poisson_kernel: require |t| <= 0.5");
    if (n_max < 1) throw DomainError("verify_poisson_kernel: n_max must be >= 1");
    if (samples.empty()) throw DomainError("verify_poisson_kernel: no angle samples");
    auto report = make_report(IdentityId::poisson_kernel, {{"lambda", lambda}, {"t", t}, {"n_max", n_max}}, std::nullopt,
                              tolerance_for(opt, IdentityId::poisson_kernel, std::nullopt, 0));

    auto series_coefficient = [&](int n) {
        return std::exp(sf::log_gamma(n + 1.0) - sf::log_gamma(n + two_lambda)) * (n + lambda);
    };
    const double tail = tail_sum(
        [&](int n) {
            const double c = sf::gegenbauer_norm(n, lambda, 1.0);
            return series_coefficient(n) * c * c * std::pow(std::abs(t), n);
        },
        n_max);

    // mu = nu = 2 lambda - 1; the integral is evaluated at s = -t.
    const double order = lambda - 0.5;
    const double power = 4.0 * lambda - 1.0;
    const double s = -t;
    const double prefactor = sf::kPi / std::exp(log2_pow(8.0 * lambda - 4.0));

    for (const auto& smp : samples) {
        report.samples.push_back(guarded("", angle_point(smp), [&](Sample& out) {
            double sum = 0.0;
            double abs_sum = 0.0;
            for (int n = 0; n <= n_max; ++n) {
                const double term = series_coefficient(n) * sf::gegenbauer_norm(n, lambda, std::cos(smp.theta())) *
                                    sf::gegenbauer_norm(n, lambda, std::cos(smp.phi())) * std::pow(t, n);
                sum += term;
                abs_sum += std::abs(term);
            }
            out.lhs = sum;

            // (theta_t + lambda)[(1+t)^{-2 lambda} I(-t)]
            //   = (1+t)^{-2 lambda} [(lambda - 2 lambda t/(1+t)) I(s) - t dI/ds(s)],
            // with d/ds of I~(w) K~(z) taken through I~'(w) = (w/2) I~_{+1}(w), K~'(z) = -(z/2) K~_{+1}(z).
            const double front = prefactor * std::pow(0.5 * smp.cos_sum(), -two_lambda) * std::pow(1.0 + t, -two_lambda);
            const double c0 = lambda - two_lambda * t / (1.0 + t);
            auto f = [&](double x) {
                const double w = s * x / (1.0 - s);
                const double z = x / (1.0 - s);
                const double dq = x / ((1.0 - s) * (1.0 - s));
                const double e = std::exp(std::abs(w) - z);
                const double i0 = sf::bessel_i_norm_scaled(order, std::abs(w));
                const double i1 = sf::bessel_i_norm_scaled(order + 1.0, std::abs(w));
                const double k0 = sf::bessel_k_norm_scaled(order, z);
                const double k1 = sf::bessel_k_norm_scaled(order + 1.0, z);
                const double value = i0 * k0;
                const double deriv = dq * (0.5 * w * i1 * k0 - 0.5 * z * i0 * k1);
                const double jj = sf::bessel_j_norm(order, smp.a() * x) * sf::bessel_j_norm(order, smp.b() * x);
                return (c0 * value - t * deriv) * e * jj * std::pow(x, power);
            };
            const auto q = integrate_halfline(f, {power, (1.0 - std::abs(s)) / (1.0 - s), power + 1.0}, opt.quad);
            out.rhs = front * q.value;
            const double allowance = tail + std::abs(front) * q.err_estimate + 64.0 * kEps * abs_sum;
            out.rel_residual = std::abs(out.lhs - out.rhs) / allowance;
        }));
    }
    report.finalize();
    return report;
}

VerificationReport verify_bottom_layer(ParamPair p, const std::vector<AngleSample>& grid, const VerifyOptions& opt) {
    if (p.nu() <= -1) throw DomainError("verify_bottom_layer: require nu > -1");
    if (grid.empty()) throw DomainError("verify_bottom_layer: empty grid");
    auto report = make_report(IdentityId::bottom_layer, pair_params(p), std::nullopt,
                              tolerance_for(opt, IdentityId::bottom_layer, std::nullopt, p.nu()));
    const double mu = p.mu();
    const double nu = p.nu();
    const double constant =
        std::exp(log2_pow(0.5 * (nu - 2.0)) + sf::log_gamma(0.5 * (mu - nu + 2.0))) / sf::kSqrtPi;
    for (const auto& s : grid) {
        report.samples.push_back(guarded("", angle_point(s), [&](Sample& out) {
            out.rhs = constant * s.cos_sum() * std::pow(std::sin(s.theta()), 0.5 * mu) * std::pow(std::sin(s.phi()), 0.5 * nu) *
                      sf::gegenbauer_norm((p.mu() - p.nu()) / 2, 0.5 * (nu + 1.0), std::cos(s.phi()));
            auto f = [&](double x) {
                return sf::bessel_k(0.5 * nu, x) * sf::bessel_j(0.5 * mu, s.a() * x) * sf::bessel_j(0.5 * nu, s.b() * x) *
                       std::pow(x, 0.5 * (mu + 2.0));
            };
            out.lhs = integrate_halfline(f, {0.5 * mu + 1.0 - 0.5 * nu, 1.0, 0.5 * (mu + 2.0)}, opt.quad).value;
        }));
    }
    normalize_by_grid(report.samples, "");
    report.finalize();
    return report;
}

}  // namespace quartic
