#include "quartic/eigenfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "quartic/detail/bessel_kernels.hpp"
#include "quartic/errors.hpp"
#include "quartic/specfun.hpp"

namespace quartic {
namespace {

using cplx = std::complex<double>;
using specfun::kPi;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRoundoff = 64.0 * kEps;
constexpr int kJetOrder = 4;

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double falling(int n, int e) {
    double f = 1.0;
    for (int i = 0; i < e; ++i) f *= n - i;
    return f;
}

void require_x(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(who) + ": x must be > 0");
}

// ---------------------------------------------------------------------------
// Taylor route. With u = t/(1-t) the generating function becomes
//   G = (1+u)^p I~_a(x u) K~_b(x (1+u)),
// a product of three power series in u whose coefficients are exact recursions.

// Value with a running sum of absolute contributions, for a rounding bound.
struct Tracked {
    double v = 0.0;
    double m = 0.0;
};

Tracked operator+(Tracked a, Tracked b) { return {a.v + b.v, a.m + b.m}; }
Tracked operator*(double s, Tracked a) { return {s * a.v, std::abs(s) * a.m}; }
Tracked operator*(Tracked a, Tracked b) { return {a.v * b.v, a.m * b.m}; }

using Series = std::vector<Tracked>;

Series truncated_product(const Series& a, const Series& b, int n) {
    Series c(n + 1);
    for (int i = 0; i <= n && i < static_cast<int>(a.size()); ++i) {
        if (a[i].m == 0.0) continue;
        for (int k = 0; i + k <= n && k < static_cast<int>(b.size()); ++k) c[i + k] = c[i + k] + a[i] * b[k];
    }
    return c;
}

Series binomial_series(double power, int n) {
    Series s(n + 1);
    double b = 1.0;
    for (int k = 0; k <= n; ++k) {
        s[k] = {b, std::abs(b)};
        b *= (power - k) / (k + 1.0);
    }
    return s;
}

// c_n = e^x [eps^n] K~_b(x (1+eps)), n <= n_max.
// F_m(eps) = (x/2)^{2m} K~_{b+m}(x (1+eps)) obeys F_m' = -2 (1+eps) F_{m+1}.
Series k_taylor(double beta, double x, int n_max) {
    const auto pair = specfun::detail::bessel_k_pair(std::abs(beta), x, /*scaled=*/true);
    const double half = 0.5 * x;
    const double h2 = half * half;

    std::vector<Series> f(n_max + 1);
    for (int m = 0; m <= n_max; ++m) f[m].resize(n_max - m + 1);
    std::vector<double> f0(n_max + 2);
    f0[0] = std::pow(half, -beta) * pair.k_nu;
    f0[1] = std::pow(half, 1.0 - beta) * (beta >= 0.0 ? pair.k_nu1 : pair.k_nu);
    for (int m = 1; m < n_max; ++m) f0[m + 1] = h2 * f0[m - 1] + (beta + m) * f0[m];
    for (int m = 0; m <= n_max; ++m) f[m][0] = {f0[m], std::abs(f0[m])};

    for (int n = 0; n < n_max; ++n) {
        const double s = -2.0 / (n + 1.0);
        for (int m = 0; m + n < n_max; ++m) {
            Tracked acc = f[m + 1][n];
            if (n >= 1) acc = acc + f[m + 1][n - 1];
            f[m][n + 1] = s * acc;
        }
    }
    return f[0];
}

struct Extraction {
    // value[j][d], error[j][d]: d-th x-derivative of Lambda_j and its error bound.
    std::vector<std::array<double, 5>> value;
    std::vector<std::array<double, 5>> error;
};

Extraction taylor_extract(ParamPair p, int j_max, double x, int d_max) {
    const double alpha = 0.5 * p.mu();
    const double beta = 0.5 * p.nu();
    const int n = j_max;

    const Series c = k_taylor(beta, x, n + d_max);

    std::vector<Series> a_der(d_max + 1, Series(n + 1));
    double a_k = 1.0 / specfun::gamma_fn(alpha + 1.0);
    for (int k = 0; 2 * k <= n; ++k) {
        for (int e = 0; e <= d_max; ++e) {
            const double ff = falling(2 * k, e);
            if (ff == 0.0) continue;
            const double v = a_k * ff * std::pow(x, 2 * k - e);
            a_der[e][2 * k] = {v, std::abs(v)};
        }
        a_k /= 4.0 * (k + 1.0) * (k + 1.0 + alpha);
    }

    std::vector<Series> b_der(d_max + 1);
    for (int d = 0; d <= d_max; ++d) {
        Series raw(n + 1);
        const double pre = falling(d, d) * std::pow(x, -d);
        for (int k = 0; k <= n; ++k) raw[k] = (pre * binomial(k + d, d)) * c[k + d];
        b_der[d] = truncated_product(raw, binomial_series(d, n), n);
    }

    const Series weight = binomial_series(p.weight(), n);
    const double decay = std::exp(-x);

    Extraction out;
    out.value.assign(j_max + 1, {});
    out.error.assign(j_max + 1, {});
    for (int d = 0; d <= d_max; ++d) {
        Series h(n + 1);
        for (int e = 0; e <= d; ++e) {
            const Series prod = truncated_product(a_der[e], b_der[d - e], n);
            const double bin = binomial(d, e);
            for (int k = 0; k <= n; ++k) h[k] = h[k] + bin * prod[k];
        }
        const Series s = truncated_product(weight, h, n);
        for (int j = 0; j <= j_max; ++j) {
            Tracked coef = j == 0 ? s[0] : Tracked{};
            for (int k = 1; k <= j; ++k) coef = coef + binomial(j - 1, k - 1) * s[k];
            out.value[j][d] = coef.v * decay;
            out.error[j][d] = kRoundoff * coef.m * decay;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contour route: complex G and its x-derivatives on |t| = r.

// f^{(d)} for f = I~_a (sigma = +1) or K~_b (sigma = -1), written as sum c w^a F_{order+m}(w),
// using I~'_a(w) = (w/2) I~_{a+1}(w) and K~'_b(w) = -(w/2) K~_{b+1}(w).
struct Term {
    int power;
    int shift;
    double coef;
};

std::vector<Term> differentiate(const std::vector<Term>& terms, double sigma) {
    std::vector<Term> out;
    auto add = [&out](int power, int shift, double coef) {
        for (auto& t : out) {
            if (t.power == power && t.shift == shift) {
                t.coef += coef;
                return;
            }
        }
        out.push_back({power, shift, coef});
    };
    for (const auto& t : terms) {
        if (t.power != 0) add(t.power - 1, t.shift, t.coef * t.power);
        add(t.power + 1, t.shift + 1, 0.5 * sigma * t.coef);
    }
    return out;
}

std::array<std::vector<Term>, kJetOrder + 1> derivative_terms(double sigma) {
    std::array<std::vector<Term>, kJetOrder + 1> d;
    d[0] = {{0, 0, 1.0}};
    for (int k = 1; k <= kJetOrder; ++k) d[k] = differentiate(d[k - 1], sigma);
    return d;
}

const std::array<std::vector<Term>, kJetOrder + 1>& i_terms() {
    static const auto terms = derivative_terms(1.0);
    return terms;
}

const std::array<std::vector<Term>, kJetOrder + 1>& k_terms() {
    static const auto terms = derivative_terms(-1.0);
    return terms;
}

cplx evaluate_terms(const std::vector<Term>& terms, cplx w, const std::vector<cplx>& f) {
    cplx sum = 0.0;
    for (const auto& t : terms) sum += t.coef * std::pow(w, t.power) * f[t.shift];
    return sum;
}

// d-th x-derivatives of G(t, x), d <= d_max.
std::array<cplx, 5> gen_g_derivatives(ParamPair p, cplx t, double x, int d_max) {
    const double alpha = 0.5 * p.mu();
    const double beta = 0.5 * p.nu();
    const cplx q = 1.0 / (1.0 - t);
    const cplx s = t * q;
    const cplx w = x * s;
    const cplx z = x * q;

    std::vector<cplx> i_vals(d_max + 1);
    for (int m = 0; m <= d_max; ++m) {
        i_vals[m] = specfun::detail::normalized_ascending_series(alpha + m, w, 1.0,
                                                                  1.0 / specfun::gamma_fn(alpha + m + 1.0));
    }

    // e^z K_{b+m}(z), upward recurrence from the pair at |b| (K_{-1/2} = K_{1/2}).
    const auto pair = specfun::detail::bessel_k_pair(std::abs(beta), z, /*scaled=*/true);
    std::vector<cplx> k_raw(d_max + 2);
    k_raw[0] = pair.k_nu;
    k_raw[1] = beta >= 0.0 ? pair.k_nu1 : pair.k_nu;
    for (int m = 1; m <= d_max; ++m) k_raw[m + 1] = k_raw[m - 1] + 2.0 * (beta + m) / z * k_raw[m];
    std::vector<cplx> k_vals(d_max + 1);
    const cplx emz = std::exp(-z);
    for (int m = 0; m <= d_max; ++m) k_vals[m] = std::pow(0.5 * z, -(beta + m)) * k_raw[m] * emz;

    const cplx pref = std::pow(q, p.weight());
    std::array<cplx, 5> out{};
    for (int d = 0; d <= d_max; ++d) {
        cplx sum = 0.0;
        for (int e = 0; e <= d; ++e) {
            sum += binomial(d, e) * std::pow(s, e) * evaluate_terms(i_terms()[e], w, i_vals) *
                   std::pow(q, d - e) * evaluate_terms(k_terms()[d - e], z, k_vals);
        }
        out[d] = pref * sum;
    }
    return out;
}

struct ContourResult {
    std::array<double, 5> value{};
    std::array<double, 5> error{};
    double scale = 0.0;
};

ContourResult contour_once(ParamPair p, int j, double x, int d_max, double r, int n_nodes) {
    // Real symmetry G(conj t) = conj G(t): nodes 0..N/2 suffice.
    std::array<double, 5> full{};
    std::array<double, 5> half{};
    std::array<double, 5> mag{};
    double g_max = 0.0;
    for (int k = 0; k <= n_nodes / 2; ++k) {
        const double phase = 2.0 * kPi * k / n_nodes;
        const cplx t = std::polar(r, phase);
        const auto g = gen_g_derivatives(p, t, x, d_max);
        const cplx rot = std::polar(1.0, -phase * j);
        const double wt = (k == 0 || k == n_nodes / 2) ? 1.0 : 2.0;
        g_max = std::max(g_max, std::abs(g[0]));
        for (int d = 0; d <= d_max; ++d) {
            const double term = wt * (g[d] * rot).real();
            full[d] += term;
            if (k % 2 == 0) half[d] += term;
            mag[d] += wt * std::abs(g[d]);
        }
    }
    ContourResult res;
    const double norm = 1.0 / (n_nodes * std::pow(r, j));
    res.scale = g_max * std::pow(r, -j);
    for (int d = 0; d <= d_max; ++d) {
        res.value[d] = full[d] * norm;
        const double coarse = half[d] * 2.0 * norm;
        res.error[d] = std::abs(res.value[d] - coarse) + kRoundoff * mag[d] * norm;
    }
    return res;
}

// ---------------------------------------------------------------------------

double cauchy_scale(ParamPair p, int j, double x, double r) {
    return std::max(std::abs(gen_g(p, r, x)), std::abs(gen_g(p, -r, x))) * std::pow(r, -j);
}

// Derivatives scale like x^-d near the origin and like the function itself at large x.
double derivative_scale(double scale, double x, int d) { return scale * std::pow(1.0 + 1.0 / x, d); }

// Below this estimated relative error the Taylor result is taken without consulting the contour.
constexpr double kTaylorTrusted = 1e-12;

struct Candidate {
    std::array<double, 5> value{};
    std::array<double, 5> error{};
    double worst = 0.0;  // max_d error / derivative scale
};

Candidate taylor_candidate(const Extraction& e, int j, double x, int d_max, double scale) {
    Candidate c{e.value[j], e.error[j], 0.0};
    for (int d = 0; d <= d_max; ++d) c.worst = std::max(c.worst, c.error[d] / derivative_scale(scale, x, d));
    return c;
}

bool taylor_trusted(const Candidate& c, int d_max) {
    for (int d = 0; d <= d_max; ++d) {
        if (!(c.error[d] <= kTaylorTrusted * std::abs(c.value[d]))) return false;
    }
    return true;
}

// Radius adaptation: one retry with r halved toward 0.25 and twice the nodes.
Candidate contour_candidate(ParamPair p, int j, double x, int d_max, const ExtractionConfig& cfg) {
    double r = cfg.contour_radius;
    int n_nodes = cfg.num_nodes;
    Candidate best;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const ContourResult res = contour_once(p, j, x, d_max, r, n_nodes);
        Candidate c{res.value, res.error, 0.0};
        for (int d = 0; d <= d_max; ++d) c.worst = std::max(c.worst, c.error[d] / derivative_scale(res.scale, x, d));
        if (attempt == 0 || c.worst < best.worst) best = c;
        if (best.worst <= cfg.target_rel_err) break;
        r = std::max(0.5 * r, std::min(r, 0.25));
        n_nodes *= 2;
    }
    return best;
}

[[noreturn]] void accuracy_failure(int j, double x, double rel) {
    throw AccuracyError("Lambda_j extraction: j=" + std::to_string(j) + " x=" + std::to_string(x) +
                            " estimated relative error " + std::to_string(rel),
                        rel);
}

Candidate select(ParamPair p, int j, double x, int d_max, const ExtractionConfig& cfg, const Extraction* taylor) {
    Candidate c;
    if (cfg.method == ExtractionMethod::contour) {
        c = contour_candidate(p, j, x, d_max, cfg);
    } else {
        const double scale = cauchy_scale(p, j, x, cfg.contour_radius);
        c = taylor_candidate(*taylor, j, x, d_max, scale);
        if (cfg.method == ExtractionMethod::automatic && !taylor_trusted(c, d_max)) {
            const Candidate alt = contour_candidate(p, j, x, d_max, cfg);
            if (alt.worst < c.worst) c = alt;
        }
    }
    if (!(c.worst <= cfg.target_rel_err)) accuracy_failure(j, x, c.worst);
    return c;
}

std::array<double, 5> extract(ParamPair p, int j, double x, int d_max, const ExtractionConfig& cfg) {
    cfg.validate();
    if (cfg.method == ExtractionMethod::contour) return select(p, j, x, d_max, cfg, nullptr).value;
    const Extraction e = taylor_extract(p, j, x, d_max);
    return select(p, j, x, d_max, cfg, &e).value;
}

}  // namespace

void ExtractionConfig::validate() const {
    if (!(contour_radius > 0.0 && contour_radius < 1.0)) throw DomainError("contour_radius must lie in (0, 1)");
    if (num_nodes < 64 || (num_nodes & (num_nodes - 1)) != 0) {
        throw DomainError("num_nodes must be a power of two >= 64");
    }
    if (!(target_rel_err > 0.0)) throw DomainError("target_rel_err must be > 0");
}

double gen_g(ParamPair p, double t, double x) {
    if (!(std::abs(t) < 1.0)) throw DomainError("gen_g: |t| must be < 1");
    require_x(x, "gen_g");
    const double q = 1.0 / (1.0 - t);
    const double w = std::abs(t) * x * q;
    const double z = x * q;
    return std::pow(q, p.weight()) * specfun::bessel_i_norm_scaled(0.5 * p.mu(), w) *
           specfun::bessel_k_norm_scaled(0.5 * p.nu(), z) * std::exp(w - z);
}

std::complex<double> gen_g(ParamPair p, std::complex<double> t, double x) {
    if (!(std::abs(t) < 1.0)) throw DomainError("gen_g: |t| must be < 1");
    require_x(x, "gen_g");
    return gen_g_derivatives(p, t, x, 0)[0];
}

double lambda_j(const EigenfunctionSpec& spec, double x) {
    require_x(x, "lambda_j");
    return extract(spec.params, spec.j.value(), x, 0, spec.extraction)[0];
}

std::vector<double> lambda_range(ParamPair p, int j_max, double x, const ExtractionConfig& cfg) {
    require_x(x, "lambda_range");
    if (j_max < 0) throw DomainError("lambda_range: j_max must be >= 0");
    cfg.validate();
    std::vector<double> out(j_max + 1);
    if (cfg.method == ExtractionMethod::contour) {
        for (int j = 0; j <= j_max; ++j) out[j] = select(p, j, x, 0, cfg, nullptr).value[0];
        return out;
    }
    const Extraction e = taylor_extract(p, j_max, x, 0);
    for (int j = 0; j <= j_max; ++j) out[j] = select(p, j, x, 0, cfg, &e).value[0];
    return out;
}

FunctionJet lambda_jet(const EigenfunctionSpec& spec, double x) {
    require_x(x, "lambda_jet");
    return {x, extract(spec.params, spec.j.value(), x, kJetOrder, spec.extraction)};
}

double apply_D(ParamPair p, const FunctionJet& jet) {
    const double mu = p.mu();
    const double nu = p.nu();
    const double x = jet.x;
    const auto& u = jet.values;

    // x^-2 P1(th) P2(th) - (P1(th+2) + P2(th)) + x^2 with
    // P1 = (th+mu)(th+mu+nu), P2 = th(th+nu), and th^n = sum_k S(n,k) x^k d^k.
    const double p1[3] = {mu * (mu + nu), 2.0 * mu + nu, 1.0};
    const double p2[3] = {0.0, nu, 1.0};
    double quartic[5] = {};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) quartic[a + b] += p1[a] * p2[b];
    }
    const double quadratic[3] = {(mu + 2.0) * (mu + nu + 2.0), 2.0 * mu + 2.0 * nu + 4.0, 2.0};
    static constexpr double stirling[5][5] = {
        {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 1, 1, 0, 0}, {0, 1, 3, 1, 0}, {0, 1, 7, 6, 1},
    };

    double coef[5] = {};
    for (int n = 0; n <= 4; ++n) {
        for (int k = 0; k <= n; ++k) coef[k] += quartic[n] * stirling[n][k] * std::pow(x, k - 2);
    }
    for (int n = 0; n <= 2; ++n) {
        for (int k = 0; k <= n; ++k) coef[k] -= quadratic[n] * stirling[n][k] * std::pow(x, k);
    }
    coef[0] += x * x;

    double sum = 0.0;
    for (int k = 0; k <= 4; ++k) sum += coef[k] * u[k];
    return sum;
}

double apply_D_monomial(ParamPair p, int k, double x) {
    const double mu = p.mu();
    const double nu = p.nu();
    auto p1 = [&](double th) { return (th + mu) * (th + mu + nu); };
    auto p2 = [&](double th) { return th * (th + nu); };
    // (P2(th) - x^2) x^k = P2(k) x^k - x^{k+2}, then (P1(th) - x^2) acts termwise.
    const double xk = std::pow(x, k);
    const double inner = p1(k) * p2(k) * xk - p1(k + 2.0) * xk * x * x - p2(k) * xk * x * x + xk * std::pow(x, 4);
    return inner / (x * x);
}

FunctionJet monomial_jet(int k, double x) {
    FunctionJet jet{x, {}};
    for (int d = 0; d <= kJetOrder; ++d) {
        const double ff = falling(k, d);
        jet.values[d] = ff == 0.0 ? 0.0 : ff * std::pow(x, k - d);
    }
    return jet;
}

double eigen_residual(const EigenfunctionSpec& spec, std::span<const double> xs) {
    if (xs.empty()) throw DomainError("eigen_residual: empty sample list");
    const double lambda = params::eigenvalue(spec.params, spec.j);
    std::vector<FunctionJet> jets;
    jets.reserve(xs.size());
    double guard = 0.0;
    for (double x : xs) {
        jets.push_back(lambda_jet(spec, x));
        guard = std::max(guard, std::abs(jets.back().values[0]));
    }
    double worst = 0.0;
    for (const auto& jet : jets) {
        const double target = lambda * jet.values[0];
        worst = std::max(worst, std::abs(apply_D(spec.params, jet) - target) / (std::abs(target) + guard));
    }
    return worst;
}

}  // namespace quartic
