// Desk-scale acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "quartic/eigenfunction.hpp"
#include "quartic/identities.hpp"
#include "quartic/params.hpp"
#include "quartic/specfun.hpp"
#include "support/finite_difference.hpp"

using namespace quartic;

namespace {

const int kMatrix[][2] = {{0, 0}, {2, 0}, {4, 0}, {1, -1}, {3, -1}, {1, 1}, {3, 1}, {2, 2}, {4, 2}, {3, 3}};

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Worst residual over reports; a report with a failed sample counts as infinite.
struct Worst {
    double value = 0.0;
    int reports = 0;
    int failed = 0;
    void add(const VerificationReport& r) {
        ++reports;
        failed += !r.passed;
        value = std::max(value, r.max_rel_residual);
    }
};

Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = angle_grid(5, 5, 0.0, 1.2, 0.3);
    Worst low;
    Worst high;
    for (const auto& pr : kMatrix) {
        const auto p = ParamPair::validate(pr[0], pr[1]);
        for (int j = 0; j <= 4; ++j) (j <= 2 ? low : high).add(verify_theorem_A(p, SpectralIndex(j), grid));
    }
    const double secs = seconds_since(t0);
    Outcome o;
    o.pass = low.failed == 0 && high.failed == 0 && low.value <= 1e-8 && high.value <= 1e-7 && secs <= 600.0;
    o.detail = fmt("max residual %.2e (j<=2, tol 1e-8), %.2e (j>2, tol 1e-7)", low.value, high.value) +
               fmt(", %.0f reports, %.1f s (limit 600 s)", low.reports + high.reports, secs);
    return o;
}

Outcome criterion_2() {
    double worst_b0 = 0.0;
    double worst_b = 0.0;
    double worst_ratio0 = 0.0;
    double worst_ratio = 0.0;
    int errors = 0;
    for (const auto& pr : kMatrix) {
        const auto p = ParamPair::validate(pr[0], pr[1]);
        for (int j = 0; j <= 4; ++j) {
            const auto r = verify_theorem_B(p, SpectralIndex(j));
            for (const auto& s : r.samples) {
                errors += s.error.has_value();
                double& slot = s.label == "B" ? (pr[1] == 0 ? worst_b0 : worst_b) : (pr[1] == 0 ? worst_ratio0 : worst_ratio);
                slot = std::max(slot, s.rel_residual);
            }
        }
    }
    Outcome o;
    o.pass = errors == 0 && worst_b0 <= 1e-3 && worst_ratio0 <= 1e-3 && worst_b <= 1e-4 && worst_ratio <= 1e-4;
    o.detail = fmt("B: %.2e (nu=0, tol 1e-3), %.2e (nu!=0, tol 1e-4)", worst_b0, worst_b) +
               fmt("; A/B: %.2e (nu=0), %.2e (nu!=0)", worst_ratio0, worst_ratio);
    return o;
}

Outcome criterion_3() {
    const auto grid = angle_grid(4, 4, 0.0, 1.2);
    Worst w;
    for (int mu : {1, 3, 5})
        for (int j = 0; j <= 4; ++j) w.add(verify_corollary_C(mu, SpectralIndex(j), grid));
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1e-8;
    o.detail = fmt("cosine and sine, max residual %.2e (tol 1e-8), %.0f reports", w.value, w.reports);
    return o;
}

Outcome criterion_4() {
    Worst w;
    for (const auto& pr : kMatrix)
        for (int j = 0; j <= 4; ++j) w.add(verify_l1(ParamPair::validate(pr[0], pr[1]), SpectralIndex(j)));
    const auto p00 = ParamPair::validate(0, 0);
    const double k0 = verify_l1(p00, SpectralIndex(0)).samples[0].lhs;
    const double one = verify_l1(p00, SpectralIndex(1)).samples[0].lhs;
    const double e0 = std::abs(k0 - 1.0);
    const double e1 = std::abs(one + 1.0);
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1e-9 && e0 <= 1e-10 && e1 <= 1e-10;
    o.detail = fmt("max relative error %.2e (tol 1e-9); int K0 x dx - 1 = %.1e, (0,0,1) + 1 = %.1e (tol 1e-10)", w.value,
                   e0, e1);
    return o;
}

Outcome criterion_5() {
    double worst_norm = 0.0;
    double worst_inner = 0.0;
    int errors = 0;
    for (const auto& pr : kMatrix) {
        for (int j = 0; j <= 4; ++j) {
            const auto r = verify_l2_norm(ParamPair::validate(pr[0], pr[1]), SpectralIndex(j));
            for (const auto& s : r.samples) {
                errors += s.error.has_value();
                double& slot = s.label == "norm" ? worst_norm : worst_inner;
                slot = std::max(slot, s.rel_residual);
            }
        }
    }
    const auto p00 = ParamPair::validate(0, 0);
    const double e0 = std::abs(verify_l2_norm(p00, SpectralIndex(0)).samples[0].lhs - 0.5);
    const double e1 = std::abs(verify_l2_norm(p00, SpectralIndex(1)).samples[0].lhs - 1.0 / 6.0);
    Outcome o;
    o.pass = errors == 0 && worst_norm <= 1e-8 && worst_inner <= 1e-8 && e0 <= 1e-9 && e1 <= 1e-9;
    o.detail = fmt("norms %.2e (tol 1e-8), inner products %.2e of norms (tol 1e-8)", worst_norm, worst_inner) +
               fmt("; (0,0,0) - 1/2 = %.1e, (0,0,1) - 1/6 = %.1e (tol 1e-9)", e0, e1);
    return o;
}

Outcome criterion_6() {
    Worst w;
    for (const auto& pr : kMatrix) w.add(verify_generating_integral(ParamPair::validate(pr[0], pr[1]), {-0.5, 0.0, 0.3, 0.6}));
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1e-9;
    o.detail = fmt("quadrature, 2F1 route and coefficients: max relative error %.2e (tol 1e-9)", w.value);
    return o;
}

Outcome criterion_7() {
    const double quarter = std::atan(1.0);
    const std::vector<AngleSample> samples = {AngleSample::make(quarter, quarter), AngleSample::make(0.5, 0.7),
                                              AngleSample::make(0.0, 0.0), AngleSample::make(1.0, 0.3)};
    Worst w;
    for (auto p : {ParamPair::validate(0, 0), ParamPair::validate(3, 1)})
        for (double t : {-0.6, -0.3, 0.3, 0.6}) w.add(verify_poisson_partial(p, t, samples, 12));
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1.0;
    o.detail = fmt("j_max = 12, |t| <= 0.6: max |LHS - RHS| / (tail bound + quadrature error) = %.12f (limit 1), %.0f reports",
                   w.value, w.reports);
    return o;
}

Outcome criterion_8() {
    const double third = 4.0 * std::atan(1.0) / 3.0;
    const std::vector<AngleSample> samples = {AngleSample::make(third, third), AngleSample::make(0.4, 0.9),
                                              AngleSample::make(1.0, 0.2)};
    Worst w;
    for (double lambda : {0.5, 1.0, 1.5})
        for (double t : {-0.3, 0.3}) w.add(verify_poisson_kernel(lambda, t, samples, 14));
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1.0;
    o.detail = fmt("prefactor pi/2^(8 lambda - 4) as printed: max |LHS - RHS| / allowance = %.2e (limit 1)", w.value);
    return o;
}

Outcome criterion_9() {
    const auto grid = angle_grid(4, 4, 0.1, 1.2);
    Worst w;
    for (const auto& pr : {std::pair{2, 0}, std::pair{4, 0}, std::pair{2, 2}, std::pair{4, 2}})
        w.add(verify_bottom_layer(ParamPair::validate(pr.first, pr.second), grid));
    Outcome o;
    o.pass = w.failed == 0 && w.value <= 1e-8;
    o.detail = fmt("max residual %.2e (tol 1e-8)", w.value);
    return o;
}

Outcome criterion_10() {
    const std::vector<double> xs = {0.5, 1.0, 2.0, 5.0, 10.0};
    double worst_residual = 0.0;
    double worst_fd = 0.0;
    for (const auto& pr : kMatrix) {
        for (int j = 0; j <= 4; ++j) {
            const EigenfunctionSpec spec{ParamPair::validate(pr[0], pr[1]), SpectralIndex(j)};
            worst_residual = std::max(worst_residual, eigen_residual(spec, xs));
            for (double x : xs) {
                const auto jet = lambda_jet(spec, x);
                if (std::abs(jet.values[0]) <= 1e-8) continue;
                const auto fd = testing::finite_difference_jet([&](double y) { return lambda_j(spec, y); }, x);
                for (int d = 0; d <= 4; ++d) {
                    const double scale = std::max(std::abs(jet.values[d]), std::abs(jet.values[0]));
                    worst_fd = std::max(worst_fd, std::abs(jet.values[d] - fd[d]) / scale);
                }
            }
        }
    }
    Outcome o;
    o.pass = worst_residual <= 1e-7 && worst_fd <= 1e-6;
    o.detail = fmt("eigen residual %.2e (tol 1e-7), jets vs finite differences %.2e (tol 1e-6)", worst_residual, worst_fd);
    return o;
}

Outcome criterion_11() {
    double worst = 0.0;
    int cases = 0;
    for (int mu = -1; mu <= 7; ++mu) {
        for (int nu = -1; nu <= mu; ++nu) {
            if ((mu - nu) % 2 != 0 || (mu == -1 && nu == -1)) continue;
            const auto p = ParamPair::validate(mu, nu);
            for (int j = 0; j <= 8; ++j) {
                const SpectralIndex jj(j);
                const double a = params::constant_A(p, jj);
                const double rhs = params::ratio_AB(p, jj) * params::constant_B(p, jj);
                worst = std::max(worst, std::abs(a - rhs) / std::abs(a));
                ++cases;
            }
        }
    }
    Outcome o;
    o.pass = worst <= 1e-13;
    o.detail = fmt("max |A - (A/B) B| / |A| = %.2e over %.0f cases (tol 1e-13)", worst, cases);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Bessel-Gegenbauer integral matrix", criterion_1},
        {"small-x constants and A/B", criterion_2},
        {"Laguerre cosine/sine integrals", criterion_3},
        {"L1 values", criterion_4},
        {"L2 norms", criterion_5},
        {"generating-function integral", criterion_6},
        {"bilinear partial sums", criterion_7},
        {"Poisson kernel", criterion_8},
        {"K-Bessel bottom layer", criterion_9},
        {"eigen-equation properties", criterion_10},
        {"closed-form consistency", criterion_11},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
