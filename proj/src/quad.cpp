#include "quartic/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

namespace quartic {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss weights (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0,
};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821,
};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697, 0.219086362515982043995534934228163,
    0.269266719309996355091226921569469, 0.295524224714752870173892994651338,
};

struct Panel {
    double a;
    double b;
    bool mapped;  // integrate 2 s f(s^2) over s in [a, b]
    int depth;
    double result;
    double error;
    bool at_roundoff;
};

struct ByError {
    bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

class Engine {
public:
    Engine(const std::function<double(double)>& f, const QuadratureConfig& cfg) : f_(f), cfg_(cfg) {}

    void add(double a, double b, bool mapped) { push(evaluate(a, b, mapped, 0)); }

    QuadResult run() {
        while (true) {
            if (err_sum_ <= std::max(cfg_.abs_tol, cfg_.rel_tol * std::abs(value_sum_))) return current();
            const Panel worst = heap_.top();
            // Nothing left to gain once the largest contribution is pure rounding.
            if (worst.at_roundoff) return current();
            if (worst.depth >= cfg_.max_depth) {
                const QuadResult now = current();
                std::ostringstream msg;
                msg.precision(17);
                msg << "quadrature: subdivision depth " << cfg_.max_depth << " exhausted near x=" << abscissa(worst)
                    << "; partial value " << now.value << " +- " << now.err_estimate;
                throw QuadratureError(msg.str(), now);
            }
            heap_.pop();
            value_sum_ -= worst.result;
            err_sum_ -= worst.error;
            const double mid = 0.5 * (worst.a + worst.b);
            push(evaluate(worst.a, mid, worst.mapped, worst.depth + 1));
            push(evaluate(mid, worst.b, worst.mapped, worst.depth + 1));
        }
    }

    QuadResult current() const {
        QuadResult r;
        auto copy = heap_;
        while (!copy.empty()) {
            r.value += copy.top().result;
            r.err_estimate += copy.top().error;
            copy.pop();
        }
        r.evaluations = evaluations_;
        return r;
    }

    double sample(double x) {
        ++evaluations_;
        const double y = f_(x);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "quadrature: non-finite integrand value at x=" << x;
            throw DomainError(msg.str());
        }
        return y;
    }

private:
    static double abscissa(const Panel& p) {
        const double m = 0.5 * (p.a + p.b);
        return p.mapped ? m * m : m;
    }

    double eval_mapped(double s, bool mapped) { return mapped ? 2.0 * s * sample(s * s) : sample(s); }

    Panel evaluate(double a, double b, bool mapped, int depth) {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        const double fc = eval_mapped(center, mapped);
        double resg = 0.0;
        double resk = fc * kWgk[10];
        double resabs = std::abs(resk);
        double fv1[10];
        double fv2[10];
        for (int j = 0; j < 5; ++j) {
            const int jtw = 2 * j + 1;
            const double dx = half * kXgk[jtw];
            const double f1 = eval_mapped(center - dx, mapped);
            const double f2 = eval_mapped(center + dx, mapped);
            fv1[jtw] = f1;
            fv2[jtw] = f2;
            resg += kWg[j] * (f1 + f2);
            resk += kWgk[jtw] * (f1 + f2);
            resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
        }
        for (int j = 0; j < 5; ++j) {
            const int jtwm1 = 2 * j;
            const double dx = half * kXgk[jtwm1];
            const double f1 = eval_mapped(center - dx, mapped);
            const double f2 = eval_mapped(center + dx, mapped);
            fv1[jtwm1] = f1;
            fv2[jtwm1] = f2;
            resk += kWgk[jtwm1] * (f1 + f2);
            resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
        }
        const double reskh = 0.5 * resk;
        double resasc = kWgk[10] * std::abs(fc - reskh);
        for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

        const double result = resk * half;
        resabs *= std::abs(half);
        resasc *= std::abs(half);
        double err = std::abs((resk - resg) * half);
        if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        const double floor = 50.0 * kEps * resabs;
        bool at_roundoff = false;
        if (resabs > kTiny / (50.0 * kEps) && floor >= err) {
            err = floor;
            at_roundoff = true;
        }
        return {a, b, mapped, depth, result, err, at_roundoff};
    }

    void push(const Panel& p) {
        heap_.push(p);
        value_sum_ += p.result;
        err_sum_ += p.error;
    }

    const std::function<double(double)>& f_;
    QuadratureConfig cfg_;
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap_;
    long evaluations_ = 0;
    double value_sum_ = 0.0;
    double err_sum_ = 0.0;
};

// Largest X with X^g e^{-rX} / max_x(x^g e^{-rx}) = cut.
double truncation_point(const Decay& d, double cut) {
    const double g = std::max(0.0, d.tail_power);
    const double r = d.rate;
    if (g == 0.0) return -std::log(cut) / r;
    const double peak = g / r;
    const double log_peak = g * std::log(peak) - g;
    // r X - g log X = -log(cut) - log_peak; the fixed point iteration contracts for X > g/r.
    double x = peak + 1.0 - std::log(cut) / r;
    for (int i = 0; i < 200; ++i) {
        const double next = (g * std::log(x) - std::log(cut) - log_peak) / r;
        if (std::abs(next - x) <= 1e-12 * x) return next;
        x = next;
    }
    return x;
}

}  // namespace

void QuadratureConfig::validate() const {
    if (!(rel_tol > kEps)) throw DomainError("QuadratureConfig: rel_tol must exceed machine epsilon");
    if (!(abs_tol > 0.0)) throw DomainError("QuadratureConfig: abs_tol must be > 0");
    if (max_depth <= 0 || max_depth > 60) throw DomainError("QuadratureConfig: max_depth must lie in 1..60");
    if (!(truncation_cut > 0.0 && truncation_cut < 1.0)) throw DomainError("QuadratureConfig: truncation_cut must lie in (0, 1)");
    if (!(truncation_scale > 0.0)) throw DomainError("QuadratureConfig: truncation_scale must be > 0");
}

QuadResult integrate_halfline(const std::function<double(double)>& f, const Decay& decay, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(decay.rate > 0.0)) throw DomainError("integrate_halfline: exponential rate must be > 0");

    const double big_x = truncation_point(decay, cfg.truncation_cut) * cfg.truncation_scale;
    const double first = std::min(1.0, 0.5 * big_x);

    Engine engine(f, cfg);
    engine.add(0.0, std::sqrt(first), /*mapped=*/true);
    const int panels = std::max(1, static_cast<int>(std::ceil((big_x - first) / 2.0)));
    const double width = (big_x - first) / panels;
    for (int i = 0; i < panels; ++i) {
        engine.add(first + i * width, i + 1 == panels ? big_x : first + (i + 1) * width, /*mapped=*/false);
    }

    QuadResult result = engine.run();

    // Tail beyond X under the envelope: |f(X)| X^-g e^{rX} int_X^inf x^g e^{-rx} dx <= |f(X)| / (r - g/X).
    const double g = std::max(0.0, decay.tail_power);
    auto env = [&](double x) { return std::pow(x, g) * std::exp(-decay.rate * (x - big_x)); };
    double amp = 0.0;
    for (double frac : {1.0, 0.95, 0.9, 0.85, 0.8}) {
        const double x = frac * big_x;
        amp = std::max(amp, std::abs(engine.sample(x)) / env(x) * env(big_x));
    }
    const double slope = decay.rate - g / big_x;
    const double tail = slope > 0.0 ? amp / slope : amp * big_x;
    result.err_estimate += tail;
    result.truncation_point = big_x;
    result.evaluations = engine.current().evaluations;
    return result;
}

namespace detail {

QuadResult integrate_interval(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg) {
    cfg.validate();
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_interval: bounds must be finite");
    Engine engine(f, cfg);
    engine.add(a, b, /*mapped=*/false);
    QuadResult r = engine.run();
    r.truncation_point = b;
    return r;
}

}  // namespace detail
}  // namespace quartic
