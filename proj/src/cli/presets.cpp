#include <cmath>

#include "quartic/cli.hpp"

namespace quartic::cli {
namespace {

std::vector<ParamPair> pairs_of(const std::vector<std::pair<int, int>>& raw) {
    std::vector<ParamPair> out;
    for (const auto& [mu, nu] : raw) out.push_back(ParamPair::validate(mu, nu));
    return out;
}

std::vector<int> upto(int n) {
    std::vector<int> v;
    for (int i = 0; i <= n; ++i) v.push_back(i);
    return v;
}

std::vector<AngleSample> partial_samples() {
    const double quarter = std::atan(1.0);
    return {AngleSample::make(quarter, quarter), AngleSample::make(0.5, 0.7), AngleSample::make(0.0, 0.0),
            AngleSample::make(1.0, 0.3)};
}

std::vector<AngleSample> kernel_samples() {
    const double third = 4.0 * std::atan(1.0) / 3.0;
    return {AngleSample::make(third, third), AngleSample::make(0.4, 0.9), AngleSample::make(1.0, 0.2)};
}

}  // namespace

std::map<IdentityId, Plan> preset(const std::string& name) {
    std::vector<ParamPair> matrix;
    std::vector<int> js;
    std::vector<int> mus;
    std::vector<ParamPair> partial_pairs;
    std::vector<double> partial_ts;
    std::vector<double> kernel_lambdas;
    std::vector<ParamPair> bottom_pairs;
    std::vector<double> gegenbauer_lambdas;
    if (name == "desk") {
        matrix = pairs_of({{0, 0}, {2, 0}, {4, 0}, {1, -1}, {3, -1}, {1, 1}, {3, 1}, {2, 2}, {4, 2}, {3, 3}});
        js = upto(4);
        mus = {1, 3, 5};
        partial_pairs = pairs_of({{0, 0}, {3, 1}});
        partial_ts = {-0.6, -0.3, 0.3, 0.6};
        kernel_lambdas = {0.5, 1.0, 1.5};
        bottom_pairs = pairs_of({{2, 0}, {4, 0}, {2, 2}, {4, 2}});
        gegenbauer_lambdas = {0.5, 1.0, 1.5};
    } else if (name == "quick") {
        matrix = pairs_of({{0, 0}, {1, -1}});
        js = upto(2);
        mus = {1};
        partial_pairs = pairs_of({{0, 0}});
        partial_ts = {-0.3, 0.3};
        kernel_lambdas = {0.5};
        bottom_pairs = pairs_of({{0, 0}});
        gegenbauer_lambdas = {0.5};
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected desk or quick)");
    }

    std::map<IdentityId, Plan> plans;
    for (auto id : {IdentityId::theorem_a, IdentityId::theorem_b, IdentityId::l1, IdentityId::l2_norm}) {
        plans[id].pairs = matrix;
        plans[id].js = js;
    }
    plans[IdentityId::corollary_c].mus = mus;
    plans[IdentityId::corollary_c].js = js;
    plans[IdentityId::corollary_c].grid = {4, 4, 0.0, 1.2};
    plans[IdentityId::generating_integral].pairs = matrix;
    plans[IdentityId::generating_integral].ts = {-0.5, 0.0, 0.3, 0.6};
    plans[IdentityId::gegenbauer_norm].js = upto(5);
    plans[IdentityId::gegenbauer_norm].lambdas = gegenbauer_lambdas;
    plans[IdentityId::poisson_partial].pairs = partial_pairs;
    plans[IdentityId::poisson_partial].ts = partial_ts;
    plans[IdentityId::poisson_partial].samples = partial_samples();
    plans[IdentityId::poisson_partial].order = 12;
    plans[IdentityId::poisson_kernel].lambdas = kernel_lambdas;
    plans[IdentityId::poisson_kernel].ts = {-0.3, 0.3};
    plans[IdentityId::poisson_kernel].samples = kernel_samples();
    plans[IdentityId::poisson_kernel].order = 14;
    plans[IdentityId::bottom_layer].pairs = bottom_pairs;
    plans[IdentityId::bottom_layer].grid = {4, 4, 0.1, 1.2};
    return plans;
}

}  // namespace quartic::cli
