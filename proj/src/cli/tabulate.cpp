#include <algorithm>
#include <cmath>
#include <sstream>

#include "quartic/cli.hpp"
#include "quartic/eigenfunction.hpp"
#include "quartic/report.hpp"

namespace quartic::cli {

std::string tabulate_csv(ParamPair p, SpectralIndex j, const std::vector<double>& xs, const ExtractionConfig& cfg) {
    const EigenfunctionSpec spec{p, j, cfg};
    const double lambda = params::eigenvalue(p, j);
    std::vector<FunctionJet> jets;
    double guard = 0.0;
    for (double x : xs) {
        jets.push_back(lambda_jet(spec, x));
        guard = std::max(guard, std::abs(jets.back().values[0]));
    }
    std::ostringstream out;
    out << "x,lambda,d1,d2,d3,d4,residual\n";
    for (const auto& jet : jets) {
        const double target = lambda * jet.values[0];
        const double residual = std::abs(apply_D(p, jet) - target) / (std::abs(target) + guard);
        out << format_number(jet.x);
        for (double v : jet.values) out << ',' << format_number(v);
        out << ',' << format_number(residual) << '\n';
    }
    return out.str();
}

}  // namespace quartic::cli
