#pragma once

// The `quartic` command line: verify, tabulate, report-merge.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quartic/identities.hpp"
#include "quartic/params.hpp"

namespace quartic::cli {

/// Configuration problems (bad flag values, invalid parameter pairs); exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    int n_theta = 5;
    int n_phi = 5;
    double lo = 0.0;
    double hi = 1.2;

    std::vector<AngleSample> build() const { return angle_grid(n_theta, n_phi, lo, hi); }
};

/// What one identity runs over. Fields an identity does not use are ignored.
struct Plan {
    std::vector<ParamPair> pairs;
    std::vector<int> js;        // spectral indices; Gegenbauer degrees n for gegenbauer-norm
    std::vector<int> mus;       // corollary-c
    std::vector<double> ts;
    std::vector<double> lambdas;
    GridSpec grid;
    std::vector<AngleSample> samples;  // poisson-partial, poisson-kernel
    int order = 12;                    // j_max or n_max
};

struct RunConfig {
    std::vector<IdentityId> identities;
    std::map<IdentityId, Plan> plans;
    std::optional<double> tolerance;
    std::string out_dir = "reports";
    std::string format = "json";
};

/// "desk" (the full acceptance matrix) or "quick" ((0,0), (1,-1), j <= 2). Throws ConfigError otherwise.
std::map<IdentityId, Plan> preset(const std::string& name);

struct WorkItem {
    IdentityId identity;
    std::function<VerificationReport()> run;
};

/// The parameter product of every selected identity, in a fixed order.
std::vector<WorkItem> expand(const RunConfig& cfg);

/// Runs items on up to `workers` threads; the result order matches the input order.
std::vector<VerificationReport> execute(const std::vector<WorkItem>& items, int workers);

/// QUARTIC_WORKERS if set (>= 1), else the hardware concurrency.
int worker_count();

/// File stem of a report, e.g. "theorem-a_mu0_nu0_j2".
std::string report_stem(const VerificationReport& r);

/// Per-sample CSV: label,<point keys>,lhs,rhs,rel_residual,error.
std::string samples_csv(const VerificationReport& r);

/// "3", "0..4", "0,2,5" (ranges inclusive).
std::vector<int> parse_int_list(const std::string& text);
std::vector<double> parse_double_list(const std::string& text);
/// "5x5" -> (5, 5).
std::pair<int, int> parse_grid(const std::string& text);
/// "0:0,1:-1"; each pair is validated (ValidationError names the violated clause).
std::vector<ParamPair> parse_pairs(const std::string& text);

/// CSV with header "x,lambda,d1,d2,d3,d4,residual", 17 significant digits.
/// The residual column is |D u - lambda u| / (|lambda u| + max |u| over the rows).
std::string tabulate_csv(ParamPair p, SpectralIndex j, const std::vector<double>& xs, const ExtractionConfig& cfg = {});

struct MergeResult {
    std::vector<VerificationReport> reports;
    bool all_passed = false;
};

/// Reads report files (or every *.json in a directory), sorted by path.
MergeResult merge_reports(const std::vector<std::string>& paths);

/// Entry point of the executable; returns the process exit status.
int main(int argc, char** argv);

}  // namespace quartic::cli
