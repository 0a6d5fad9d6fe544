#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "quartic/cli.hpp"
#include "quartic/report.hpp"

namespace quartic::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

int to_int(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("expected an integer, got '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("expected an integer, got '" + s + "'");
    return v;
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + s + "'");
    }
    if (used != s.size()) throw ConfigError("expected a number, got '" + s + "'");
    return v;
}

std::string compact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<AngleSample> grid_of(const Plan& plan) { return plan.grid.build(); }

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        const auto dots = part.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(part));
            continue;
        }
        const int lo = to_int(part.substr(0, dots));
        const int hi = to_int(part.substr(dots + 2));
        if (hi < lo) throw ConfigError("empty range '" + part + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(to_double(part));
    if (out.empty()) throw ConfigError("empty list '" + text + "'");
    return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw ConfigError("grid must look like 5x5, got '" + text + "'");
    const int n = to_int(text.substr(0, x));
    const int m = to_int(text.substr(x + 1));
    if (n < 1 || m < 1) throw ConfigError("grid counts must be >= 1");
    return {n, m};
}

std::vector<ParamPair> parse_pairs(const std::string& text) {
    std::vector<ParamPair> out;
    for (const auto& part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw ConfigError("pair must look like mu:nu, got '" + part + "'");
        out.push_back(ParamPair::validate(to_int(part.substr(0, colon)), to_int(part.substr(colon + 1))));
    }
    if (out.empty()) throw ConfigError("empty pair list");
    return out;
}

int worker_count() {
    if (const char* env = std::getenv("QUARTIC_WORKERS")) {
        const int n = to_int(env);
        if (n < 1) throw ConfigError("QUARTIC_WORKERS must be >= 1");
        return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string report_stem(const VerificationReport& r) {
    std::string stem = to_string(r.identity);
    for (const auto& [k, v] : r.params) stem += "_" + k + compact(v);
    if (r.j) stem += "_j" + std::to_string(*r.j);
    return stem;
}

std::string samples_csv(const VerificationReport& r) {
    std::ostringstream out;
    std::vector<std::string> keys;
    for (const auto& s : r.samples)
        for (const auto& kv : s.point)
            if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) keys.push_back(kv.first);
    out << "label";
    for (const auto& k : keys) out << ',' << k;
    out << ",lhs,rhs,rel_residual,error\n";
    for (const auto& s : r.samples) {
        out << s.label;
        for (const auto& k : keys) {
            out << ',';
            for (const auto& kv : s.point)
                if (kv.first == k) out << format_number(kv.second);
        }
        out << ',' << format_number(s.lhs) << ',' << format_number(s.rhs) << ',' << format_number(s.rel_residual) << ',';
        if (s.error) {
            std::string e = *s.error;
            std::replace(e.begin(), e.end(), ',', ';');
            std::replace(e.begin(), e.end(), '\n', ' ');
            out << e;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<WorkItem> expand(const RunConfig& cfg) {
    VerifyOptions opt;
    opt.tolerance = cfg.tolerance;
    std::vector<WorkItem> items;
    for (auto id : cfg.identities) {
        const auto found = cfg.plans.find(id);
        if (found == cfg.plans.end()) continue;
        const Plan& plan = found->second;
        auto add = [&](std::function<VerificationReport()> f) { items.push_back({id, std::move(f)}); };
        switch (id) {
            case IdentityId::theorem_a: {
                const auto grid = grid_of(plan);
                for (auto p : plan.pairs)
                    for (int j : plan.js) add([=] { return verify_theorem_A(p, SpectralIndex(j), grid, opt); });
                break;
            }
            case IdentityId::theorem_b:
                for (auto p : plan.pairs)
                    for (int j : plan.js) add([=] { return verify_theorem_B(p, SpectralIndex(j), opt); });
                break;
            case IdentityId::corollary_c: {
                const auto grid = grid_of(plan);
                for (int mu : plan.mus)
                    for (int j : plan.js) add([=] { return verify_corollary_C(mu, SpectralIndex(j), grid, opt); });
                break;
            }
            case IdentityId::generating_integral:
                for (auto p : plan.pairs) add([=] { return verify_generating_integral(p, plan.ts, opt); });
                break;
            case IdentityId::l1:
                for (auto p : plan.pairs)
                    for (int j : plan.js) add([=] { return verify_l1(p, SpectralIndex(j), opt); });
                break;
            case IdentityId::l2_norm:
                for (auto p : plan.pairs)
                    for (int j : plan.js) add([=] { return verify_l2_norm(p, SpectralIndex(j), opt); });
                break;
            case IdentityId::gegenbauer_norm:
                for (int n : plan.js)
                    for (double lambda : plan.lambdas) add([=] { return verify_gegenbauer_norm(n, lambda, opt); });
                break;
            case IdentityId::poisson_partial:
                for (auto p : plan.pairs)
                    for (double t : plan.ts)
                        add([=] { return verify_poisson_partial(p, t, plan.samples, plan.order, opt); });
                break;
            case IdentityId::poisson_kernel:
                for (double lambda : plan.lambdas)
                    for (double t : plan.ts)
                        add([=] { return verify_poisson_kernel(lambda, t, plan.samples, plan.order, opt); });
                break;
            case IdentityId::bottom_layer: {
                const auto grid = grid_of(plan);
                for (auto p : plan.pairs)
                    if (p.nu() > -1) add([=] { return verify_bottom_layer(p, grid, opt); });
                break;
            }
        }
    }
    return items;
}

std::vector<VerificationReport> execute(const std::vector<WorkItem>& items, int workers) {
    std::vector<VerificationReport> reports(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            try {
                reports[i] = items[i].run();
            } catch (const std::exception& e) {
                VerificationReport failed;
                failed.identity = items[i].identity;
                Sample s;
                s.rel_residual = std::numeric_limits<double>::infinity();
                s.error = e.what();
                failed.samples.push_back(s);
                failed.finalize();
                reports[i] = failed;
            }
        }
    };
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(items.size())));
    std::vector<std::jthread> pool;
    for (int k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    return reports;
}

namespace {

struct VerifyFlags {
    std::string identity;
    std::string preset = "desk";
    std::string mu, nu, pairs, js, grid, angles, ts, lambdas;
    int order = 0;
    double tol = 0.0;
    std::string out = "reports";
    std::string format = "json";
};

RunConfig build_config(const VerifyFlags& f, const CLI::App& cmd) {
    RunConfig cfg;
    if (f.identity == "all") {
        cfg.identities = all_identities();
    } else {
        try {
            cfg.identities = {identity_from_string(f.identity)};
        } catch (const DomainError& e) {
            throw ConfigError(std::string(e.what()) + "; expected one of theorem-a, theorem-b, corollary-c, "
                              "generating-integral, l1, l2-norm, gegenbauer-norm, poisson-partial, poisson-kernel, "
                              "bottom-layer, all");
        }
    }
    cfg.plans = preset(f.preset);
    cfg.out_dir = f.out;
    cfg.format = f.format;
    if (cmd.count("--tol")) {
        if (!(f.tol > 0.0)) throw ConfigError("--tol must be > 0");
        cfg.tolerance = f.tol;
    }

    std::optional<std::vector<ParamPair>> pairs;
    if (cmd.count("--pair")) pairs = parse_pairs(f.pairs);
    if (cmd.count("--mu") || cmd.count("--nu")) {
        if (!cmd.count("--mu") || !cmd.count("--nu")) throw ConfigError("--mu and --nu must be given together");
        if (pairs) throw ConfigError("--pair cannot be combined with --mu/--nu");
        pairs.emplace();
        for (int mu : parse_int_list(f.mu))
            for (int nu : parse_int_list(f.nu)) pairs->push_back(ParamPair::validate(mu, nu));
    }
    std::optional<std::vector<int>> js;
    if (cmd.count("--j")) {
        js = parse_int_list(f.js);
        for (int j : *js)
            if (j < 0) throw ConfigError("--j values must be >= 0");
    }
    std::optional<std::pair<int, int>> counts;
    if (cmd.count("--grid")) counts = parse_grid(f.grid);
    std::optional<std::vector<double>> angles;
    if (cmd.count("--angles")) {
        angles = parse_double_list(f.angles);
        if (angles->size() != 2 || !((*angles)[1] >= (*angles)[0])) throw ConfigError("--angles must be lo,hi with lo <= hi");
    }
    std::optional<std::vector<double>> ts;
    if (cmd.count("--t")) ts = parse_double_list(f.ts);
    std::optional<std::vector<double>> lambdas;
    if (cmd.count("--lambda")) lambdas = parse_double_list(f.lambdas);

    for (auto& [id, plan] : cfg.plans) {
        if (pairs) {
            plan.pairs = *pairs;
            std::set<int> odd;
            for (auto p : *pairs)
                if (p.mu() % 2 != 0) odd.insert(p.mu());
            if (id == IdentityId::corollary_c) plan.mus.assign(odd.begin(), odd.end());
        }
        if (js) plan.js = *js;
        if (counts) {
            plan.grid.n_theta = counts->first;
            plan.grid.n_phi = counts->second;
        }
        if (angles) {
            plan.grid.lo = (*angles)[0];
            plan.grid.hi = (*angles)[1];
        }
        if (ts) plan.ts = *ts;
        if (lambdas) plan.lambdas = *lambdas;
        if (cmd.count("--order")) {
            if (f.order < 1) throw ConfigError("--order must be >= 1");
            plan.order = f.order;
        }
    }
    return cfg;
}

int run_verify(const VerifyFlags& flags, const CLI::App& cmd) {
    const RunConfig cfg = build_config(flags, cmd);
    std::vector<WorkItem> items;
    try {
        items = expand(cfg);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (items.empty()) throw ConfigError("the selection expands to no work items");
    const auto reports = execute(items, worker_count());

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    for (const auto& r : reports) {
        const bool json = cfg.format == "json";
        std::ofstream out(fs::path(cfg.out_dir) / (report_stem(r) + (json ? ".json" : ".csv")));
        out << (json ? report_to_json(r) : samples_csv(r));
    }
    std::ofstream(fs::path(cfg.out_dir) / "summary.csv") << summary_csv(reports);

    int passed = 0;
    for (const auto& r : reports) {
        passed += r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << report_stem(r)
                  << " max_rel_residual=" << format_number(r.max_rel_residual)
                  << " tolerance=" << format_number(r.tolerance) << '\n';
    }
    std::cout << passed << '/' << reports.size() << " reports passed\n";
    return passed == static_cast<int>(reports.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenfunctions of the fourth-order operator D_{mu,nu} and verification of their integral identities"};
    app.set_config("--config", "", "TOML/INI file of option values; command-line flags win");
    app.require_subcommand(1);

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "Verify an identity (or all) and write reports");
    verify->add_option("identity", vf.identity, "Identity name or 'all'")->required();
    verify->add_option("--preset", vf.preset, "desk (acceptance matrix) or quick")->capture_default_str();
    verify->add_option("--mu", vf.mu, "mu values, e.g. 0,2 or 0..4 (product with --nu)");
    verify->add_option("--nu", vf.nu, "nu values");
    verify->add_option("--pair", vf.pairs, "explicit pairs, e.g. 0:0,1:-1");
    verify->add_option("--j", vf.js, "spectral indices (Gegenbauer degrees for gegenbauer-norm), e.g. 0..2");
    verify->add_option("--grid", vf.grid, "angle grid counts, e.g. 5x5");
    verify->add_option("--angles", vf.angles, "angle grid bounds lo,hi");
    verify->add_option("--t", vf.ts, "t values, e.g. -0.3,0.3");
    verify->add_option("--lambda", vf.lambdas, "Gegenbauer lambdas, e.g. 0.5,1");
    verify->add_option("--order", vf.order, "j_max (poisson-partial) or n_max (poisson-kernel)");
    verify->add_option("--tol", vf.tol, "override every report tolerance");
    verify->add_option("--out", vf.out, "output directory")->capture_default_str();
    verify->add_option("--format", vf.format, "per-report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    int t_mu = 0;
    int t_nu = 0;
    int t_j = 0;
    std::string t_x = "0.5..5";
    int t_points = 10;
    std::string t_out;
    std::string t_method = "automatic";
    auto* tab = app.add_subcommand("tabulate", "Tabulate Lambda_j, its derivatives and the eigen-equation residual");
    tab->add_option("--mu", t_mu)->required();
    tab->add_option("--nu", t_nu)->required();
    tab->add_option("--j", t_j)->required();
    tab->add_option("--x", t_x, "x range lo..hi")->capture_default_str();
    tab->add_option("--points", t_points, "number of equally spaced points")->capture_default_str();
    tab->add_option("--out", t_out, "output file (default: stdout)");
    tab->add_option("--method", t_method, "coefficient extraction")
        ->check(CLI::IsMember({"automatic", "taylor", "contour"}))
        ->capture_default_str();

    std::vector<std::string> m_inputs;
    std::string m_out;
    std::string m_format = "csv";
    auto* merge = app.add_subcommand("report-merge", "Merge JSON reports into one summary");
    merge->add_option("reports", m_inputs, "report files or directories")->required();
    merge->add_option("--out", m_out, "output file (default: stdout)");
    merge->add_option("--format", m_format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*verify) return run_verify(vf, *verify);

        if (*tab) {
            const auto p = ParamPair::validate(t_mu, t_nu);
            if (t_j < 0) throw ConfigError("--j must be >= 0");
            const auto dots = t_x.find("..");
            if (dots == std::string::npos) throw ConfigError("--x must look like lo..hi");
            const double lo = std::stod(t_x.substr(0, dots));
            const double hi = std::stod(t_x.substr(dots + 2));
            if (!(lo > 0.0 && hi >= lo) || t_points < 1) throw ConfigError("--x needs 0 < lo <= hi and --points >= 1");
            std::vector<double> xs;
            for (int i = 0; i < t_points; ++i) xs.push_back(t_points == 1 ? lo : lo + (hi - lo) * i / (t_points - 1));
            ExtractionConfig ec;
            ec.method = t_method == "taylor"    ? ExtractionMethod::taylor
                        : t_method == "contour" ? ExtractionMethod::contour
                                                : ExtractionMethod::automatic;
            std::string csv;
            try {
                csv = tabulate_csv(p, SpectralIndex(t_j), xs, ec);
            } catch (const AccuracyError& e) {
                std::cerr << "error: " << e.what() << '\n';
                return 1;
            }
            if (t_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream(t_out) << csv;
            }
            return 0;
        }

        const auto merged = merge_reports(m_inputs);
        std::string text;
        if (m_format == "csv") {
            text = summary_csv(merged.reports);
        } else {
            text = "[\n";
            for (std::size_t i = 0; i < merged.reports.size(); ++i) {
                std::string one = report_to_json(merged.reports[i]);
                one.pop_back();
                text += one + (i + 1 < merged.reports.size() ? ",\n" : "\n");
            }
            text += "]\n";
        }
        if (m_out.empty()) {
            std::cout << text;
        } else {
            std::ofstream(m_out) << text;
        }
        return merged.all_passed ? 0 : 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid number: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace quartic::cli
