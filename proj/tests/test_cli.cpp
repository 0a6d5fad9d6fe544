#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "quartic/cli.hpp"
#include "quartic/report.hpp"

using namespace quartic;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("quartic_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Outcome {
    int status;
    std::string out;
    std::string err;
};

Outcome run(const std::string& args, const fs::path& dir, const std::string& env = "") {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = env + " " + QUARTIC_CLI_PATH + std::string(" ") + args + " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

int lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("list parsing") {
    CHECK(cli::parse_int_list("0..2") == std::vector<int>{0, 1, 2});
    CHECK(cli::parse_int_list("3") == std::vector<int>{3});
    CHECK(cli::parse_int_list("0,2..3,-1") == std::vector<int>{0, 2, 3, -1});
    CHECK(cli::parse_double_list("-0.5,0,0.3") == std::vector<double>{-0.5, 0.0, 0.3});
    CHECK(cli::parse_grid("5x4") == std::pair<int, int>{5, 4});
    CHECK_THROWS_AS(cli::parse_int_list("2..1"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_int_list("a"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("5"), cli::ConfigError);
    CHECK_THROWS_AS(cli::parse_grid("0x5"), cli::ConfigError);
    CHECK(cli::parse_pairs("0:0,1:-1").size() == 2);
    try {
        cli::parse_pairs("2:1");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.clause() == ParamClause::parity);
    }
}

TEST_CASE("presets and expansion") {
    CHECK_THROWS_AS(cli::preset("huge"), cli::ConfigError);
    cli::RunConfig cfg;
    cfg.identities = all_identities();
    cfg.plans = cli::preset("desk");
    const auto items = cli::expand(cfg);
    // 10 pairs x 5 j for four identities, 3 x 5 Laguerre, 10 generating, 6 x 3 Gegenbauer,
    // 2 x 4 partial sums, 3 x 2 Poisson kernels, 4 bottom-layer.
    CHECK(items.size() == 4 * 50 + 15 + 10 + 18 + 8 + 6 + 4);

    cfg.plans = cli::preset("quick");
    cfg.identities = {IdentityId::theorem_a};
    CHECK(cli::expand(cfg).size() == 6);
}

TEST_CASE("execution order does not depend on the worker count") {
    cli::RunConfig cfg;
    cfg.identities = {IdentityId::l1, IdentityId::gegenbauer_norm, IdentityId::bottom_layer};
    cfg.plans = cli::preset("quick");
    const auto items = cli::expand(cfg);
    const auto serial = cli::execute(items, 1);
    const auto parallel = cli::execute(items, 3);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(report_to_json(serial[i]) == report_to_json(parallel[i]));
    CHECK(cli::report_stem(serial[0]) == "l1_mu0_nu0_j0");
}

TEST_CASE("per-sample CSV") {
    const auto r = verify_corollary_C(1, SpectralIndex(0), angle_grid(2, 2, 0.0, 1.0));
    const std::string csv = cli::samples_csv(r);
    CHECK(csv.rfind("label,theta,phi,lhs,rhs,rel_residual,error\n", 0) == 0);
    CHECK(lines(csv) == 1 + 8);
}

TEST_CASE("tabulate") {
    const auto csv = cli::tabulate_csv(ParamPair::validate(0, 0), SpectralIndex(0), {0.5, 1.0, 5.0});
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,lambda,d1,d2,d3,d4,residual");
    std::string row;
    for (double x : {0.5, 1.0, 5.0}) {
        std::getline(in, row);
        const double lambda = std::stod(row.substr(row.find(',') + 1));
        CHECK(lambda == doctest::Approx(std::cyl_bessel_k(0.0, x)).epsilon(1e-12));
    }
}

TEST_CASE("executable: verify") {
    Scratch s;
    const auto out = s.dir / "reports";
    const auto ok = run("verify theorem-a --mu 0 --nu 0 --j 0..2 --grid 5x5 --out " + out.string(), s.dir);
    CHECK(ok.status == 0);
    CHECK(ok.out.find("3/3 reports passed") != std::string::npos);
    CHECK(fs::exists(out / "theorem-a_mu0_nu0_j2.json"));
    CHECK(lines(slurp(out / "summary.csv")) == 4);

    const auto parity = run("verify theorem-a --mu 2 --nu 1", s.dir);
    CHECK(parity.status == 2);
    CHECK(parity.err.find("parity") != std::string::npos);

    CHECK(run("verify theorem-a --mu 0 --nu 0 --grid 5", s.dir).status == 2);
    CHECK(run("verify theorem-q", s.dir).status == 2);
    CHECK(run("verify l1 --preset quick --tol -1", s.dir).status == 2);
    CHECK(run("verify l1 --format xml", s.dir).status == 2);
    CHECK(run("", s.dir).status == 2);

    const auto strict = run("verify l1 --preset quick --tol 1e-300 --out " + (s.dir / "strict").string(), s.dir);
    CHECK(strict.status == 1);
    CHECK(strict.out.find("FAIL") != std::string::npos);

    const auto csv = run("verify corollary-c --mu 1 --nu -1 --j 0 --format csv --out " + (s.dir / "csv").string(), s.dir);
    CHECK(csv.status == 0);
    CHECK(fs::exists(s.dir / "csv" / "corollary-c_mu1_j0.csv"));
}

TEST_CASE("executable: reports are byte-identical across worker counts") {
    Scratch s;
    const std::string args = "verify all --preset quick --out ";
    REQUIRE(run(args + (s.dir / "one").string(), s.dir, "QUARTIC_WORKERS=1").status == 0);
    REQUIRE(run(args + (s.dir / "three").string(), s.dir, "QUARTIC_WORKERS=3").status == 0);
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(s.dir / "one")) {
        CHECK(slurp(entry.path()) == slurp(s.dir / "three" / entry.path().filename()));
        ++compared;
    }
    CHECK(compared > 10);
    CHECK(run("verify l1 --preset quick", s.dir, "QUARTIC_WORKERS=0").status == 2);
}

TEST_CASE("executable: config file, flags win") {
    Scratch s;
    const auto cfg = s.dir / "run.toml";
    std::ofstream(cfg) << "[verify]\nmu = \"3\"\nnu = \"1\"\nj = \"0..1\"\nout = \"" << (s.dir / "cfg").string() << "\"\n";
    const auto from_file = run("--config " + cfg.string() + " verify l1", s.dir);
    CHECK(from_file.status == 0);
    CHECK(from_file.out.find("2/2 reports passed") != std::string::npos);
    CHECK(fs::exists(s.dir / "cfg" / "l1_mu3_nu1_j1.json"));

    const auto overridden = run("--config " + cfg.string() + " verify l1 --j 4", s.dir);
    CHECK(overridden.out.find("1/1 reports passed") != std::string::npos);
    CHECK(fs::exists(s.dir / "cfg" / "l1_mu3_nu1_j4.json"));
}

TEST_CASE("executable: tabulate") {
    Scratch s;
    const auto k0 = run("tabulate --mu 0 --nu 0 --j 0 --x 0.5..5 --points 10", s.dir);
    CHECK(k0.status == 0);
    std::istringstream in(k0.out);
    std::string row;
    std::getline(in, row);
    CHECK(row == "x,lambda,d1,d2,d3,d4,residual");
    int count = 0;
    while (std::getline(in, row)) {
        const double x = std::stod(row);
        const double lambda = std::stod(row.substr(row.find(',') + 1));
        CHECK(lambda == doctest::Approx(std::cyl_bessel_k(0.0, x)).epsilon(1e-12));
        ++count;
    }
    CHECK(count == 10);

    const auto eig = run("tabulate --mu 3 --nu 1 --j 2 --x 0.5..10 --points 20", s.dir);
    std::istringstream rows(eig.out);
    std::getline(rows, row);
    while (std::getline(rows, row)) CHECK(std::stod(row.substr(row.rfind(',') + 1)) <= 1e-7);

    CHECK(run("tabulate --mu 1 --nu 0 --j 0", s.dir).status == 2);
    CHECK(run("tabulate --mu 0 --nu 0 --j 0 --x 0..5", s.dir).status == 2);
}

TEST_CASE("executable: report-merge") {
    Scratch s;
    const auto dir = s.dir / "reports";
    REQUIRE(run("verify gegenbauer-norm --preset quick --out " + dir.string(), s.dir).status == 0);
    const auto merged = run("report-merge " + dir.string(), s.dir);
    CHECK(merged.status == 0);
    CHECK(lines(merged.out) == 1 + 6);
    CHECK(merged.out == slurp(dir / "summary.csv"));

    const auto json = run("report-merge --format json " + dir.string(), s.dir);
    CHECK(json.out.front() == '[');

    REQUIRE(run("verify l1 --pair 0:0 --j 0 --tol 1e-300 --out " + dir.string(), s.dir).status == 1);
    CHECK(run("report-merge " + dir.string(), s.dir).status == 1);

    std::ofstream(s.dir / "broken.json") << "{";
    CHECK(run("report-merge " + (s.dir / "broken.json").string(), s.dir).status == 2);
    CHECK(run("report-merge " + (s.dir / "missing").string(), s.dir).status == 2);
}
