#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "imspe/app.hpp"
#include "imspe/cluster.hpp"
#include "imspe/format.hpp"
#include "imspe/imspe.hpp"
#include "imspe/optimize.hpp"

using namespace imspe;
using nlohmann::json;

namespace {

CommandResult run(std::vector<std::string> a) { return run_cli(a); }

json run_json(std::vector<std::string> a) {
    const CommandResult r = run(std::move(a));
    REQUIRE(r.exit_code == kExitOk);
    return json::parse(r.out);
}

}  // namespace

TEST_CASE("fmt17") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(1.0) == "1");
    CHECK(fmt17(NAN) == "singular");
    CHECK(fmt17(INFINITY) == "singular");
    for (double v : {2 * std::exp(-1.0), 1e-300, -3.25e17, 4.7983938299522855e-05}) CHECK(std::stod(fmt17(v)) == v);
}

TEST_CASE("dump_json") {
    nlohmann::ordered_json j;
    j["b"] = 1.5;
    j["a"] = std::vector<double>{1, 2};
    j["bad"] = NAN;
    const std::string s = dump_json(j);
    CHECK(s.find("\"b\"") < s.find("\"a\""));
    CHECK(s.find("[1, 2]") != std::string::npos);
    CHECK(s.find("\"singular\"") != std::string::npos);
    CHECK(s.find("nan") == std::string::npos);
}

TEST_CASE("scan_csv") {
    ScanTable t{{"x1", "x2"}, {{{0.5, -0.5}, 0.25}, {{0.0, 0.0}, std::nullopt}}};
    CHECK(scan_csv(t) == "# imspe-kit scan v1\nx1,x2,imspe\n0.5,-0.5,0.25\n0,0,singular\n");
}

TEST_CASE("eval") {
    const json j = run_json({"eval", "--kernel", "exp-p1", "--theta", "1", "--points", "0"});
    CHECK(j["imspe"].get<double>() == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(j["n"] == 1);
    CHECK(j["d"] == 1);
    CHECK(j["kernel"] == "exp-p1");
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    const auto ordered = nlohmann::ordered_json::parse(run({"eval", "--kernel", "exp-p1", "--theta", "1", "--points", "0"}).out);
    std::vector<std::string> okeys;
    for (auto it = ordered.begin(); it != ordered.end(); ++it) okeys.push_back(it.key());
    CHECK(okeys == std::vector<std::string>{"imspe", "n", "d", "kernel", "theta", "points", "condition_estimate", "precision"});
}

TEST_CASE("eval parity with the library") {
    const json j = run_json({"eval", "--kernel", "gauss-p2", "--theta", "0.064,0.00016", "--points",
                             "0.767117,0;-0.767117,0;0.3,0.2;-0.3,-0.2"});
    const KernelSpec k = make_kernel(Family::GaussP2, {0.064, 0.00016});
    const Design d = make_design(2, {{0.767117, 0}, {-0.767117, 0}, {0.3, 0.2}, {-0.3, -0.2}});
    const ImspeMatrices m = build_matrices(k, d);
    CHECK(j["imspe"].get<double>() == m.imspe);
    CHECK(j["condition_estimate"].get<double>() == m.condition_estimate);

    const json e = run_json({"eval", "--kernel", "gauss-p2", "--theta", "0.064,0.00016", "--points",
                             "0.767117,0;-0.767117,0;0.3,0.2;-0.3,-0.2", "--extended"});
    CHECK(e["imspe"].get<double>() == imspe_value(k, d, Precision::Extended));
}

TEST_CASE("exit codes") {
    const CommandResult c = run({"eval", "--kernel", "exp-p1", "--theta", "1", "--points", "0.2;0.2"});
    CHECK(c.exit_code == kExitSingular);
    CHECK(c.err.find("0 and 1") != std::string::npos);
    CHECK(run({"eval", "--kernel", "nope", "--theta", "1", "--points", "0"}).exit_code == kExitUsage);
    CHECK(run({"eval", "--kernel", "exp-p1", "--theta", "1", "--points", "2"}).exit_code == kExitUsage);
    CHECK(run({"eval", "--kernel", "exp-p1", "--theta", "1,2", "--points", "0"}).exit_code == kExitUsage);
    CHECK(run({"frobnicate"}).exit_code == kExitUsage);
    CHECK(run({}).exit_code == kExitUsage);
    CHECK(run({"eval", "--kernel", "exp-p1"}).exit_code == kExitUsage);
    CHECK(run({"sweep", "--kernel", "exp-p1", "--theta-grid", "1:2:3"}).exit_code == kExitUsage);
    CHECK(run({"--help"}).exit_code == kExitOk);
}

TEST_CASE("optimize") {
    const json j = run_json({"optimize", "--kernel", "gauss-p2", "--theta", "1", "--n", "2"});
    const OptimumReport r = optimize_n2(Family::GaussP2, 1);
    CHECK(j["imspe"].get<double>() == r.imspe_value);
}

TEST_CASE("expand") {
    const json j = run_json({"expand", "--theta", "1", "--xt", "0"});
    CHECK(j["c2"].get<double>() < 0);
    CHECK(j["c2"].get<double>() == expansion_gauss(0, 1).c2);
    CHECK(j["st_term"].get<double>() == st_term(1));
    CHECK(j["c0"].get<double>() == expansion_gauss(0, 1).c0);
}

TEST_CASE("sweep envelope, Gaussian pair") {
    const CommandResult r = run({"sweep", "--kernel", "gauss-p2", "--n", "2", "--theta-grid", "0.01:100:25log", "--threads", "8"});
    REQUIRE(r.exit_code == kExitOk);
    const auto pos = r.out.find("# envelope\nx1_min,x1_max\n");
    REQUIRE(pos != std::string::npos);
    std::istringstream tail(r.out.substr(pos + 25));
    std::string lo, hi;
    std::getline(tail, lo, ',');
    std::getline(tail, hi);
    CHECK(std::abs(std::stod(lo) - 0.42) <= 0.01);
    CHECK(std::abs(std::stod(hi) - 0.58) <= 0.01);
}

TEST_CASE("scan") {
    const CommandResult r = run({"scan", "--kernel", "exp-p1", "--theta", "1", "--n", "1", "--grid", "-1:1:5"});
    REQUIRE(r.exit_code == kExitOk);
    const ScanTable t = scan_surface(Family::ExpP1, 1, 1, -1, 1, 5);
    CHECK(r.out == scan_csv(t));
    const json j = run_json({"scan", "--kernel", "exp-p1", "--theta", "1", "--n", "2", "--grid", "-1:1:3", "--format", "json"});
    CHECK(j["rows"].size() == 9);
    CHECK(j["rows"][0][2] == "singular");
    CHECK(run({"scan", "--scenario", "fig2", "--slice"}).exit_code == kExitUsage);
}

TEST_CASE("probe") {
    const json j = run_json({"probe", "--center", "0,0"});
    CHECK(j["direction_dependent"] == true);
    const ProbeReport p = discontinuity_probe(figure_one_scenario(), {0, 0}, {{1, 0}, {0, 1}},
                                              {0.1, 0.01, 0.001, 0.0001, 0.00001});
    CHECK(j["max_gap"].get<double>() == p.max_gap);
    CHECK(run({"probe", "--directions", "1,1"}).exit_code == kExitUsage);
}

TEST_CASE("validate") {
    const CommandResult r = run({"validate", "--quick", "--threads", "4"});
    CHECK(r.exit_code == kExitOk);
    CHECK(r.out.find("all within tolerance") != std::string::npos);
    const json j = run_json({"validate", "--samples", "5", "--format", "json"});
    CHECK(j["rows"].size() == 20);
    CHECK(j["pass"] == true);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "imspe_cli_test_out.json";
    const CommandResult r = run({"expand", "--theta", "2", "--xt", "0.1", "-o", path.string()});
    CHECK(r.exit_code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == run({"expand", "--theta", "2", "--xt", "0.1"}).out);
    std::filesystem::remove(path);
}

TEST_CASE("determinism") {
    const std::vector<std::string> scan{"scan", "--kernel", "matern-5-2", "--theta", "3", "--n", "2", "--grid", "-1:1:21"};
    auto s1 = scan, s8 = scan;
    s1.insert(s1.end(), {"--threads", "1"});
    s8.insert(s8.end(), {"--threads", "8"});
    CHECK(run(s1).out == run(s8).out);
    CHECK(run(s8).out == run(s8).out);
    CHECK(run({"validate", "--samples", "20", "--threads", "1"}).out == run({"validate", "--samples", "20", "--threads", "8"}).out);
}

TEST_CASE("csv for optimize and probe") {
    auto r = run({"optimize", "--kernel", "exp-p1", "--theta", "1", "--n", "1", "--format", "csv"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("# imspe-kit optimize v1\ntheta,x1,imspe,", 0) == 0);
    r = run({"probe", "--format", "csv", "--steps", "0.01,0.001,0.0001"});
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("# imspe-kit probe v1\ndirection,h=0.01,h=0.001,h=0.0001,limit,residual\n", 0) == 0);
    CHECK(r.out.substr(r.out.size() - 5) == "true\n");
}
