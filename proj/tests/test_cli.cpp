// End-to-end checks of the command-line surface: subcommands, flags, exit
// codes and output determinism, driving the real binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "fsilab/csv.hpp"

using namespace fsilab;

namespace {

std::filesystem::path tmp(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FSILAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

const std::string kCfg = std::string("--config ") + FSILAB_BENCHMARK_CFG;

} // namespace

TEST_CASE("eigs: values, comments, determinism") {
    auto out1 = tmp("cli_eigs1.csv"), out2 = tmp("cli_eigs2.csv");
    REQUIRE(run_cli("eigs " + kCfg + " --modes 8 --out " + out1.string()) == 0);
    REQUIRE(run_cli("eigs " + kCfg + " --modes 8 --out " + out2.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));

    auto doc = parse_csv(out1.string());
    REQUIRE(doc.rows.size() == 8);
    CHECK(doc.columns == std::vector<std::string>{"j", "mu_j", "lambda_j", "ell_j"});
    CHECK(doc.rows[0][1] == doctest::Approx(7.46).epsilon(0.002));

    bool has_mu_max = false, has_critical = false, has_ratio = false;
    for (const auto& c : doc.comments) {
        has_mu_max |= c.find("mu_max") != std::string::npos;
        has_critical |= c.find("critical_rho_s") != std::string::npos;
        has_ratio |= c.find("dn_ratio") != std::string::npos;
    }
    CHECK(has_mu_max);
    CHECK(has_critical);
    CHECK(has_ratio);
}

TEST_CASE("simulate: schemes and the strict exit code") {
    auto out = tmp("cli_sim.csv");
    CHECK(run_cli("simulate " + kCfg + " --scheme beta --modes 8 --t-end 0.006 --out " + out.string()) ==
          0);
    auto doc = parse_csv(out.string());
    CHECK(doc.columns == std::vector<std::string>{"t", "eta_mid", "eta_maxmode", "p_mid", "u_mid",
                                                  "diverged_flag"});
    CHECK(doc.rows.size() == 61);

    // dn at dt = 1e-5 trips the overflow guard; --strict maps that to exit 2
    CHECK(run_cli("simulate " + kCfg + " --scheme dn --modes 8 --dt 1e-5 --t-end 0.012 --strict --out " +
                  tmp("cli_dn.csv").string()) == 2);
    CHECK(run_cli("simulate " + kCfg + " --scheme dn --modes 8 --dt 1e-5 --t-end 0.012 --out " +
                  tmp("cli_dn2.csv").string()) == 0);

    CHECK(run_cli("simulate " + kCfg + " --scheme monolithic --modes 8 --dt 1e-4 --t-end 0.005 --out " +
                  tmp("cli_mono.csv").string()) == 0);
}

TEST_CASE("simulate: plot companion files") {
    auto out = tmp("cli_plot.csv"), plot = tmp("cli_plot.dat");
    REQUIRE(run_cli("simulate " + kCfg + " --scheme beta --modes 4 --t-end 0.002 --out " + out.string() +
                    " --plot " + plot.string()) == 0);
    CHECK(std::filesystem::exists(plot));
    CHECK(std::filesystem::exists(plot.string() + ".gp"));
    CHECK(slurp(plot.string() + ".gp").find("eta_mid") != std::string::npos);
}

TEST_CASE("usage and config failures exit 1") {
    CHECK(run_cli("eigs --config /nonexistent.cfg") == 1);
    CHECK(run_cli("nonsense") == 1);
    CHECK(run_cli("sweep " + kCfg) == 1); // missing required flags
    CHECK(run_cli("--help") == 0);

    SUBCASE("validation failure leaves no partial output file") {
        auto out = tmp("cli_rejected.csv");
        std::filesystem::remove(out);
        CHECK(run_cli("simulate " + kCfg + " --beta 1.5 --out " + out.string()) == 1);
        CHECK(!std::filesystem::exists(out));
    }
}

TEST_CASE("sweep: verdict columns and strict mode") {
    auto out = tmp("cli_sweep.csv");
    REQUIRE(run_cli("sweep " + kCfg +
                    " --scheme dn --vary rho_s --from 50 --to 100 --points 11 --modes 8 --out " +
                    out.string()) == 0);
    auto doc = parse_csv(out.string());
    REQUIRE(doc.rows.size() == 11);
    bool any_unstable = false, any_stable = false;
    for (const auto& r : doc.rows) {
        any_unstable |= r[3] == 0.0;
        any_stable |= r[3] == 1.0;
    }
    CHECK(any_unstable);
    CHECK(any_stable);
    CHECK(run_cli("sweep " + kCfg +
                  " --scheme dn --vary rho_s --from 50 --to 100 --points 11 --modes 8 --strict --out " +
                  out.string()) == 2);
}

TEST_CASE("theta-region and converge emit tables") {
    auto region = tmp("cli_region.csv");
    REQUIRE(run_cli("theta-region " + kCfg +
                    " --theta-points 3 --dt-points 4 --modes 4 --out " + region.string()) == 0);
    CHECK(parse_csv(region.string()).rows.size() == 12);

    auto conv = tmp("cli_conv.csv");
    REQUIRE(run_cli("converge " + kCfg +
                    " --scheme beta --modes 4 --dts 2e-4,1e-4 --t-eval 0.002 --out " + conv.string()) ==
            0);
    auto doc = parse_csv(conv.string());
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.columns[0] == "dt");
}

TEST_CASE("validate-pressure emits grid errors and orders") {
    auto out = tmp("cli_vp.csv");
    REQUIRE(run_cli("validate-pressure " + kCfg + " --grids 17,33 --out " + out.string()) == 0);
    auto doc = parse_csv(out.string());
    REQUIRE(doc.rows.size() == 2);
    CHECK(doc.rows[1][2] == doctest::Approx(2.0).epsilon(0.25)); // observed order
}
