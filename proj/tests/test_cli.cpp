#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "resolute/cli.hpp"
#include "resolute/io.hpp"

using namespace resolute;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace

TEST_SUITE("cli-io.commands") {

TEST_CASE("unknown subcommand is a usage error") {
    CHECK(run_command({"frobnicate"}) == 1);
    CHECK(run_command({}) == 1);
}

TEST_CASE("simulate twice with the same seed is byte-identical") {
    const std::string cfg_path = "/tmp/resolute_cli_sim.cfg";
    spit(cfg_path,
         "[sequence]\ntau_us = 4\ntcorr_us = 30\nn_reps = 60\n"
         "[sensor]\nt1_us = 900\nt2p_us = 100\nt2_us = 90\nt2star_us = 1\n"
         "[tone]\namp_rad_per_us = 0.3\nfreq_khz = 70\n"
         "[sweep]\naxis = tcorr\nstart_us = 10\nstop_us = 60\nn_points = 9\n");
    const std::string out1 = "/tmp/resolute_cli_a.csv";
    const std::string out2 = "/tmp/resolute_cli_b.csv";
    CHECK(run_command({"simulate", "--config", cfg_path, "--seed", "7", "--out", out1}) == 0);
    CHECK(run_command({"simulate", "--config", cfg_path, "--seed", "7", "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(run_command({"simulate", "--config", cfg_path, "--seed", "8", "--out", out2}) == 0);
    CHECK(slurp(out1) != slurp(out2));
    // the output is self-describing: re-parse the embedded config
    const Trace t = load_trace(out1);
    CHECK(t.config_echo.find("tau_us = 4") != std::string::npos);
    CHECK(t.seed == 7);
    std::remove(cfg_path.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("compare emits the agreed csv columns") {
    const std::string out = "/tmp/resolute_cli_fi.csv";
    CHECK(run_command({"compare", "--fmin-khz", "10", "--fmax-khz", "100", "--fpoints", "4",
                       "--out", out}) == 0);
    const std::string csv = slurp(out);
    CHECK(csv.find("freq_khz,fi_resolute,fi_hahn,fi_ramsey,feasible") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("fisher reports exact, approx and their ratio") {
    const std::string out = "/tmp/resolute_cli_fisher.json";
    CHECK(run_command({"fisher", "--omega-khz", "50", "--tau-us", "5", "--tcorr-us", "100",
                       "--out", out}) == 0);
    const std::string json = slurp(out);
    CHECK(json.find("\"exact\"") != std::string::npos);
    CHECK(json.find("\"approx\"") != std::string::npos);
    CHECK(json.find("\"ratio\"") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("phase oracle check runs from flags") {
    const std::string cfg_path = "/tmp/resolute_cli_phase.cfg";
    spit(cfg_path, "[tone]\namp_rad_per_us = 1\nfreq_khz = 68.8\n[sequence]\ntau_us = 5\ntcorr_us = 40\n");
    const std::string out = "/tmp/resolute_cli_phase.json";
    CHECK(run_command({"phase", "--config", cfg_path, "--protocol", "resolute", "--channel",
                       "sum", "--phi-rad", "0.7", "--out", out}) == 0);
    const std::string json = slurp(out);
    CHECK(json.find("\"rel_error\"") != std::string::npos);
    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("computation errors exit with code 2") {
    const std::string cfg_path = "/tmp/resolute_cli_bad.cfg";
    spit(cfg_path, "[sensor]\ncontrast = 0\n");
    CHECK(run_command({"simulate", "--config", cfg_path, "--out", "/tmp/never.csv"}) == 2);
    std::remove(cfg_path.c_str());
}

TEST_CASE("out dir environment variable applies to bare filenames") {
    setenv("RESOLUTE_OUT_DIR", "/tmp", 1);
    CHECK(run_command({"fisher", "--omega-khz", "30", "--out", "resolute_envtest.json"}) == 0);
    unsetenv("RESOLUTE_OUT_DIR");
    std::ifstream in("/tmp/resolute_envtest.json");
    CHECK(in.good());
    std::remove("/tmp/resolute_envtest.json");
}

}  // TEST_SUITE
