// End-to-end checks of the installed command-line tool. Each case spawns the
// real binary (path injected by the build) and inspects exit codes and output.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef IAKIT_CLI_PATH
#error "build must define IAKIT_CLI_PATH"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(IAKIT_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        result.out.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string temp_path(const char* name) {
    const char* dir = std::getenv("TMPDIR");
    return std::string(dir ? dir : "/tmp") + "/" + name;
}

} // namespace

TEST_CASE("feasibility reports properness") {
    const RunResult proper = run("feasibility 7 7 5 1 2");
    CHECK(proper.exit_code == 0);
    CHECK(proper.out.find("proper, margin 0") != std::string::npos);

    const RunResult eleven = run("feasibility 11 7 5 1 1");
    CHECK(eleven.exit_code == 0);
    CHECK(eleven.out.find("proper, margin 0") != std::string::npos);

    const RunResult improper = run("feasibility 8 7 5 1 2");
    CHECK(improper.exit_code == 0);
    CHECK(improper.out.find("improper, margin -2") != std::string::npos);
}

TEST_CASE("feasibility without stream counts prints the DMT table") {
    const RunResult dmt = run("feasibility 7 7 5");
    CHECK(dmt.exit_code == 0);
    CHECK(dmt.out.find("d,dprime,diversity,margin") != std::string::npos);
    CHECK(dmt.out.find("1,2,2,0") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(run("feasibility 7 7").exit_code == 1);
    CHECK(run("feasibility 7 7 5 1").exit_code == 1);  // d without dprime
    CHECK(run("nonsense").exit_code == 1);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("solve 3 2 2 1 1 --tol notanumber").exit_code == 1);
}

TEST_CASE("invalid dimensions map to exit 1") {
    CHECK(run("feasibility 3 2 2 5 1").exit_code == 1);
    CHECK(run("solve 3 2 2 5 5").exit_code == 1);
}

TEST_CASE("solve prints a converged report") {
    const RunResult r = run("solve 3 2 2 1 1 --channel-seed 7 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("converged: yes") != std::string::npos);
    CHECK(r.out.find("ranks_ok: yes") != std::string::npos);
}

TEST_CASE("solver stall surfaces as a numerical exit code") {
    const RunResult r = run("solve 4 2 2 1 1 --max-iters 200 --restarts 1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("converged: no") != std::string::npos);
}

TEST_CASE("analytic output is deterministic and parseable") {
    const std::string args =
        "analytic -K 3 --tx 3 --rx 3 -d 1 --dprime 2 --snr 0,10 --no-timestamp";
    const RunResult a = run(args);
    const RunResult b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("snr_db,method,user,rate_bits,ci_halfwidth,trials_used,trials_discarded")
          != std::string::npos);
    CHECK(a.out.find("10,ia_bound_thm2,sum,") != std::string::npos);
}

TEST_CASE("montecarlo respects thread flag without changing results") {
    const std::string base =
        "montecarlo -K 3 --tx 2 --rx 2 -d 1 --dprime 1 --snr 5 --trials 20 "
        "--seed 9 --no-timestamp";
    const RunResult serial = run(base + " --threads 1");
    const RunResult parallel = run(base + " --threads 8");
    CHECK(serial.exit_code == 0);
    CHECK(serial.out == parallel.out);
    CHECK(serial.out.find("ia_projection") != std::string::npos);
}

TEST_CASE("improper sweeps require --force") {
    const std::string base =
        "analytic -K 4 --tx 2 --rx 2 -d 1 --dprime 1 --snr 0 "
        "--methods ia_projection_analytic --no-timestamp";
    CHECK(run(base).exit_code == 1);
    CHECK(run(base + " --force").exit_code == 0);
}

TEST_CASE("config file drives a sweep and flags override it") {
    const std::string cfg_path = temp_path("iakit_test_config.cfg");
    {
        std::ofstream cfg(cfg_path);
        cfg << "K=3\nM=3,3,3\nN=3,3,3\nd=1,1,1\ndprime=2,2,2\n"
            << "snr_db=0\nmethods=ia_bound_thm2\ntrials=4\nseed=2\n";
    }
    const RunResult from_file = run("sweep --config " + cfg_path + " --no-timestamp");
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.out.find("# seed=2") != std::string::npos);

    const RunResult overridden =
        run("sweep --config " + cfg_path + " --seed 5 --no-timestamp");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.out.find("# seed=5") != std::string::npos);
    std::remove(cfg_path.c_str());
}

TEST_CASE("figure presets emit per-configuration files") {
    const std::string out = temp_path("iakit_fig2.csv");
    const std::string k7 = temp_path("iakit_fig2_k7d2.csv");
    const std::string k11 = temp_path("iakit_fig2_k11d1.csv");
    const RunResult r =
        run("sweep --preset fig2 --snr 0,10 --out " + out + " --no-timestamp");
    CHECK(r.exit_code == 0);

    std::ifstream a(k7), b(k11);
    REQUIRE(a.good());
    REQUIRE(b.good());
    std::string text_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string text_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(text_a.find("# K=7") != std::string::npos);
    CHECK(text_b.find("# K=11") != std::string::npos);
    CHECK(text_a.find("ia_projection_analytic") != std::string::npos);
    std::remove(k7.c_str());
    std::remove(k11.c_str());
}

TEST_CASE("compare reports zero deltas for identical files") {
    const std::string path = temp_path("iakit_cmp.csv");
    const RunResult sweep = run(
        "analytic -K 3 --tx 3 --rx 3 -d 1 --dprime 2 --snr 0,10 --no-timestamp --out "
        + path);
    REQUIRE(sweep.exit_code == 0);

    const RunResult cmp = run("compare " + path + " " + path);
    CHECK(cmp.exit_code == 0);
    CHECK(cmp.out.find("all deltas 0") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("compare rejects files with a foreign schema") {
    const std::string path = temp_path("iakit_bad.csv");
    {
        std::ofstream bad(path);
        bad << "time,value\n1,2\n";
    }
    const RunResult cmp = run("compare " + path + " " + path);
    CHECK(cmp.exit_code == 3);
    CHECK(cmp.out.find("schema") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("unwritable output path exits with the I/O code") {
    const RunResult r = run(
        "analytic -K 3 --tx 3 --rx 3 -d 1 --dprime 2 --snr 0 --no-timestamp "
        "--out /nonexistent_dir/x.csv");
    CHECK(r.exit_code == 3);
}
