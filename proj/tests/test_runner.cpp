#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "soliton/runner.hpp"

using namespace soliton;

namespace {

std::filesystem::path temp_dir(const std::string& leaf) {
    auto dir = std::filesystem::temp_directory_path() / "solitonflow-test-runner" / leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig quick_example1() {
    RunConfig config = run_config_from_text(
        "model.preset = example1-m1\n"
        "integrator.h = 2e-3\n"
        "integrator.record_every = 5\n");
    return config;
}

}  // namespace

TEST_CASE("a preset run completes with all monitors reported") {
    const auto dir = temp_dir("preset");
    const RunArtifacts art = run_single(quick_example1(), {dir, true});
    CHECK(art.exit_code == kExitOk);
    REQUIRE(art.has_phys);
    CHECK(art.monitors.size() == monitor_names().size());
    for (const auto& m : art.monitors) CHECK(m.verdict == Verdict::Pass);

    CHECK(std::filesystem::exists(dir / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir / "monitors.csv"));
    CHECK(std::filesystem::exists(dir / "fits.csv"));
    CHECK(std::filesystem::exists(dir / "summary.txt"));
    CHECK(std::filesystem::exists(dir / "plot_g_u.svg"));
    CHECK(std::filesystem::exists(dir / "plot_phase_vars.svg"));
    CHECK(std::filesystem::exists(dir / "plot_ratios.svg"));
    CHECK(art.summary.find("monitors (7)") != std::string::npos);
}

TEST_CASE("a requested monitor subset limits the report count") {
    RunConfig config = quick_example1();
    config.monitors = {"potential", "E_negative"};
    const RunArtifacts art = run_single(config, {{}, false});
    CHECK(art.monitors.size() == 2);
}

TEST_CASE("model validation failures exit with code 3") {
    RunConfig config = quick_example1();
    config.ubar = 1.0;  // E(0) >= 0
    const auto dir = temp_dir("invalid");
    const RunArtifacts art = run_single(config, {dir, false});
    CHECK(art.exit_code == kExitValidation);
    CHECK(!art.violations.empty());
    CHECK(std::filesystem::exists(dir / "summary.txt"));
    CHECK(slurp(dir / "summary.txt").find("E-nonnegative") != std::string::npos);
}

TEST_CASE("a launch startup on a two-summand model exits with code 3") {
    RunConfig config = quick_example1();
    config.startup = StartupKind::PhaseLaunch;
    const RunArtifacts art = run_single(config, {{}, false});
    CHECK(art.exit_code == kExitValidation);
    CHECK(!art.violations.empty());
}

TEST_CASE("an event before the horizon exits with code 4, artifacts intact") {
    RunConfig config = quick_example1();
    config.integrator.blowup_norm = 10.0;  // g2 = 6 crosses this quickly
    const auto dir = temp_dir("early");
    const RunArtifacts art = run_single(config, {dir, false});
    CHECK(art.exit_code == kExitEarlyEvent);
    CHECK(art.traj.terminated_early());
    CHECK(std::filesystem::exists(dir / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir / "summary.txt"));
}

TEST_CASE("rerunning the same config writes byte-identical CSV") {
    const auto dir1 = temp_dir("det1");
    const auto dir2 = temp_dir("det2");
    const RunConfig config = quick_example1();
    run_single(config, {dir1, false});
    run_single(config, {dir2, false});
    CHECK(slurp(dir1 / "trajectory.csv") == slurp(dir2 / "trajectory.csv"));
    CHECK(slurp(dir1 / "monitors.csv") == slurp(dir2 / "monitors.csv"));
    CHECK(slurp(dir1 / "fits.csv") == slurp(dir2 / "fits.csv"));
}

TEST_CASE("phase-launch runs report region invariance") {
    RunConfig config = run_config_from_text(
        "model.preset = phase-r2\n"
        "integrator.end = 50\n"
        "integrator.record_every = 20\n");
    const RunArtifacts art = run_single(config, {{}, false});
    CHECK(art.exit_code == kExitOk);
    REQUIRE(art.has_phase);
    bool found = false;
    for (const auto& m : art.monitors)
        if (m.name == "region_invariance") {
            found = true;
            CHECK(m.verdict == Verdict::Pass);
        }
    CHECK(found);
}

TEST_CASE("einstein-locus runs converge without physical reconstruction") {
    RunConfig config = run_config_from_text(
        "model.preset = phase-r2\n"
        "startup.kind = einstein\n"
        "integrator.end = 70\n"
        "integrator.record_every = 10\n");
    const RunArtifacts art = run_single(config, {{}, false});
    CHECK(art.exit_code == kExitOk);
    CHECK(!art.has_phys);  // the Y_i = 0 slice has no finite metric
    bool found = false;
    for (const auto& f : art.fits)
        if (f.quantity.find("einstein") != std::string::npos) {
            found = true;
            CHECK(f.ok);
        }
    CHECK(found);
}

TEST_CASE("a 3x3 sweep runs every grid point and indexes them in order") {
    RunConfig config = run_config_from_text(
        "model.preset = example1-m1\n"
        "integrator.h = 5e-3\n"
        "integrator.end = 5\n"
        "integrator.record_every = 10\n"
        "sweep.hbar = 3, 6, 9\n"
        "sweep.ubar = -0.5, -1, -2\n"
        "sweep.workers = 2\n");
    const auto dir = temp_dir("sweep");
    CHECK(run_sweep(config, {dir, false}) == kExitOk);
    const std::string index = slurp(dir / "index.csv");
    std::stringstream ss(index);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "index,hbar,ubar,exit_code,monitors_pass,monitors_fail,monitors_na,event,dir");
    int rows = 0;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(line.find(",reached_end,") != std::string::npos);
    }
    CHECK(rows == 9);
    CHECK(std::filesystem::exists(dir / "run_000_hbar3_ubar-0.5" / "summary.txt"));
    CHECK(std::filesystem::exists(dir / "run_008_hbar9_ubar-2" / "summary.txt"));
    CHECK(index.find("\n0,3,-0.5,0,") != std::string::npos);
    CHECK(index.find("\n8,9,-2,0,") != std::string::npos);
}

TEST_CASE("sweep deduplicates repeated grid points") {
    RunConfig config = run_config_from_text(
        "model.preset = example1-m1\n"
        "integrator.h = 5e-3\n"
        "integrator.end = 5\n"
        "integrator.record_every = 10\n"
        "sweep.hbar = 6, 6\n"
        "sweep.ubar = -1\n");
    const auto dir = temp_dir("dedup");
    CHECK(run_sweep(config, {dir, false}) == kExitOk);
    std::stringstream ss(slurp(dir / "index.csv"));
    std::string line;
    int rows = -1;  // discount header
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1);
}

TEST_CASE("launch sweeps iterate over seeds") {
    RunConfig config = run_config_from_text(
        "model.preset = phase-r2\n"
        "integrator.end = 20\n"
        "integrator.record_every = 20\n"
        "sweep.seeds = 1, 2, 3\n");
    const auto dir = temp_dir("seeds");
    CHECK(run_sweep(config, {dir, false}) == kExitOk);
    std::stringstream ss(slurp(dir / "index.csv"));
    std::string line;
    std::getline(ss, line);
    CHECK(line == "index,seed,exit_code,monitors_pass,monitors_fail,monitors_na,event,dir");
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    CHECK(std::filesystem::exists(dir / "run_002_seed3" / "trajectory.csv"));
}

TEST_CASE("an empty sweep grid is a config error") {
    RunConfig config = quick_example1();
    config.sweep_hbar.clear();
    config.sweep_ubar.clear();
    const auto dir = temp_dir("empty");
    CHECK(run_sweep(config, {dir, false}) == kExitConfig);
}
