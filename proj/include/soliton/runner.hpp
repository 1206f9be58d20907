#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "soliton/asymptotics.hpp"
#include "soliton/config.hpp"
#include "soliton/monitors.hpp"
#include "soliton/phase.hpp"
#include "soliton/physical.hpp"

namespace soliton {

// Process exit codes shared by the runner and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitEarlyEvent = 4;
inline constexpr int kExitInternal = 5;

struct OutputPaths {
    std::filesystem::path dir;  ///< empty = compute only, write nothing
    bool plots = true;
};

/// Everything one run produced. `phys`/`phase` hold whichever views exist for
/// the run type (native or reconstructed through the coordinate maps).
struct RunArtifacts {
    int exit_code = kExitOk;
    std::string error;
    std::vector<std::string> violations;

    Trajectory traj;
    bool has_phys = false;
    PhysicalTrajectory phys;
    bool has_phase = false;
    PhaseView phase;

    std::vector<MonitorReport> monitors;
    std::vector<AsymptoticFit> fits;
    std::string summary;
};

/// Executes one configured run: startup, integration, monitors, fits, and
/// (when paths.dir is set) CSV/SVG/summary artifacts.
RunArtifacts run_single(const RunConfig& config, const OutputPaths& paths);

/// Expands the sweep grid and executes each point independently (optionally
/// in parallel); per-run artifacts go to subdirectories and a merged
/// index.csv is written in grid order. Returns a process exit code.
int run_sweep(const RunConfig& config, const OutputPaths& paths);

/// Worker-count resolution: explicit config value, then the
/// SOLITON_FLOW_WORKERS environment variable, then a hardware default.
int resolve_workers(int configured);

}  // namespace soliton
