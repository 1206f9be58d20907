#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "soliton/asymptotics.hpp"
#include "soliton/geometry.hpp"
#include "soliton/integrator.hpp"

namespace soliton {

enum class StartupKind { Series, PhaseLaunch, EinsteinLaunch };

/// Everything a single run needs. Parsed from flat `key = value` text with
/// dotted section prefixes; unknown keys are rejected.
struct RunConfig {
    OrbitModel model;
    std::string preset;  ///< name the model came from, if any
    Normalization normalization = Normalization::CZero;

    StartupKind startup = StartupKind::Series;
    double hbar = 6.0;
    double ubar = -1.0;
    int order = 4;
    double t0 = 1e-4;
    double delta = 1e-6;        ///< phase/einstein launch offset
    std::uint64_t seed = 1;     ///< phase launch direction seed
    double y1 = 1.0;            ///< einstein launch Y_1

    IntegratorConfig integrator;
    double min_horizon = -1.0;  ///< < 0 means "must reach integrator.end"

    std::vector<std::string> monitors;  ///< empty = all applicable
    FitOptions fits;

    std::vector<double> sweep_hbar;
    std::vector<double> sweep_ubar;
    std::vector<std::uint64_t> sweep_seeds;
    int workers = 0;  ///< 0 = env/flag/hardware default

    bool plots = true;
};

/// Key/value lines: `section.key = value`, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_flat_config(const std::string& text);

/// Builds a RunConfig from config text. Throws config_error on unknown keys,
/// bad values, or an unknown preset.
RunConfig run_config_from_text(const std::string& text);

/// Applies a named preset (model + startup defaults) onto a config.
void apply_preset(RunConfig& config, std::string_view name);

/// Canonical printable form used for provenance hashes and reproducibility.
std::string canonical_config_text(const RunConfig& config);

}  // namespace soliton
