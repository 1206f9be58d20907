#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "soliton/csv.hpp"
#include "soliton/errors.hpp"
#include "soliton/runner.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string out_dir = "out";
    int workers = 0;
    bool no_plots = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key=value config file");
    cmd->add_option("--preset", flags.preset,
                    "model preset (example1-m1..m4, example2-m1..m4, phase-r2, phase-r3)");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--workers", flags.workers, "sweep worker count");
    cmd->add_flag("--no-plots", flags.no_plots, "skip SVG plot output");
}

int load_config(const CommonFlags& flags, soliton::RunConfig& config) {
    std::string text;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            std::cerr << "cannot read config file " << flags.config_path << "\n";
            return soliton::kExitConfig;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        config = soliton::run_config_from_text(text);
        if (!flags.preset.empty()) soliton::apply_preset(config, flags.preset);
    } catch (const soliton::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return soliton::kExitConfig;
    }
    if (config.preset.empty() && flags.config_path.empty()) {
        std::cerr << "need --config and/or --preset\n";
        return soliton::kExitConfig;
    }
    if (flags.workers > 0) config.workers = flags.workers;
    if (flags.no_plots) config.plots = false;
    return soliton::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cohomogeneity-one expanding soliton flows: integration, "
                 "runtime property checks, and asymptotic fits"};
    app.require_subcommand(1);

    CommonFlags run_flags, sweep_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "single configured run");
    add_common(run_cmd, run_flags);
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid of runs over (hbar, ubar) or seeds");
    add_common(sweep_cmd, sweep_flags);

    std::string cp_model = "phase-r2";
    std::string cp_dims, cp_lambdas, cp_out = "critical_points.csv";
    double cp_epsilon = 1.0;
    int cp_shell_samples = 0;
    std::uint64_t cp_seed = 0;
    CLI::App* cp_cmd =
        app.add_subcommand("critical-points", "enumerate stationary points of the slow system");
    cp_cmd->add_option("--model", cp_model, "warped preset name (phase-r2, phase-r3)");
    cp_cmd->add_option("--dims", cp_dims, "factor dims, e.g. 1,2,3 (overrides --model)");
    cp_cmd->add_option("--lambdas", cp_lambdas, "factor Einstein constants, e.g. 0,1,1");
    cp_cmd->add_option("--epsilon", cp_epsilon, "expansion constant");
    cp_cmd->add_option("--shell-samples", cp_shell_samples, "extra random shell points");
    cp_cmd->add_option("--seed", cp_seed, "rng seed for shell samples");
    cp_cmd->add_option("--out", cp_out, "output CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : soliton::kExitConfig;
    }

    try {
        if (run_cmd->parsed()) {
            soliton::RunConfig config;
            if (const int rc = load_config(run_flags, config); rc != 0) return rc;
            const soliton::OutputPaths paths{run_flags.out_dir, config.plots};
            const soliton::RunArtifacts art = soliton::run_single(config, paths);
            if (!art.error.empty()) std::cerr << "error: " << art.error << "\n";
            std::cout << art.summary;
            return art.exit_code;
        }
        if (sweep_cmd->parsed()) {
            soliton::RunConfig config;
            if (const int rc = load_config(sweep_flags, config); rc != 0) return rc;
            return soliton::run_sweep(config, {sweep_flags.out_dir, config.plots});
        }
        if (cp_cmd->parsed()) {
            soliton::OrbitModel model;
            if (!cp_dims.empty()) {
                std::vector<int> dims;
                std::vector<double> lambdas;
                std::stringstream ds(cp_dims), ls(cp_lambdas);
                std::string item;
                while (std::getline(ds, item, ',')) dims.push_back(std::stoi(item));
                while (std::getline(ls, item, ',')) lambdas.push_back(std::stod(item));
                if (dims.size() != lambdas.size() || dims.empty()) {
                    std::cerr << "--dims and --lambdas must be equal-length lists\n";
                    return soliton::kExitConfig;
                }
                model.kind = soliton::OrbitKind::WarpedProduct;
                for (std::size_t i = 0; i < dims.size(); ++i)
                    model.factors.push_back({dims[i], lambdas[i]});
                model.epsilon = cp_epsilon;
            } else {
                const auto preset = soliton::preset_model(cp_model);
                if (!preset) {
                    std::cerr << "unknown model preset " << cp_model << "\n";
                    return soliton::kExitConfig;
                }
                model = *preset;
                model.epsilon = cp_epsilon;
            }
            soliton::CriticalPointOptions options;
            options.shell_samples = cp_shell_samples;
            options.seed = cp_seed;
            const auto points = soliton::critical_points(model, options);
            soliton::write_critical_points_csv(cp_out, points, model.rank());
            std::cout << points.size() << " critical points -> " << cp_out << "\n";
            return 0;
        }
    } catch (const soliton::model_mismatch_error& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return soliton::kExitValidation;
    } catch (const soliton::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return soliton::kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return soliton::kExitInternal;
    }
    return soliton::kExitConfig;
}
