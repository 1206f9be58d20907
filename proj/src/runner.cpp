#include "soliton/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "soliton/csv.hpp"
#include "soliton/errors.hpp"
#include "soliton/svg.hpp"

namespace soliton {

namespace {

std::vector<std::size_t> physical_floor_indices(const OrbitModel& model) {
    if (model.kind == OrbitKind::TwoSummand) return {0, 2};
    std::vector<std::size_t> idx(model.factors.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return idx;
}

std::string describe_model(const RunConfig& config) {
    if (!config.preset.empty()) return config.preset;
    std::ostringstream os;
    if (config.model.kind == OrbitKind::TwoSummand) {
        os << "two-summand d1=" << config.model.d1 << " d2=" << config.model.d2
           << " A2=" << config.model.A2 << " A3=" << config.model.A3;
    } else {
        os << "warped d=(";
        for (std::size_t i = 0; i < config.model.factors.size(); ++i)
            os << (i ? "," : "") << config.model.factors[i].dim;
        os << ")";
    }
    os << " eps=" << config.model.epsilon << " C=" << config.model.C;
    return os.str();
}

void write_plots(const RunArtifacts& art, const RunConfig& config,
                 const std::filesystem::path& dir) {
    const std::size_t r = config.model.rank();
    if (art.has_phys) {
        std::vector<PlotSeries> series;
        for (std::size_t i = 0; i < r; ++i)
            series.push_back({"g" + std::to_string(i + 1), art.phys.t, art.phys.g[i]});
        series.push_back({"u", art.phys.t, art.phys.u});
        write_line_plot(dir / "plot_g_u.svg", "warping functions and potential", "t",
                        "g_i, u", series);
    }
    if (art.has_phase) {
        const auto dims = config.model.dims();
        const std::vector<double> t =
            art.has_phys ? art.phys.t : cumtrapz(art.phase.s, art.phase.W);
        std::vector<PlotSeries> series;
        const double sd1 = std::sqrt(dims[0]);
        for (std::size_t i = 0; i < r; ++i) {
            std::vector<double> xt(art.phase.size()), yt(art.phase.size());
            for (std::size_t k = 0; k < art.phase.size(); ++k) {
                xt[k] = art.phase.X[i][k] / std::sqrt(dims[i]);
                yt[k] = art.phase.Y[i][k] / sd1;
            }
            series.push_back({"X~" + std::to_string(i + 1), t, std::move(xt)});
            series.push_back({"Y~" + std::to_string(i + 1), t, std::move(yt)});
        }
        write_line_plot(dir / "plot_phase_vars.svg", "normalized slow variables", "t",
                        "X~_i, Y~_i", series);

        if (r >= 2) {
            std::vector<double> rx(art.phase.size()), ry(art.phase.size());
            const double scale = std::sqrt(dims[1]) / std::sqrt(dims[0]);
            for (std::size_t k = 0; k < art.phase.size(); ++k) {
                rx[k] = art.phase.X[0][k] / art.phase.X[1][k] * scale;
                ry[k] = art.phase.Y[0][k] / art.phase.Y[1][k];
            }
            write_line_plot(dir / "plot_ratios.svg", "slow-variable ratios", "t",
                            "ratios",
                            {{"X~1/X~2", t, std::move(rx)}, {"Y~1/Y~2", t, std::move(ry)}});
        }
    }
}

std::string build_summary(const RunArtifacts& art, const RunConfig& config) {
    std::ostringstream os;
    os << "run: " << describe_model(config) << "\n";
    os << "startup: "
       << (config.startup == StartupKind::Series
               ? "series"
               : config.startup == StartupKind::PhaseLaunch ? "phase-launch"
                                                            : "einstein-launch")
       << "\n";
    if (!art.violations.empty()) {
        os << "validation violations:\n";
        for (const auto& v : art.violations) os << "  - " << v << "\n";
        return os.str();
    }
    for (const auto& ev : art.traj.events)
        os << "event: " << event_kind_name(ev.kind) << " at " << format_number(ev.location)
           << (ev.detail.empty() ? "" : " (" + ev.detail + ")") << "\n";
    os << "samples: " << art.traj.size() << "\n";
    os << "monitors (" << art.monitors.size() << "):\n";
    for (const auto& m : art.monitors) {
        os << "  " << m.name;
        for (std::size_t pad = m.name.size(); pad < 22; ++pad) os << ' ';
        os << verdict_name(m.verdict) << "  margin=" << format_number(m.worst_margin)
           << " at " << format_number(m.worst_location);
        if (!m.notes.empty()) os << "  [" << m.notes << "]";
        os << "\n";
    }
    os << "fits (" << art.fits.size() << "):\n";
    for (const auto& f : art.fits) {
        os << "  " << f.quantity;
        for (std::size_t pad = f.quantity.size(); pad < 22; ++pad) os << ' ';
        os << (f.ok ? "ok " : "off") << "  params=";
        for (std::size_t i = 0; i < f.params.size(); ++i)
            os << (i ? ";" : "") << format_number(f.params[i]);
        if (!f.notes.empty()) os << "  [" << f.notes << "]";
        os << "\n";
    }
    return os.str();
}

}  // namespace

RunArtifacts run_single(const RunConfig& config, const OutputPaths& paths) {
    RunArtifacts art;
    try {
        const OrbitModel& model = config.model;

        // E(0) < 0 is a property of series startups; launches fix it by
        // construction (phase) or sit on the Einstein locus (E = 0).
        const double u0_for_validation =
            config.startup == StartupKind::Series
                ? config.ubar
                : -(1.0 + std::fabs(model.C)) / model.epsilon;
        art.violations = validate(model, u0_for_validation);
        if (!art.violations.empty()) {
            art.exit_code = kExitValidation;
            art.summary = build_summary(art, config);
            if (!paths.dir.empty()) {
                std::filesystem::create_directories(paths.dir);
                std::ofstream(paths.dir / "summary.txt", std::ios::binary) << art.summary;
            }
            return art;
        }

        IntegratorConfig icfg = config.integrator;
        MonitorContext ctx;
        ctx.model = model;
        ctx.normalization = config.normalization;
        ctx.h = icfg.h;

        const std::string canonical = canonical_config_text(config);
        StepTransform einstein_lock;

        if (config.startup == StartupKind::Series) {
            const PhysicalState start =
                series_startup(model, config.hbar, config.ubar, config.order, config.t0);
            const std::vector<double> x0 = pack_physical(model, start);
            if (icfg.floor_indices.empty()) icfg.floor_indices = physical_floor_indices(model);
            PhysicalSystem system{&model};
            art.traj = integrate(system, x0, config.t0, icfg);
            art.phys = physical_view(art.traj, model);
            art.has_phys = true;
            ctx.ubar = config.ubar;
            ctx.t0 = config.t0;
            ctx.startup_cut = 2.0 * config.t0;
        } else {
            std::vector<double> x0;
            if (config.startup == StartupKind::PhaseLaunch) {
                x0 = p_launch(model, config.delta, config.seed);
            } else {
                x0 = einstein_launch(model, config.delta, config.y1);
                einstein_lock = [&model](double, std::span<double> state) {
                    project_einstein(model, state);
                };
            }
            PhaseSystem system(model);
            art.traj = integrate(system, x0, 0.0, icfg, nullptr,
                                 einstein_lock ? &einstein_lock : nullptr);
            art.phase = phase_view(art.traj, model);
            art.has_phase = true;
            ctx.ubar = 0.0;
            ctx.t0 = 0.0;
            ctx.startup_cut = 0.0;
            // The launch reads off the shifted conservation constant.
            if (config.startup == StartupKind::PhaseLaunch && art.phase.size() > 0 &&
                art.phase.W[0] > 0.0) {
                ctx.normalization = Normalization::PotentialZeroAtOrigin;
                ctx.c_override = art.phase.Q[0] / (art.phase.W[0] * art.phase.W[0]);
            }
            // Physical reconstruction needs every Y_i > 0 (Einstein-locus
            // runs with Y_i = 0 slices stay in phase coordinates).
            try {
                art.phys = physical_from_phase(art.traj, model);
                art.has_phys = true;
            } catch (const coordinate_breakdown_error&) {
                art.has_phys = false;
            }
        }
        art.traj.model_hash = fnv1a(describe_model(config));
        art.traj.config_hash = fnv1a(canonical);

        // For t-domain runs, the slow variables come through the coordinate map.
        if (config.startup == StartupKind::Series) {
            try {
                art.phase = phase_view_from_physical(art.phys, model);
                art.has_phase = true;
            } catch (const std::exception&) {
                art.has_phase = false;
            }
        }

        const bool all_monitors = config.monitors.empty();
        if (art.has_phys) {
            std::vector<std::string> names =
                all_monitors ? monitor_names() : config.monitors;
            std::erase(names, "region_invariance");  // phase-only, handled below
            art.monitors = run_monitors(art.phys, ctx, names);
        }
        const bool want_region =
            all_monitors ||
            std::find(config.monitors.begin(), config.monitors.end(),
                      "region_invariance") != config.monitors.end();
        if (art.has_phase && config.startup != StartupKind::Series && want_region)
            art.monitors.push_back(check_region_invariance(art.phase, ctx));

        if (art.has_phys) {
            for (auto& f : fit_cone_slopes(art.phys, config.fits)) art.fits.push_back(f);
        }
        if (art.has_phase) {
            for (auto& f : check_lambda_limits(art.phase, model, config.fits))
                art.fits.push_back(f);
            if (config.startup != StartupKind::Series) {
                for (auto& f : check_scaling_laws(art.phase, model.epsilon, config.fits))
                    art.fits.push_back(f);
                for (std::size_t i = 0; i < static_cast<std::size_t>(model.rank()); ++i)
                    art.fits.push_back(estimate_sigma(art.phase, i, config.fits));
            }
        }
        if (config.startup == StartupKind::EinsteinLaunch && art.has_phase)
            art.fits.push_back(einstein_convergence(art.phase, model, config.fits));

        const double min_horizon =
            config.min_horizon >= 0.0 ? config.min_horizon : config.integrator.end;
        if (art.traj.terminated_early() && art.traj.ivar.back() < min_horizon)
            art.exit_code = kExitEarlyEvent;

        art.summary = build_summary(art, config);

        if (!paths.dir.empty()) {
            std::filesystem::create_directories(paths.dir);
            if (config.startup == StartupKind::Series)
                write_physical_csv(paths.dir / "trajectory.csv", art.phys, model);
            else
                write_phase_csv(paths.dir / "trajectory.csv", art.phase);
            if (art.has_phys && config.startup != StartupKind::Series)
                write_physical_csv(paths.dir / "physical.csv", art.phys, model);
            write_monitors_csv(paths.dir / "monitors.csv", art.monitors);
            write_fits_csv(paths.dir / "fits.csv", art.fits);
            std::ofstream(paths.dir / "summary.txt", std::ios::binary) << art.summary;
            if (paths.plots) write_plots(art, config, paths.dir);
        }
    } catch (const config_error& e) {
        art.exit_code = kExitConfig;
        art.error = e.what();
    } catch (const model_mismatch_error& e) {
        // e.g. a launch startup requested on a two-summand model
        art.exit_code = kExitValidation;
        art.error = e.what();
        art.violations.push_back(e.what());
    } catch (const std::exception& e) {
        art.exit_code = kExitInternal;
        art.error = e.what();
    }
    return art;
}

int resolve_workers(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("SOLITON_FLOW_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(std::min(hw, 4u)) : 1;
}

int run_sweep(const RunConfig& config, const OutputPaths& paths) {
    struct GridPoint {
        RunConfig config;
        std::string tag;
        std::string params;
    };
    std::vector<GridPoint> grid;

    if (config.startup == StartupKind::Series) {
        if (config.sweep_hbar.empty() || config.sweep_ubar.empty()) {
            std::cerr << "sweep: empty grid (sweep.hbar and sweep.ubar required)\n";
            return kExitConfig;
        }
        std::vector<std::pair<double, double>> seen;
        for (double hb : config.sweep_hbar) {
            for (double ub : config.sweep_ubar) {
                if (std::find(seen.begin(), seen.end(), std::make_pair(hb, ub)) !=
                    seen.end()) {
                    std::cerr << "sweep: duplicate grid point (hbar=" << hb
                              << ", ubar=" << ub << ") dropped\n";
                    continue;
                }
                seen.emplace_back(hb, ub);
                GridPoint p{config, "", ""};
                p.config.hbar = hb;
                p.config.ubar = ub;
                p.config.sweep_hbar.clear();
                p.config.sweep_ubar.clear();
                std::ostringstream tag;
                tag << "run_" << std::setfill('0') << std::setw(3) << grid.size()
                    << "_hbar" << hb << "_ubar" << ub;
                p.tag = tag.str();
                p.params = format_number(hb) + "," + format_number(ub);
                grid.push_back(std::move(p));
            }
        }
    } else {
        if (config.sweep_seeds.empty()) {
            std::cerr << "sweep: empty grid (sweep.seeds required for launch sweeps)\n";
            return kExitConfig;
        }
        std::vector<std::uint64_t> seen;
        for (std::uint64_t seed : config.sweep_seeds) {
            if (std::find(seen.begin(), seen.end(), seed) != seen.end()) {
                std::cerr << "sweep: duplicate seed " << seed << " dropped\n";
                continue;
            }
            seen.push_back(seed);
            GridPoint p{config, "", ""};
            p.config.seed = seed;
            p.config.sweep_seeds.clear();
            std::ostringstream tag;
            tag << "run_" << std::setfill('0') << std::setw(3) << grid.size() << "_seed"
                << seed;
            p.tag = tag.str();
            p.params = std::to_string(seed);
            grid.push_back(std::move(p));
        }
    }
    if (grid.empty()) {
        std::cerr << "sweep: grid deduplicated to nothing\n";
        return kExitConfig;
    }

    std::filesystem::create_directories(paths.dir);
    std::vector<RunArtifacts> results(grid.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::max(1, std::min<int>(resolve_workers(config.workers),
                                  static_cast<int>(grid.size())));
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            OutputPaths sub{paths.dir / grid[i].tag, paths.plots};
            results[i] = run_single(grid[i].config, sub);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();

    std::ofstream index(paths.dir / "index.csv", std::ios::binary);
    index << (config.startup == StartupKind::Series ? "index,hbar,ubar" : "index,seed")
          << ",exit_code,monitors_pass,monitors_fail,monitors_na,event,dir\n";
    bool all_ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& art = results[i];
        int pass = 0, fail = 0, na = 0;
        for (const auto& m : art.monitors) {
            if (m.verdict == Verdict::Pass) ++pass;
            else if (m.verdict == Verdict::Fail) ++fail;
            else ++na;
        }
        index << i << ',' << grid[i].params << ',' << art.exit_code << ',' << pass << ','
              << fail << ',' << na << ','
              << (art.traj.events.empty() ? "none"
                                          : event_kind_name(art.traj.events.back().kind))
              << ',' << grid[i].tag << '\n';
        if (art.exit_code != kExitOk) all_ok = false;
    }
    return all_ok ? kExitOk : kExitEarlyEvent;
}

}  // namespace soliton
