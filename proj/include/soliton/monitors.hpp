#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soliton/geometry.hpp"
#include "soliton/phase.hpp"
#include "soliton/physical.hpp"

namespace soliton {

enum class Verdict { Pass, Fail, NotApplicable };

std::string verdict_name(Verdict verdict);

/// One proved property checked along a trajectory. Margins are oriented so
/// that positive means satisfied; Fail implies worst_margin < 0.
struct MonitorReport {
    std::string name;
    Verdict verdict = Verdict::NotApplicable;
    double worst_margin = 0.0;
    double worst_location = 0.0;  ///< t (or s) where the margin is attained
    std::string notes;
};

/// Shared context for the monitor suite. `startup_cut` excludes the initial
/// window (series truncation noise and the step ramp); `strict_tol` is the
/// band used when testing strict inequalities in floating point.
struct MonitorContext {
    OrbitModel model;
    Normalization normalization = Normalization::CZero;
    double ubar = 0.0;  ///< u(0); under CZero this fixes the shift constant
    double t0 = 1e-4;
    double h = 1e-3;
    double startup_cut = 0.0;  ///< ignore samples with t below this
    /// For trajectories without startup data (phase launches) the shifted
    /// constant is read off the trajectory instead; this overrides it.
    std::optional<double> c_override;
    double strict_tol() const { return 100.0 * h * h * h * h; }
    /// Shift constant: bounds apply to u - u(0) with sqrt(-C~), C~ = C + eps*u(0).
    double c_shifted() const {
        if (c_override) return *c_override;
        return normalization == Normalization::CZero ? model.epsilon * ubar : model.C;
    }
};

/// u strictly decreasing and strictly concave past the startup window.
MonitorReport check_potential(const PhysicalTrajectory& traj, const MonitorContext& ctx);

/// tr L eventually stays below sqrt(n*eps/2); the onset must come before
/// half the horizon.
MonitorReport check_mean_curvature(const PhysicalTrajectory& traj,
                                   const MonitorContext& ctx);

/// E = C + eps*u stays negative. NotApplicable when E is identically ~0
/// (Einstein trajectories).
MonitorReport check_E_negative(const PhysicalTrajectory& traj,
                               const MonitorContext& ctx);

/// Zhang-type bounds after shifting to the u(0) = 0 gauge:
/// 0 <= -u~ < (eps/4) t^2 + sqrt(-C~) t  and  |u'| < (eps/2) t + sqrt(-C~).
MonitorReport check_potential_bounds(const PhysicalTrajectory& traj,
                                     const MonitorContext& ctx);

/// Asymptotic lower bound for |grad u| and the matching Ricci bound:
/// from the first t1 > 2 sqrt(5/eps) with trL < sqrt(n*eps/2),
///   (i)  -u'(t) > (9/10) (-u'(t1)/((eps/2)t1+a)) ((eps/2)t+a)
///   (ii) u'' + eps/2 <= (eps/2)(1 + (9/10) u'(t1)/((eps/2)t1+a)).
MonitorReport check_gradient_lower_bound(const PhysicalTrajectory& traj,
                                         const MonitorContext& ctx);

/// The rescaled energy v^(2/n)(S + tr((L0)^2)) becomes non-increasing; the
/// report carries the detected onset.
MonitorReport check_F0_lyapunov(const PhysicalTrajectory& traj,
                                const MonitorContext& ctx);

/// Q < 0 and H < 1 persist along a phase trajectory started inside both.
MonitorReport check_region_invariance(const PhaseView& traj, const MonitorContext& ctx);

/// Volume of the sublevel sets grows at least logarithmically: positive
/// log-fit coefficient on the second half plus an unbounded trend.
MonitorReport check_volume_growth(const PhysicalTrajectory& traj,
                                  const MonitorContext& ctx);

/// The full physical-trajectory suite in a fixed order.
std::vector<MonitorReport> run_monitors(const PhysicalTrajectory& traj,
                                        const MonitorContext& ctx,
                                        const std::vector<std::string>& names);

/// Names accepted by run_monitors, in canonical order.
std::vector<std::string> monitor_names();

}  // namespace soliton
