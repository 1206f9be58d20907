#pragma once

#include <span>
#include <string>
#include <vector>

#include "soliton/geometry.hpp"
#include "soliton/phase.hpp"
#include "soliton/physical.hpp"

namespace soliton {

enum class ModelForm { Linear, PowerLaw, LogLinear, ConstantLimit };

std::string model_form_name(ModelForm form);

/// One least-squares (or tail-average) fit over a declared window.
/// All fits are deterministic; the window is the only knob.
struct AsymptoticFit {
    std::string quantity;
    ModelForm form = ModelForm::Linear;
    std::vector<double> params;
    double window_start = 0.0;
    double window_end = 0.0;
    double residual_rms = 0.0;
    bool ok = false;
    std::string notes;
};

struct FitOptions {
    double tail_fraction = 0.2;   ///< last fraction of samples used as the window
    std::size_t min_points = 50;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Cumulative trapezoid of y dx on the grid x, starting from y0.
std::vector<double> cumtrapz(std::span<const double> x, std::span<const double> y,
                             double start = 0.0);

/// [begin, end) indices of the tail window (at least min_points, capped at
/// the full range).
std::pair<std::size_t, std::size_t> tail_window(std::span<const double> x,
                                                const FitOptions& options);

/// Linear fits g_i ~ a_i t + b_i per factor; ok when the relative rms
/// residual is below 1e-2 (conical asymptotics).
std::vector<AsymptoticFit> fit_cone_slopes(const PhysicalTrajectory& traj,
                                           const FitOptions& options = {});

/// Tail estimates of lim X_i / W^2 against the predicted (eps/2) sqrt(d_i);
/// ok when the relative deviation is within 10%.
std::vector<AsymptoticFit> check_lambda_limits(const PhaseView& traj,
                                               const OrbitModel& model,
                                               const FitOptions& options = {});

/// Tail checks of W sqrt(eps s) -> 1, s / (eps t^2 / 4) -> 1, and the
/// bracketing a1 W^4 <= G <= a2 W^4. t is reconstructed internally from
/// dt = W ds.
std::vector<AsymptoticFit> check_scaling_laws(const PhaseView& traj, double epsilon,
                                              const FitOptions& options = {});

/// For an Einstein-locus trajectory: distance to E+ at the end, and the
/// fitted exponential growth rate of the reconstructible g_i against the
/// prediction sqrt(eps/(2n)). params = {rate, target, final_distance}.
AsymptoticFit einstein_convergence(const PhaseView& traj, const OrbitModel& model,
                                   const FitOptions& options = {});

/// Monotonicity and tail behaviour of W / Y_i (factor index 0-based).
/// params = {final_value, tail_slope, tail_median}; a positive tail slope
/// with no plateau is reported as likely divergence.
AsymptoticFit estimate_sigma(const PhaseView& traj, std::size_t factor,
                             const FitOptions& options = {});

}  // namespace soliton
