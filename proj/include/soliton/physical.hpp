#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "soliton/geometry.hpp"
#include "soliton/integrator.hpp"

namespace soliton {

/// Arclength-domain state: warping functions, their velocities, and the
/// potential. For two-summand models g has length 2 and the flat layout is
/// (z1..z6) = (g1, g1', g2, g2', u, u').
struct PhysicalState {
    double t = 0.0;
    std::vector<double> g;
    std::vector<double> gdot;
    double u = 0.0;
    double udot = 0.0;
};

/// Conservation-law diagnostics at one physical sample.
///
/// cons1_residual uses the second derivative of u taken from the normal
/// (t,t)-equation, so it is an independent check on the integrated route;
/// cons2_residual is the purely algebraic form of the same first integral.
struct ConservedSet {
    double E = 0.0;      ///< C + epsilon*u
    double cons1_residual = 0.0;
    double cons2_residual = 0.0;
    double ham_value = 0.0;  ///< Rbar + u'^2 + eps*u + C + (eps/2)(n+1)
    double xi = 0.0;         ///< -u' + tr L
    double trL = 0.0;
    double trL2 = 0.0;
    double S = 0.0;  ///< hypersurface scalar curvature
};

/// Flat state layouts used with integrate():
///   warped:      [g_1..g_r, gdot_1..gdot_r, u, udot]   (dim 2r+2)
///   two-summand: [z1..z6]                              (dim 6)
std::size_t physical_dim(const OrbitModel& model);
std::vector<double> pack_physical(const OrbitModel& model, const PhysicalState& state);
PhysicalState unpack_physical(const OrbitModel& model, double t,
                              std::span<const double> flat);

/// Warped-product vector field in t. u is advanced through the conservation
/// law; the normal equation is kept as a residual monitor.
/// Throws singular_state_error if any g_i <= 0.
void rhs_warped(const OrbitModel& model, std::span<const double> state,
                std::span<double> deriv);

/// Two-summand vector field in t (z-layout). Throws singular_state_error
/// if z1 <= 0 or z3 <= 0.
void rhs_two_summand(const OrbitModel& model, std::span<const double> state,
                     std::span<double> deriv);

/// Vector field on the flat layout, dispatched on model kind.
struct PhysicalSystem {
    const OrbitModel* model;
    void operator()(double, std::span<const double> x, std::span<double> dx) const;
};

/// All conserved quantities and residuals at a state.
ConservedSet conserved(const OrbitModel& model, const PhysicalState& state);

constexpr std::size_t kSeriesLen = 16;
using Series = std::array<double, kSeriesLen>;

/// Power series of (g1, g2, u) around the singular orbit, with boundary
/// data (g1, g1', g2, g2', u, u')(0) = (0, 1, hbar, 0, ubar, 0). g1 is odd,
/// g2 and u are even; coefficients are found by matching orders of the
/// polynomialized equations, one small linear solve per order.
struct StartupSeries {
    Series g1{};
    Series g2{};
    Series u{};
    int order = 4;
};

/// Two-summand models only. order must lie in [2, 6], hbar > 0.
StartupSeries series_startup_series(const OrbitModel& model, double hbar,
                                    double ubar, int order);

/// Series evaluated at t0 > 0, ready to hand to the integrator.
PhysicalState series_startup(const OrbitModel& model, double hbar, double ubar,
                             int order, double t0);

double series_eval(const Series& coef, double t);
double series_eval_derivative(const Series& coef, double t);

/// Max-norm of (d/dt state - f(state)) for the truncated series at t:
/// the startup defect used in convergence checks.
double series_defect(const OrbitModel& model, const StartupSeries& series, double t);

/// Column-wise view of a physical trajectory (either model kind).
struct PhysicalTrajectory {
    std::vector<double> t;
    std::vector<std::vector<double>> g;     // per factor
    std::vector<std::vector<double>> gdot;  // per factor
    std::vector<double> u;
    std::vector<double> udot;

    std::size_t size() const { return t.size(); }
    PhysicalState sample(std::size_t i) const;
};

PhysicalTrajectory physical_view(const Trajectory& traj, const OrbitModel& model);

}  // namespace soliton
