#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "soliton/geometry.hpp"
#include "soliton/integrator.hpp"
#include "soliton/physical.hpp"

namespace soliton {

/// Slow-variable state (X_1..X_r, Y_1..Y_r, W) at parameter s. The flat
/// layout used with integrate() is [X..., Y..., W], dim 2r+1.
struct PhaseState {
    std::vector<double> X;
    std::vector<double> Y;
    double W = 0.0;
    double s = 0.0;
};

/// Scalar quantities attached to a phase state.
struct DerivedQuantities {
    double G = 0.0;     ///< sum X_j^2
    double H = 0.0;     ///< sum sqrt(d_i) X_i  (normalized mean curvature)
    double Lyap = 0.0;  ///< G + sum lambda_i Y_i^2 - 1
    double Q = 0.0;     ///< Lyap + eps(n-1)/2 W^2  (modified energy)
    double J = 0.0;     ///< G - (eps/2) W^2
    double E_over_xi2 = 0.0;  ///< E/xi^2, read off through Q = W^2 E
};

std::size_t phase_dim(const OrbitModel& model);
std::vector<double> pack_phase(const PhaseState& state);
PhaseState unpack_phase(const OrbitModel& model, double s, std::span<const double> flat);

/// The full soliton vector field in s. Warped-product models only.
void rhs_phase(const OrbitModel& model, std::span<const double> state,
               std::span<double> deriv);

/// Callable adapter for integrate(), with the model data prefetched.
struct PhaseSystem {
    std::vector<double> dims, sqrt_d, lambda;
    double epsilon = 1.0;
    explicit PhaseSystem(const OrbitModel& model);
    void operator()(double, std::span<const double> x, std::span<double> dx) const;
};

DerivedQuantities derived(const OrbitModel& model, std::span<const double> state);

/// Subsystem with the Y_1 equation omitted; layout [X_1..X_r, Y_2..Y_r, W],
/// dim 2r. Requires d_1 = 1 and lambda_1 = 0.
void rhs_subsystem(const OrbitModel& model, std::span<const double> state,
                   std::span<double> deriv);

/// Y_1 recovered along a phase trajectory by quadrature:
/// Y_1(s) = Y_1(s0) exp(int_{s0}^{s} (G - X_1/sqrt(d_1) - (eps/2) W^2)).
/// s0 must lie inside the sampled range (snapped to the nearest sample).
std::vector<double> reconstruct_y1(const Trajectory& traj, const OrbitModel& model,
                                   double y1_at_s0, double s0);

enum class CriticalFamily {
    Origin,
    SphereShell,  ///< W = 0, Y = 0, sum X^2 = 1 (continuum; representatives emitted)
    SubsetRho,    ///< W = 0, X_i = sqrt(d_i) rho_A, Y_i^2 = (d_i/lambda_i) rho_A(1-rho_A), i in A
    Y1Line,       ///< W = 0, X = 0, Y_i = 0 for i > 1; Y_1 free
    X1Line,       ///< W = 0, X_1 = 1, rest 0; Y_1 free (contains the startup point P)
    Eplus,
    Eminus,
};

std::string critical_family_name(CriticalFamily family);

struct CriticalPoint {
    CriticalFamily family = CriticalFamily::Origin;
    std::string label;
    std::vector<double> coords;  ///< flat [X, Y, W]
    std::vector<std::complex<double>> eigenvalues;  ///< empty unless requested
    std::vector<double> line_direction;  ///< nonempty for the line families
};

struct CriticalPointOptions {
    int shell_samples = 0;  ///< extra random representatives on the X-shell
    std::uint64_t seed = 0;
    bool with_eigenvalues = true;
};

/// Enumerates the stationary families of the phase flow for circle-collapse
/// models (d_1 = 1, lambda_1 = 0, d_i > 1 and lambda_i > 0 for i > 1).
/// Continuum families are reported through representatives; every emitted
/// point satisfies |rhs|_inf <= 1e-12.
std::vector<CriticalPoint> critical_points(const OrbitModel& model,
                                           const CriticalPointOptions& options = {});

struct Linearization {
    std::size_t n = 0;
    std::vector<double> jacobian;  ///< row-major n*n
    std::vector<std::complex<double>> eigenvalues;  ///< sorted by (re, im) descending
};

/// Analytic Jacobian of the phase field at a state, with its spectrum.
Linearization linearize(const OrbitModel& model, std::span<const double> state);

/// Jacobian/spectrum of the Y_1-omitted subsystem, obtained by deleting the
/// Y_1 row and column of the full linearization.
Linearization linearize_subsystem(const OrbitModel& model,
                                  std::span<const double> full_state);

/// (Q, H-1): both vanish on the Einstein locus.
std::pair<double, double> einstein_residuals(const OrbitModel& model,
                                             std::span<const double> state);

/// Orthogonal projection onto {Q = 0, H = 1} (Lagrange-Newton, a few sweeps).
/// Used to integrate the flow restricted to the Einstein locus.
void project_einstein(const OrbitModel& model, std::span<double> state,
                      int iterations = 3);

/// The startup critical point P: X_1 = 1, Y_1 = 1, everything else 0.
std::vector<double> p_point(const OrbitModel& model);

/// P + delta * v with v a unit vector in the unstable eigenspace of P. The
/// coefficient on the eigenvalue-2 mode is itself scaled by delta (with a
/// margin that guarantees Q < 0 at the launch), so the trajectory represents
/// a soliton with an O(1) conservation constant; the eigenvalue-1 components
/// (Y_i, W directions) are positive. Deterministic per seed.
std::vector<double> p_launch(const OrbitModel& model, double delta,
                             std::uint64_t seed);

/// Launch inside {Q = 0, H = 1} near P with Y_i = 0 (i >= 2), W = delta_w;
/// the X entries solve the constraints exactly.
std::vector<double> einstein_launch(const OrbitModel& model, double delta_w,
                                    double y1 = 1.0);

/// E+ (or E- for negative sign): X_i = sqrt(d_i)/n, W = +-sqrt(2/(n eps)).
std::vector<double> e_point(const OrbitModel& model, int sign = +1);

/// Physical coordinates of one state: X_i = (sqrt(d_i)/xi) g_i'/g_i,
/// Y_i = sqrt(d_i)/(xi g_i), W = 1/xi. Works for both model kinds.
/// Throws coordinate_breakdown_error when xi = 0.
PhaseState phase_from_physical(const OrbitModel& model, const PhysicalState& state);

/// Reconstructs t, g_i, u along a phase trajectory: dt = W ds,
/// g_i = sqrt(d_i) W / Y_i, du = (H - 1) ds (trapezoid on the sample grid).
/// Requires W > 0 and Y_i > 0 at every sample.
PhysicalTrajectory physical_from_phase(const Trajectory& traj, const OrbitModel& model,
                                       double u_at_s0 = 0.0, double t_at_s0 = 0.0);

/// Column view of a phase trajectory with derived scalars per sample.
struct PhaseView {
    std::vector<double> s;
    std::vector<std::vector<double>> X, Y;
    std::vector<double> W, G, H, Lyap, Q, J;
    std::size_t size() const { return s.size(); }
};

PhaseView phase_view(const Trajectory& traj, const OrbitModel& model);

/// Phase variables evaluated along a physical trajectory (used for the
/// slow-variable plots of t-domain runs).
PhaseView phase_view_from_physical(const PhysicalTrajectory& traj,
                                   const OrbitModel& model);

}  // namespace soliton
