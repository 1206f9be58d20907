#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace soliton {

/// One Einstein factor of a multiple warped product: dimension d_i and
/// Einstein constant lambda_i. A flat factor (lambda = 0) is only allowed
/// as a circle (d = 1).
struct WarpedFactor {
    int dim = 1;
    double einstein_const = 0.0;
};

enum class OrbitKind { WarpedProduct, TwoSummand };

/// Principal-orbit geometry plus soliton parameters.
///
/// WarpedProduct: hypersurface M_1 x ... x M_r with metric sum g_i(t)^2 h_i.
/// TwoSummand: two-irreducible-summand orbit with scalar-curvature constants
/// A2, A3 (A1 is fixed to d1(d1-1) by the background normalization).
struct OrbitModel {
    OrbitKind kind = OrbitKind::WarpedProduct;

    // WarpedProduct data
    std::vector<WarpedFactor> factors;

    // TwoSummand data
    int d1 = 0;
    int d2 = 0;
    double A2 = 0.0;
    double A3 = 0.0;

    double epsilon = 1.0;  ///< expansion constant, > 0
    double C = 0.0;        ///< conservation-law constant
    int k = 1;             ///< dimension of the collapsing sphere at t = 0

    /// Number of metric functions g_i (r for warped products, 2 otherwise).
    int rank() const;
    /// Factor dimensions as doubles, in order.
    std::vector<double> dims() const;
    /// Einstein constants per factor; for two-summand models returns the
    /// warped-equivalent values only when meaningful (d1-1 and A2/d2).
    std::vector<double> lambdas() const;
};

/// How the additive gauge freedom in the potential is fixed.
enum class Normalization {
    PotentialZeroAtOrigin,  ///< u(0) = 0, C free
    CZero,                  ///< C = 0, u(0) free
};

/// n = sum of factor dimensions (hypersurface dimension).
int total_dim(const OrbitModel& model);

/// Checks every model invariant plus E(0) = C + epsilon*u0 < 0.
/// Returns an empty list iff the model is valid; each entry names the
/// violated invariant. Pure: never throws, never mutates.
std::vector<std::string> validate(const OrbitModel& model, double u0);

/// Two-summand model of the first numeric family: d1 = 2, d2 = 4m,
/// A2 = 2m(m+2), A3 = m/2, epsilon = 1, C = 0.
OrbitModel example1_model(int m);

/// Two-summand model of the second numeric family: d1 = 3, d2 = 4m,
/// A2 = 4m(m+2), A3 = 3m/4, epsilon = 1, C = 0.
OrbitModel example2_model(int m);

/// Warped product with a collapsing circle: d = (1, d_2, ..., d_r),
/// lambda = (0, l_2, ..., l_r), epsilon configurable.
OrbitModel circle_warped_model(const std::vector<int>& other_dims,
                               const std::vector<double>& other_lambdas,
                               double epsilon = 1.0, double C = 0.0);

/// Named model presets ("example1-m1" .. "example2-m4", "phase-r2",
/// "phase-r3"); returns nullopt for unknown names.
std::optional<OrbitModel> preset_model(std::string_view name);

}  // namespace soliton
