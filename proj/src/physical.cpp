#include "soliton/physical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "soliton/errors.hpp"

namespace soliton {

std::size_t physical_dim(const OrbitModel& model) {
    return model.kind == OrbitKind::WarpedProduct ? 2 * model.factors.size() + 2 : 6;
}

std::vector<double> pack_physical(const OrbitModel& model, const PhysicalState& state) {
    if (model.kind == OrbitKind::WarpedProduct) {
        const std::size_t r = model.factors.size();
        std::vector<double> x(2 * r + 2);
        for (std::size_t i = 0; i < r; ++i) {
            x[i] = state.g[i];
            x[r + i] = state.gdot[i];
        }
        x[2 * r] = state.u;
        x[2 * r + 1] = state.udot;
        return x;
    }
    return {state.g[0], state.gdot[0], state.g[1], state.gdot[1], state.u, state.udot};
}

PhysicalState unpack_physical(const OrbitModel& model, double t,
                              std::span<const double> flat) {
    PhysicalState s;
    s.t = t;
    if (model.kind == OrbitKind::WarpedProduct) {
        const std::size_t r = model.factors.size();
        s.g.assign(flat.begin(), flat.begin() + r);
        s.gdot.assign(flat.begin() + r, flat.begin() + 2 * r);
        s.u = flat[2 * r];
        s.udot = flat[2 * r + 1];
    } else {
        s.g = {flat[0], flat[2]};
        s.gdot = {flat[1], flat[3]};
        s.u = flat[4];
        s.udot = flat[5];
    }
    return s;
}

void rhs_warped(const OrbitModel& model, std::span<const double> state,
                std::span<double> deriv) {
    if (model.kind != OrbitKind::WarpedProduct)
        throw model_mismatch_error("rhs_warped: warped-product model required");
    const std::size_t r = model.factors.size();
    const double eps = model.epsilon;
    const double u = state[2 * r];
    const double udot = state[2 * r + 1];

    double trL = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (!(state[i] > 0.0)) throw singular_state_error("rhs_warped: g_i <= 0");
        trL += model.factors[i].dim * (state[r + i] / state[i]);
    }
    for (std::size_t i = 0; i < r; ++i) {
        const double g = state[i];
        const double L = state[r + i] / g;
        const double ricci = model.factors[i].einstein_const / (g * g);
        const double Ldot = ricci - trL * L + udot * L + 0.5 * eps;
        deriv[i] = state[r + i];
        deriv[r + i] = g * (Ldot + L * L);
    }
    deriv[2 * r] = udot;
    deriv[2 * r + 1] = model.C + eps * u + udot * udot - trL * udot;
}

void rhs_two_summand(const OrbitModel& model, std::span<const double> z,
                     std::span<double> dz) {
    if (model.kind != OrbitKind::TwoSummand)
        throw model_mismatch_error("rhs_two_summand: two-summand model required");
    if (!(z[0] > 0.0) || !(z[2] > 0.0))
        throw singular_state_error("rhs_two_summand: z1 or z3 <= 0");
    const double d1 = model.d1, d2 = model.d2;
    const double eps = model.epsilon;
    const double z1 = z[0], z2 = z[1], z3 = z[2], z4 = z[3], z5 = z[4], z6 = z[5];

    dz[0] = z2;
    dz[1] = -(d1 - 1.0) * z2 * z2 / z1 - d2 * z2 * z4 / z3 + z2 * z6 +
            (d1 - 1.0) / z1 + (model.A3 / d1) * (z1 * z1 * z1) / (z3 * z3 * z3 * z3) +
            0.5 * eps * z1;
    dz[2] = z4;
    dz[3] = -d1 * z2 * z4 / z1 - (d2 - 1.0) * z4 * z4 / z3 + z4 * z6 +
            (model.A2 / d2) / z3 - 2.0 * (model.A3 / d2) * (z1 * z1) / (z3 * z3 * z3) +
            0.5 * eps * z3;
    dz[4] = z6;
    dz[5] = -z6 * (d1 * z2 / z1 + d2 * z4 / z3) + z6 * z6 + eps * z5 + model.C;
}

void PhysicalSystem::operator()(double, std::span<const double> x,
                                std::span<double> dx) const {
    if (model->kind == OrbitKind::WarpedProduct)
        rhs_warped(*model, x, dx);
    else
        rhs_two_summand(*model, x, dx);
}

namespace {

double scalar_curvature(const OrbitModel& model, const PhysicalState& s) {
    if (model.kind == OrbitKind::WarpedProduct) {
        double S = 0.0;
        for (std::size_t i = 0; i < model.factors.size(); ++i)
            S += model.factors[i].dim * model.factors[i].einstein_const / (s.g[i] * s.g[i]);
        return S;
    }
    const double z1 = s.g[0], z3 = s.g[1];
    const double A1 = model.d1 * (model.d1 - 1.0);
    return A1 / (z1 * z1) + model.A2 / (z3 * z3) -
           model.A3 * (z1 * z1) / (z3 * z3 * z3 * z3);
}

}  // namespace

ConservedSet conserved(const OrbitModel& model, const PhysicalState& state) {
    const auto dims = model.dims();
    const double eps = model.epsilon;
    const double n = total_dim(model);

    ConservedSet out;
    out.S = scalar_curvature(model, state);
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const double L = state.gdot[i] / state.g[i];
        out.trL += dims[i] * L;
        out.trL2 += dims[i] * L * L;
    }
    out.xi = -state.udot + out.trL;
    out.E = model.C + eps * state.u;

    // trace of the tangential equation gives tr(Ldot)
    const double trLdot =
        out.S - out.trL * out.trL + state.udot * out.trL + 0.5 * n * eps;
    const double uddot_tt = trLdot + out.trL2 - 0.5 * eps;

    out.cons1_residual = uddot_tt + out.xi * state.udot - eps * state.u - model.C;
    out.cons2_residual = out.S + out.trL2 - out.xi * out.xi - eps * state.u +
                         0.5 * (n - 1.0) * eps - model.C;
    const double Rbar = -2.0 * trLdot - out.trL2 - out.trL * out.trL + out.S;
    out.ham_value = Rbar + state.udot * state.udot + eps * state.u + model.C +
                    0.5 * eps * (n + 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Series startup at the singular orbit
// ---------------------------------------------------------------------------

namespace {

Series smul(const Series& a, const Series& b) {
    Series c{};
    for (std::size_t i = 0; i < kSeriesLen; ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j + i < kSeriesLen; ++j) c[i + j] += a[i] * b[j];
    }
    return c;
}

Series sder(const Series& a) {
    Series c{};
    for (std::size_t k = 1; k < kSeriesLen; ++k) c[k - 1] = k * a[k];
    return c;
}

Series saxpy(double alpha, const Series& a, const Series& b) {
    Series c{};
    for (std::size_t i = 0; i < kSeriesLen; ++i) c[i] = alpha * a[i] + b[i];
    return c;
}

struct SeriesResiduals {
    Series r1, r2, r3;
};

// Residuals of the z-equations multiplied through by powers of g1, g2 so
// everything is polynomial. r1 is even in t, r2 and r3 odd.
SeriesResiduals startup_residuals(const OrbitModel& m, const Series& g1,
                                  const Series& g2, const Series& u) {
    const double d1 = m.d1, d2 = m.d2, eps = m.epsilon;
    const Series g1d = sder(g1), g1dd = sder(g1d);
    const Series g2d = sder(g2), g2dd = sder(g2d);
    const Series ud = sder(u), udd = sder(ud);
    const Series g2_2 = smul(g2, g2);
    const Series g2_3 = smul(g2_2, g2);
    const Series g2_4 = smul(g2_2, g2_2);
    const Series g1_2 = smul(g1, g1);
    const Series g1_3 = smul(g1_2, g1);
    const Series g1_4 = smul(g1_2, g1_2);
    Series one{};
    one[0] = 1.0;

    SeriesResiduals res;
    res.r1 = smul(smul(g1, g2_4), g1dd);
    res.r1 = saxpy(d1 - 1.0, smul(g2_4, saxpy(-1.0, one, smul(g1d, g1d))), res.r1);
    res.r1 = saxpy(d2, smul(smul(g1, g2_3), smul(g1d, g2d)), res.r1);
    res.r1 = saxpy(-1.0, smul(smul(g1, g2_4), smul(g1d, ud)), res.r1);
    res.r1 = saxpy(-m.A3 / d1, g1_4, res.r1);
    res.r1 = saxpy(-0.5 * eps, smul(g1_2, g2_4), res.r1);

    res.r2 = smul(smul(g1, g2_3), g2dd);
    res.r2 = saxpy(d1, smul(g2_3, smul(g1d, g2d)), res.r2);
    res.r2 = saxpy(d2 - 1.0, smul(smul(g1, g2_2), smul(g2d, g2d)), res.r2);
    res.r2 = saxpy(-1.0, smul(smul(g1, g2_3), smul(g2d, ud)), res.r2);
    res.r2 = saxpy(-m.A2 / d2, smul(g1, g2_2), res.r2);
    res.r2 = saxpy(2.0 * m.A3 / d2, g1_3, res.r2);
    res.r2 = saxpy(-0.5 * eps, smul(g1, g2_4), res.r2);

    const Series g1g2 = smul(g1, g2);
    Series trl = saxpy(d1, smul(g1d, g2), saxpy(d2, smul(g2d, g1), Series{}));
    res.r3 = smul(g1g2, udd);
    res.r3 = saxpy(1.0, smul(ud, trl), res.r3);
    res.r3 = saxpy(-1.0, smul(g1g2, smul(ud, ud)), res.r3);
    Series affine = saxpy(eps, u, Series{});
    affine[0] += m.C;
    res.r3 = saxpy(-1.0, smul(g1g2, affine), res.r3);
    return res;
}

}  // namespace

StartupSeries series_startup_series(const OrbitModel& model, double hbar,
                                    double ubar, int order) {
    if (model.kind != OrbitKind::TwoSummand)
        throw model_mismatch_error("series_startup: two-summand model required");
    if (!(hbar > 0.0)) throw std::invalid_argument("series_startup: hbar must be > 0");
    if (order < 2 || order > 6)
        throw std::invalid_argument("series_startup: order must be in [2, 6]");

    StartupSeries s;
    s.order = order;
    s.g1[1] = 1.0;
    s.g2[0] = hbar;
    s.u[0] = ubar;

    const int stages = order / 2;
    for (int m = 1; m <= stages; ++m) {
        const std::size_t ia = 2 * m + 1, ib = 2 * m, ic = 2 * m;
        const std::size_t row1 = 2 * m, row23 = 2 * m - 1;

        // The new coefficients enter these residual orders linearly; assemble
        // the 3x3 system by finite differencing in each unknown.
        auto eval = [&](double a, double b, double c) {
            Series g1 = s.g1, g2 = s.g2, u = s.u;
            g1[ia] = a;
            g2[ib] = b;
            u[ic] = c;
            const auto res = startup_residuals(model, g1, g2, u);
            return std::array<double, 3>{res.r1[row1], res.r2[row23], res.r3[row23]};
        };
        const auto r0 = eval(0.0, 0.0, 0.0);
        double mat[3][3];
        for (int j = 0; j < 3; ++j) {
            const auto rj = eval(j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, j == 2 ? 1.0 : 0.0);
            for (int i = 0; i < 3; ++i) mat[i][j] = rj[i] - r0[i];
        }
        // 3x3 Gaussian elimination with partial pivoting
        double rhs[3] = {-r0[0], -r0[1], -r0[2]};
        int perm[3] = {0, 1, 2};
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int row = col + 1; row < 3; ++row)
                if (std::fabs(mat[perm[row]][col]) > std::fabs(mat[perm[piv]][col]))
                    piv = row;
            std::swap(perm[col], perm[piv]);
            for (int row = col + 1; row < 3; ++row) {
                const double f = mat[perm[row]][col] / mat[perm[col]][col];
                for (int c2 = col; c2 < 3; ++c2) mat[perm[row]][c2] -= f * mat[perm[col]][c2];
                rhs[perm[row]] -= f * rhs[perm[col]];
            }
        }
        double sol[3];
        for (int col = 2; col >= 0; --col) {
            double acc = rhs[perm[col]];
            for (int c2 = col + 1; c2 < 3; ++c2) acc -= mat[perm[col]][c2] * sol[c2];
            sol[col] = acc / mat[perm[col]][col];
        }
        s.g1[ia] = sol[0];
        s.g2[ib] = sol[1];
        s.u[ic] = sol[2];
    }
    return s;
}

double series_eval(const Series& coef, double t) {
    double acc = 0.0;
    for (std::size_t k = kSeriesLen; k-- > 0;) acc = acc * t + coef[k];
    return acc;
}

double series_eval_derivative(const Series& coef, double t) {
    return series_eval(sder(coef), t);
}

PhysicalState series_startup(const OrbitModel& model, double hbar, double ubar,
                             int order, double t0) {
    const StartupSeries s = series_startup_series(model, hbar, ubar, order);
    PhysicalState st;
    st.t = t0;
    st.g = {series_eval(s.g1, t0), series_eval(s.g2, t0)};
    st.gdot = {series_eval_derivative(s.g1, t0), series_eval_derivative(s.g2, t0)};
    st.u = series_eval(s.u, t0);
    st.udot = series_eval_derivative(s.u, t0);
    return st;
}

double series_defect(const OrbitModel& model, const StartupSeries& series, double t) {
    const std::array<double, 6> z = {
        series_eval(series.g1, t),  series_eval_derivative(series.g1, t),
        series_eval(series.g2, t),  series_eval_derivative(series.g2, t),
        series_eval(series.u, t),   series_eval_derivative(series.u, t)};
    std::array<double, 6> f{};
    rhs_two_summand(model, z, f);
    const Series g1dd = sder(sder(series.g1));
    const Series g2dd = sder(sder(series.g2));
    const Series udd = sder(sder(series.u));
    const std::array<double, 6> zdot = {z[1], series_eval(g1dd, t),
                                        z[3], series_eval(g2dd, t),
                                        z[5], series_eval(udd, t)};
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::fabs(zdot[i] - f[i]));
    return worst;
}

PhysicalState PhysicalTrajectory::sample(std::size_t i) const {
    PhysicalState s;
    s.t = t[i];
    s.g.resize(g.size());
    s.gdot.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        s.g[j] = g[j][i];
        s.gdot[j] = gdot[j][i];
    }
    s.u = u[i];
    s.udot = udot[i];
    return s;
}

PhysicalTrajectory physical_view(const Trajectory& traj, const OrbitModel& model) {
    const std::size_t r = model.rank();
    PhysicalTrajectory out;
    out.t = traj.ivar;
    out.g.assign(r, {});
    out.gdot.assign(r, {});
    out.u.reserve(traj.size());
    out.udot.reserve(traj.size());
    for (std::size_t j = 0; j < r; ++j) {
        out.g[j].reserve(traj.size());
        out.gdot[j].reserve(traj.size());
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto x = traj.state(i);
        if (model.kind == OrbitKind::WarpedProduct) {
            for (std::size_t j = 0; j < r; ++j) {
                out.g[j].push_back(x[j]);
                out.gdot[j].push_back(x[r + j]);
            }
            out.u.push_back(x[2 * r]);
            out.udot.push_back(x[2 * r + 1]);
        } else {
            out.g[0].push_back(x[0]);
            out.gdot[0].push_back(x[1]);
            out.g[1].push_back(x[2]);
            out.gdot[1].push_back(x[3]);
            out.u.push_back(x[4]);
            out.udot.push_back(x[5]);
        }
    }
    return out;
}

}  // namespace soliton
