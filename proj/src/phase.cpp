#include "soliton/phase.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

void require_warped(const OrbitModel& model, const char* who) {
    if (model.kind != OrbitKind::WarpedProduct)
        throw model_mismatch_error(std::string(who) + ": warped-product model required");
}

void require_circle(const OrbitModel& model, const char* who) {
    require_warped(model, who);
    if (model.factors.empty() || model.factors[0].dim != 1 ||
        model.factors[0].einstein_const != 0.0)
        throw model_mismatch_error(std::string(who) +
                                   ": factor 1 must be a circle (d=1, lambda=0)");
}

}  // namespace

std::size_t phase_dim(const OrbitModel& model) { return 2 * model.rank() + 1; }

std::vector<double> pack_phase(const PhaseState& state) {
    std::vector<double> x;
    x.reserve(2 * state.X.size() + 1);
    x.insert(x.end(), state.X.begin(), state.X.end());
    x.insert(x.end(), state.Y.begin(), state.Y.end());
    x.push_back(state.W);
    return x;
}

PhaseState unpack_phase(const OrbitModel& model, double s, std::span<const double> flat) {
    const std::size_t r = model.rank();
    PhaseState st;
    st.X.assign(flat.begin(), flat.begin() + r);
    st.Y.assign(flat.begin() + r, flat.begin() + 2 * r);
    st.W = flat[2 * r];
    st.s = s;
    return st;
}

PhaseSystem::PhaseSystem(const OrbitModel& model) {
    require_warped(model, "PhaseSystem");
    dims = model.dims();
    lambda = model.lambdas();
    sqrt_d.resize(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) sqrt_d[i] = std::sqrt(dims[i]);
    epsilon = model.epsilon;
}

void PhaseSystem::operator()(double, std::span<const double> x,
                             std::span<double> dx) const {
    const std::size_t r = dims.size();
    const double W = x[2 * r];
    double G = 0.0;
    for (std::size_t j = 0; j < r; ++j) G += x[j] * x[j];
    const double half_eps_w2 = 0.5 * epsilon * W * W;
    for (std::size_t i = 0; i < r; ++i) {
        const double Xi = x[i];
        const double Yi = x[r + i];
        dx[i] = Xi * (G - 1.0) + (lambda[i] / sqrt_d[i]) * Yi * Yi +
                half_eps_w2 * (sqrt_d[i] - Xi);
        dx[r + i] = Yi * (G - Xi / sqrt_d[i] - half_eps_w2);
    }
    dx[2 * r] = W * (G - half_eps_w2);
}

void rhs_phase(const OrbitModel& model, std::span<const double> state,
               std::span<double> deriv) {
    const PhaseSystem system(model);
    system(0.0, state, deriv);
}

DerivedQuantities derived(const OrbitModel& model, std::span<const double> state) {
    require_warped(model, "derived");
    const auto dims = model.dims();
    const auto lambda = model.lambdas();
    const std::size_t r = dims.size();
    const double n = total_dim(model);
    const double W = state[2 * r];

    DerivedQuantities q;
    double lamY2 = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        q.G += state[i] * state[i];
        q.H += std::sqrt(dims[i]) * state[i];
        lamY2 += lambda[i] * state[r + i] * state[r + i];
    }
    q.Lyap = q.G + lamY2 - 1.0;
    q.Q = q.G + lamY2 + 0.5 * model.epsilon * (n - 1.0) * W * W - 1.0;
    q.J = q.G - 0.5 * model.epsilon * W * W;
    q.E_over_xi2 = q.Q;
    return q;
}

void rhs_subsystem(const OrbitModel& model, std::span<const double> state,
                   std::span<double> deriv) {
    require_circle(model, "rhs_subsystem");
    const std::size_t r = model.rank();
    // Lift to the full layout with Y_1 = 0 (Y_1 feeds no other equation when
    // lambda_1 = 0), evaluate, and drop the Y_1 row.
    std::vector<double> full(2 * r + 1), dfull(2 * r + 1);
    for (std::size_t i = 0; i < r; ++i) full[i] = state[i];
    full[r] = 0.0;
    for (std::size_t i = 1; i < r; ++i) full[r + i] = state[r + i - 1];
    full[2 * r] = state[2 * r - 1];
    rhs_phase(model, full, dfull);
    for (std::size_t i = 0; i < r; ++i) deriv[i] = dfull[i];
    for (std::size_t i = 1; i < r; ++i) deriv[r + i - 1] = dfull[r + i];
    deriv[2 * r - 1] = dfull[2 * r];
}

std::vector<double> reconstruct_y1(const Trajectory& traj, const OrbitModel& model,
                                   double y1_at_s0, double s0) {
    require_circle(model, "reconstruct_y1");
    if (traj.size() == 0 || s0 < traj.ivar.front() - 1e-12 ||
        s0 > traj.ivar.back() + 1e-12)
        throw std::invalid_argument("reconstruct_y1: s0 outside sampled range");
    const std::size_t r = model.rank();
    const double sqrt_d1 = std::sqrt(model.dims()[0]);

    // cumulative trapezoid of the log-derivative
    std::vector<double> acc(traj.size(), 0.0);
    auto integrand = [&](std::size_t i) {
        const auto x = traj.state(i);
        double G = 0.0;
        for (std::size_t j = 0; j < r; ++j) G += x[j] * x[j];
        const double W = x[2 * r];
        return G - x[0] / sqrt_d1 - 0.5 * model.epsilon * W * W;
    };
    double prev = integrand(0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double cur = integrand(i);
        acc[i] = acc[i - 1] + 0.5 * (traj.ivar[i] - traj.ivar[i - 1]) * (prev + cur);
        prev = cur;
    }
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < traj.size(); ++i)
        if (std::fabs(traj.ivar[i] - s0) < std::fabs(traj.ivar[i0] - s0)) i0 = i;

    std::vector<double> y1(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        y1[i] = y1_at_s0 * std::exp(acc[i] - acc[i0]);
    return y1;
}

std::string critical_family_name(CriticalFamily family) {
    switch (family) {
        case CriticalFamily::Origin: return "origin";
        case CriticalFamily::SphereShell: return "shell";
        case CriticalFamily::SubsetRho: return "subset_rho";
        case CriticalFamily::Y1Line: return "y1_line";
        case CriticalFamily::X1Line: return "x1_line";
        case CriticalFamily::Eplus: return "E+";
        case CriticalFamily::Eminus: return "E-";
    }
    return "unknown";
}

std::vector<double> p_point(const OrbitModel& model) {
    const std::size_t r = model.rank();
    std::vector<double> x(2 * r + 1, 0.0);
    x[0] = 1.0;
    x[r] = 1.0;
    return x;
}

std::vector<double> e_point(const OrbitModel& model, int sign) {
    const auto dims = model.dims();
    const std::size_t r = dims.size();
    const double n = total_dim(model);
    std::vector<double> x(2 * r + 1, 0.0);
    for (std::size_t i = 0; i < r; ++i) x[i] = std::sqrt(dims[i]) / n;
    x[2 * r] = (sign >= 0 ? 1.0 : -1.0) * std::sqrt(2.0 / (n * model.epsilon));
    return x;
}

std::vector<CriticalPoint> critical_points(const OrbitModel& model,
                                           const CriticalPointOptions& options) {
    require_circle(model, "critical_points");
    const auto dims = model.dims();
    const auto lambda = model.lambdas();
    const std::size_t r = dims.size();
    if (r > 20)
        throw model_mismatch_error("critical_points: subset enumeration over 20 factors");
    for (std::size_t i = 1; i < r; ++i)
        if (dims[i] <= 1.0 || !(lambda[i] > 0.0))
            throw model_mismatch_error("critical_points: need d_i > 1, lambda_i > 0 for i > 1");

    std::vector<CriticalPoint> out;
    auto add = [&](CriticalFamily family, std::string label, std::vector<double> coords,
                   std::vector<double> direction = {}) {
        CriticalPoint p;
        p.family = family;
        p.label = std::move(label);
        p.coords = std::move(coords);
        p.line_direction = std::move(direction);
        if (options.with_eigenvalues)
            p.eigenvalues = linearize(model, p.coords).eigenvalues;
        out.push_back(std::move(p));
    };

    const std::vector<double> zero(2 * r + 1, 0.0);
    add(CriticalFamily::Origin, "origin", zero);

    // (ii) axis representatives of the shell, plus optional random samples
    for (std::size_t i = 0; i < r; ++i) {
        for (int sign : {+1, -1}) {
            auto x = zero;
            x[i] = sign;
            add(CriticalFamily::SphereShell,
                (sign > 0 ? "shell+X" : "shell-X") + std::to_string(i + 1), x);
        }
    }
    if (options.shell_samples > 0) {
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = 0; k < options.shell_samples; ++k) {
            auto x = zero;
            double norm2 = 0.0;
            for (std::size_t i = 0; i < r; ++i) {
                x[i] = gauss(rng);
                norm2 += x[i] * x[i];
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t i = 0; i < r; ++i) x[i] *= inv;
            add(CriticalFamily::SphereShell, "shell-sample" + std::to_string(k), x);
        }
    }

    // (iii) one point per nonempty A subset of {2..r}; positive Y branch
    for (std::uint32_t mask = 1; mask < (1u << (r - 1)); ++mask) {
        double dsum = 0.0;
        for (std::size_t i = 1; i < r; ++i)
            if (mask & (1u << (i - 1))) dsum += dims[i];
        const double rho = 1.0 / dsum;
        auto x = zero;
        std::string label = "rho{";
        bool first = true;
        for (std::size_t i = 1; i < r; ++i) {
            if (!(mask & (1u << (i - 1)))) continue;
            x[i] = std::sqrt(dims[i]) * rho;
            x[r + i] = std::sqrt(dims[i] / lambda[i] * rho * (1.0 - rho));
            if (!first) label += ",";
            label += std::to_string(i + 1);
            first = false;
        }
        label += "}";
        add(CriticalFamily::SubsetRho, label, x);
    }

    // (iv) the Y_1 axis, (v) the line through P; representative + direction
    {
        auto x = zero;
        x[r] = 1.0;
        auto dir = zero;
        dir[r] = 1.0;
        add(CriticalFamily::Y1Line, "y1_line", x, dir);
    }
    {
        auto dir = zero;
        dir[r] = 1.0;
        add(CriticalFamily::X1Line, "P", p_point(model), dir);
    }

    add(CriticalFamily::Eplus, "E+", e_point(model, +1));
    add(CriticalFamily::Eminus, "E-", e_point(model, -1));
    return out;
}

Linearization linearize(const OrbitModel& model, std::span<const double> state) {
    require_warped(model, "linearize");
    const auto dims = model.dims();
    const auto lambda = model.lambdas();
    const std::size_t r = dims.size();
    const std::size_t n = 2 * r + 1;
    const double eps = model.epsilon;
    const double W = state[2 * r];

    double G = 0.0;
    for (std::size_t j = 0; j < r; ++j) G += state[j] * state[j];
    const double half_eps_w2 = 0.5 * eps * W * W;

    Linearization lin;
    lin.n = n;
    lin.jacobian.assign(n * n, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& {
        return lin.jacobian[i * n + j];
    };

    for (std::size_t i = 0; i < r; ++i) {
        const double sd = std::sqrt(dims[i]);
        const double Xi = state[i], Yi = state[r + i];
        for (std::size_t j = 0; j < r; ++j) at(i, j) = 2.0 * Xi * state[j];
        at(i, i) += G - 1.0 - half_eps_w2;
        at(i, r + i) = 2.0 * (lambda[i] / sd) * Yi;
        at(i, 2 * r) = eps * (sd - Xi) * W;

        for (std::size_t j = 0; j < r; ++j) at(r + i, j) = 2.0 * Yi * state[j];
        at(r + i, i) -= Yi / sd;
        at(r + i, r + i) = G - Xi / sd - half_eps_w2;
        at(r + i, 2 * r) = -eps * Yi * W;
    }
    for (std::size_t j = 0; j < r; ++j) at(2 * r, j) = 2.0 * W * state[j];
    at(2 * r, 2 * r) = G - 1.5 * eps * W * W;

    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = at(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    lin.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        lin.eigenvalues[i] = {solver.eigenvalues()[i].real(),
                              solver.eigenvalues()[i].imag()};
    std::sort(lin.eigenvalues.begin(), lin.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return lin;
}

Linearization linearize_subsystem(const OrbitModel& model,
                                  std::span<const double> full_state) {
    require_circle(model, "linearize_subsystem");
    const Linearization full = linearize(model, full_state);
    const std::size_t r = model.rank();
    const std::size_t n = full.n - 1;

    Linearization lin;
    lin.n = n;
    lin.jacobian.assign(n * n, 0.0);
    auto src_index = [&](std::size_t i) { return i < r ? i : i + 1; };  // skip Y_1 = index r
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = full.jacobian[src_index(i) * full.n + src_index(j)];
            lin.jacobian[i * n + j] = v;
            m(i, j) = v;
        }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    lin.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        lin.eigenvalues[i] = {solver.eigenvalues()[i].real(),
                              solver.eigenvalues()[i].imag()};
    std::sort(lin.eigenvalues.begin(), lin.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() > b.real();
                  return a.imag() > b.imag();
              });
    return lin;
}

std::pair<double, double> einstein_residuals(const OrbitModel& model,
                                             std::span<const double> state) {
    const DerivedQuantities q = derived(model, state);
    return {q.Q, q.H - 1.0};
}

void project_einstein(const OrbitModel& model, std::span<double> state,
                      int iterations) {
    require_warped(model, "project_einstein");
    const auto dims = model.dims();
    const auto lambda = model.lambdas();
    const std::size_t r = dims.size();
    const double eps = model.epsilon;
    const double n = total_dim(model);

    for (int it = 0; it < iterations; ++it) {
        const DerivedQuantities q = derived(model, state);
        const double c1 = q.Q, c2 = q.H - 1.0;
        // gradients of Q and H
        std::vector<double> gq(2 * r + 1), gh(2 * r + 1, 0.0);
        for (std::size_t i = 0; i < r; ++i) {
            gq[i] = 2.0 * state[i];
            gq[r + i] = 2.0 * lambda[i] * state[r + i];
            gh[i] = std::sqrt(dims[i]);
        }
        gq[2 * r] = eps * (n - 1.0) * state[2 * r];
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t i = 0; i < 2 * r + 1; ++i) {
            a11 += gq[i] * gq[i];
            a12 += gq[i] * gh[i];
            a22 += gh[i] * gh[i];
        }
        const double det = a11 * a22 - a12 * a12;
        if (det == 0.0) return;
        const double l1 = (a22 * c1 - a12 * c2) / det;
        const double l2 = (a11 * c2 - a12 * c1) / det;
        for (std::size_t i = 0; i < 2 * r + 1; ++i)
            state[i] -= l1 * gq[i] + l2 * gh[i];
    }
}

std::vector<double> p_launch(const OrbitModel& model, double delta,
                             std::uint64_t seed) {
    require_circle(model, "p_launch");
    const auto dims = model.dims();
    const auto lambda = model.lambdas();
    const std::size_t r = dims.size();
    const double eps = model.epsilon;
    const double n = total_dim(model);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> comp(0.5, 1.0);
    std::uniform_real_distribution<double> slope(1.0, 2.0);

    // eigenvalue-1 part: Y_i (i >= 2) and W directions, positive components
    std::vector<double> v(2 * r + 1, 0.0);
    double norm2 = 0.0;
    for (std::size_t i = 1; i < r; ++i) {
        v[r + i] = comp(rng);
        norm2 += v[r + i] * v[r + i];
    }
    v[2 * r] = comp(rng);
    norm2 += v[2 * r] * v[2 * r];
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : v) c *= inv;

    // eigenvalue-2 part, scaled by delta; the margin on c keeps Q < 0
    double K = 0.5 * eps * (n - 1.0) * v[2 * r] * v[2 * r];
    for (std::size_t i = 1; i < r; ++i) K += lambda[i] * v[r + i] * v[r + i];
    const double c = slope(rng) + 0.5 * K + 0.5;
    const double v2norm = std::sqrt(1.25);  // |(1, 1/2)|
    v[0] -= c * delta * 1.0 / v2norm;
    v[r] -= c * delta * 0.5 / v2norm;

    double vnorm2 = 0.0;
    for (double cmp : v) vnorm2 += cmp * cmp;
    const double vinv = 1.0 / std::sqrt(vnorm2);

    std::vector<double> x = p_point(model);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta * vinv * v[i];
    return x;
}

std::vector<double> einstein_launch(const OrbitModel& model, double delta_w,
                                    double y1) {
    require_circle(model, "einstein_launch");
    const auto dims = model.dims();
    const std::size_t r = dims.size();
    const double eps = model.epsilon;
    const double n = total_dim(model);

    // X_1 = 1 - c(n-1), X_i = c sqrt(d_i); c solves Q = 0 with H = 1 exactly.
    const double disc = 4.0 - 2.0 * n * eps * delta_w * delta_w;
    if (disc < 0.0)
        throw std::invalid_argument("einstein_launch: delta_w too large");
    const double c = (2.0 - std::sqrt(disc)) / (2.0 * n);

    std::vector<double> x(2 * r + 1, 0.0);
    x[0] = 1.0 - c * (n - 1.0);
    for (std::size_t i = 1; i < r; ++i) x[i] = c * std::sqrt(dims[i]);
    x[r] = y1;
    x[2 * r] = delta_w;
    return x;
}

PhaseState phase_from_physical(const OrbitModel& model, const PhysicalState& state) {
    const auto dims = model.dims();
    const std::size_t r = dims.size();
    PhaseState out;
    out.X.resize(r);
    out.Y.resize(r);

    double trL = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        if (!(state.g[i] > 0.0))
            throw singular_state_error("phase_from_physical: g_i <= 0");
        trL += dims[i] * state.gdot[i] / state.g[i];
    }
    const double xi = -state.udot + trL;
    if (xi == 0.0)
        throw coordinate_breakdown_error("phase_from_physical: xi = 0");
    for (std::size_t i = 0; i < r; ++i) {
        const double sd = std::sqrt(dims[i]);
        out.X[i] = sd / xi * state.gdot[i] / state.g[i];
        out.Y[i] = sd / (xi * state.g[i]);
    }
    out.W = 1.0 / xi;
    out.s = state.t;
    return out;
}

PhysicalTrajectory physical_from_phase(const Trajectory& traj, const OrbitModel& model,
                                       double u_at_s0, double t_at_s0) {
    require_warped(model, "physical_from_phase");
    const auto dims = model.dims();
    const std::size_t r = dims.size();
    PhysicalTrajectory out;
    const std::size_t count = traj.size();
    out.t.resize(count);
    out.g.assign(r, std::vector<double>(count));
    out.gdot.assign(r, std::vector<double>(count));
    out.u.resize(count);
    out.udot.resize(count);

    double t = t_at_s0;
    double u = u_at_s0;
    double w_prev = 0.0, h_prev = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const auto x = traj.state(k);
        const double W = x[2 * r];
        if (!(W > 0.0))
            throw coordinate_breakdown_error("physical_from_phase: W <= 0");
        double H = 0.0;
        for (std::size_t i = 0; i < r; ++i) H += std::sqrt(dims[i]) * x[i];
        if (k > 0) {
            const double ds = traj.ivar[k] - traj.ivar[k - 1];
            t += 0.5 * ds * (w_prev + W);
            u += 0.5 * ds * ((h_prev - 1.0) + (H - 1.0));
        }
        w_prev = W;
        h_prev = H;
        out.t[k] = t;
        out.u[k] = u;
        out.udot[k] = (H - 1.0) / W;
        for (std::size_t i = 0; i < r; ++i) {
            const double Yi = x[r + i];
            if (Yi == 0.0)
                throw coordinate_breakdown_error("physical_from_phase: Y_i = 0");
            out.g[i][k] = std::sqrt(dims[i]) * W / Yi;
            out.gdot[i][k] = x[i] / Yi;
        }
    }
    return out;
}

PhaseView phase_view(const Trajectory& traj, const OrbitModel& model) {
    const std::size_t r = model.rank();
    PhaseView v;
    v.s = traj.ivar;
    v.X.assign(r, std::vector<double>(traj.size()));
    v.Y.assign(r, std::vector<double>(traj.size()));
    v.W.resize(traj.size());
    v.G.resize(traj.size());
    v.H.resize(traj.size());
    v.Lyap.resize(traj.size());
    v.Q.resize(traj.size());
    v.J.resize(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto x = traj.state(k);
        for (std::size_t i = 0; i < r; ++i) {
            v.X[i][k] = x[i];
            v.Y[i][k] = x[r + i];
        }
        v.W[k] = x[2 * r];
        const DerivedQuantities q = derived(model, x);
        v.G[k] = q.G;
        v.H[k] = q.H;
        v.Lyap[k] = q.Lyap;
        v.Q[k] = q.Q;
        v.J[k] = q.J;
    }
    return v;
}

PhaseView phase_view_from_physical(const PhysicalTrajectory& traj,
                                   const OrbitModel& model) {
    const std::size_t r = model.rank();
    PhaseView v;
    v.s = traj.t;
    v.X.assign(r, std::vector<double>(traj.size()));
    v.Y.assign(r, std::vector<double>(traj.size()));
    v.W.resize(traj.size());
    v.G.assign(traj.size(), 0.0);
    v.H.assign(traj.size(), 0.0);
    v.Lyap.assign(traj.size(), 0.0);
    v.Q.assign(traj.size(), 0.0);
    v.J.assign(traj.size(), 0.0);
    const double n = total_dim(model);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const PhaseState p = phase_from_physical(model, traj.sample(k));
        for (std::size_t i = 0; i < r; ++i) {
            v.X[i][k] = p.X[i];
            v.Y[i][k] = p.Y[i];
            v.G[k] += p.X[i] * p.X[i];
            v.H[k] += std::sqrt(model.dims()[i]) * p.X[i];
        }
        v.W[k] = p.W;
        // General-form modified energy Q = W^2 (C + eps u); the warped
        // polynomial form does not apply to two-summand curvature.
        const double E = model.C + model.epsilon * traj.u[k];
        v.Q[k] = p.W * p.W * E;
        v.Lyap[k] = v.Q[k] - 0.5 * model.epsilon * (n - 1.0) * p.W * p.W;
        v.J[k] = v.G[k] - 0.5 * model.epsilon * p.W * p.W;
    }
    return v;
}

}  // namespace soliton
