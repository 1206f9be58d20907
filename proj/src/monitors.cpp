#include "soliton/monitors.hpp"

#include <algorithm>
#include <cmath>

#include "soliton/asymptotics.hpp"

namespace soliton {

std::string verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Pass: return "Pass";
        case Verdict::Fail: return "Fail";
        case Verdict::NotApplicable: return "NotApplicable";
    }
    return "unknown";
}

namespace {

// Three-point Lagrange derivative, exact on quadratics; handles the
// non-uniform spacing of ramped startup samples.
std::vector<double> centered_derivative(std::span<const double> t,
                                        std::span<const double> f) {
    const std::size_t n = t.size();
    std::vector<double> out(n, 0.0);
    if (n < 3) return out;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = t[i] - t[i - 1];
        const double hp = t[i + 1] - t[i];
        out[i] = (-hp / (hm * (hm + hp))) * f[i - 1] +
                 ((hp - hm) / (hm * hp)) * f[i] +
                 (hm / (hp * (hm + hp))) * f[i + 1];
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    return out;
}

std::size_t first_index_at(std::span<const double> t, double cut) {
    std::size_t i = 0;
    while (i < t.size() && t[i] < cut) ++i;
    return i;
}

MonitorReport not_applicable(std::string name, std::string why) {
    MonitorReport r;
    r.name = std::move(name);
    r.verdict = Verdict::NotApplicable;
    r.notes = std::move(why);
    return r;
}

}  // namespace

MonitorReport check_potential(const PhysicalTrajectory& traj, const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "potential";
    const std::size_t begin = first_index_at(traj.t, ctx.startup_cut);
    if (traj.size() < begin + 3) return not_applicable(r.name, "too few samples");

    const std::vector<double> uddot = centered_derivative(traj.t, traj.udot);
    r.worst_margin = 1e300;
    for (std::size_t i = std::max<std::size_t>(begin, 1); i + 1 < traj.size(); ++i) {
        const double m = std::fmin(-traj.udot[i], -uddot[i]);
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_location = traj.t[i];
        }
    }
    r.verdict = r.worst_margin > -ctx.strict_tol() ? Verdict::Pass : Verdict::Fail;
    r.notes = "min of (-u', -u'') past t=" + std::to_string(ctx.startup_cut);
    return r;
}

namespace {

std::vector<double> trace_L(const PhysicalTrajectory& traj, const OrbitModel& model) {
    const auto dims = model.dims();
    std::vector<double> trL(traj.size(), 0.0);
    for (std::size_t k = 0; k < traj.size(); ++k)
        for (std::size_t i = 0; i < dims.size(); ++i)
            trL[k] += dims[i] * traj.gdot[i][k] / traj.g[i][k];
    return trL;
}

}  // namespace

MonitorReport check_mean_curvature(const PhysicalTrajectory& traj,
                                   const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "mean_curvature";
    if (traj.size() < 3) return not_applicable(r.name, "too few samples");
    const double bound = std::sqrt(total_dim(ctx.model) * ctx.model.epsilon / 2.0);
    const std::vector<double> trL = trace_L(traj, ctx.model);

    // The bound presumes a non-Einstein soliton. Einstein trajectories
    // attain it asymptotically (from above: on the locus W <= sqrt(2/(n eps))
    // by Cauchy-Schwarz, so trL = H/W >= bound).
    {
        const double c_shift = ctx.c_shifted();
        const double u_shift =
            ctx.normalization == Normalization::CZero ? ctx.ubar : 0.0;
        double max_abs_e = 0.0;
        for (std::size_t k = 0; k < traj.size(); ++k)
            max_abs_e = std::fmax(
                max_abs_e,
                std::fabs(c_shift + ctx.model.epsilon * (traj.u[k] - u_shift)));
        if (max_abs_e <= 1e-10) {
            MonitorReport na = not_applicable(
                r.name, "Einstein trajectory: the bound is attained asymptotically");
            na.worst_margin = bound - trL.back();
            na.worst_location = traj.t.back();
            return na;
        }
    }

    // latest sample at or above the bound; the onset is the next one
    std::size_t onset = 0;
    for (std::size_t k = traj.size(); k-- > 0;) {
        if (trL[k] >= bound) {
            onset = k + 1;
            break;
        }
    }
    if (onset >= traj.size()) {
        r.verdict = Verdict::Fail;
        r.worst_margin = bound - trL.back();
        r.worst_location = traj.t.back();
        r.notes = "trL never settles below sqrt(n*eps/2)";
        return r;
    }
    double worst = 1e300;
    for (std::size_t k = onset; k < traj.size(); ++k) {
        if (bound - trL[k] < worst) {
            worst = bound - trL[k];
            r.worst_location = traj.t[k];
        }
    }
    const double t1 = traj.t[onset];
    const bool early_enough = t1 <= 0.5 * traj.t.back();
    // a too-late onset is a failure even with a positive curvature margin
    r.worst_margin = early_enough ? worst : std::fmin(worst, 0.5 * traj.t.back() - t1);
    r.verdict = (worst > 0.0 && early_enough) ? Verdict::Pass : Verdict::Fail;
    r.notes = "t1=" + std::to_string(t1) + ", bound=" + std::to_string(bound);
    return r;
}

MonitorReport check_E_negative(const PhysicalTrajectory& traj,
                               const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "E_negative";
    // E = C~ + eps*u~ in the u(0) = 0 gauge; equal to C + eps*u when the
    // trajectory carries its own constant, and to the launch-read constant
    // for phase reconstructions.
    const double c_shift = ctx.c_shifted();
    const double u_shift =
        ctx.normalization == Normalization::CZero ? ctx.ubar : 0.0;
    double max_e = -1e300;
    double where = 0.0;
    double max_abs = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double e = c_shift + ctx.model.epsilon * (traj.u[k] - u_shift);
        max_abs = std::fmax(max_abs, std::fabs(e));
        if (e > max_e) {
            max_e = e;
            where = traj.t[k];
        }
    }
    if (max_abs <= 1e-10)
        return not_applicable(r.name, "E identically ~0 (Einstein trajectory)");
    r.worst_margin = -max_e;
    r.worst_location = where;
    r.verdict = r.worst_margin > 0.0 ? Verdict::Pass : Verdict::Fail;
    return r;
}

MonitorReport check_potential_bounds(const PhysicalTrajectory& traj,
                                     const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "potential_bounds";
    const double c_shift = ctx.c_shifted();
    if (!(c_shift < 0.0))
        return not_applicable(r.name, "shifted constant C~ is not negative");
    const double root = std::sqrt(-c_shift);
    const double eps = ctx.model.epsilon;
    const double u_shift =
        ctx.normalization == Normalization::CZero ? ctx.ubar : 0.0;

    r.worst_margin = 1e300;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double t = traj.t[k];
        const double mu = -(traj.u[k] - u_shift);  // -u~, must be in [0, bound)
        const double upper = 0.25 * eps * t * t + root * t;
        const double m = std::fmin(std::fmin(upper - mu, mu + ctx.strict_tol()),
                                   0.5 * eps * t + root - std::fabs(traj.udot[k]));
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_location = t;
        }
    }
    r.verdict = r.worst_margin > -ctx.strict_tol() ? Verdict::Pass : Verdict::Fail;
    r.notes = "sqrt(-C~)=" + std::to_string(root);
    return r;
}

MonitorReport check_gradient_lower_bound(const PhysicalTrajectory& traj,
                                         const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "gradient_lower_bound";
    const double eps = ctx.model.epsilon;
    const double lam0 = std::sqrt(total_dim(ctx.model) * eps / 2.0);
    const double c_shift = ctx.c_shifted();
    if (!(c_shift < 0.0))
        return not_applicable(r.name, "shifted constant C~ is not negative");
    const double a = lam0 + std::sqrt(-c_shift);
    const double t_min = 2.0 * std::sqrt(5.0 / eps);

    const std::vector<double> trL = trace_L(traj, ctx.model);
    std::size_t i1 = traj.size();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.t[k] > t_min && trL[k] < lam0) {
            i1 = k;
            break;
        }
    }
    if (i1 + 2 >= traj.size())
        return not_applicable(r.name, "no t1 > 2 sqrt(5/eps) with trL below the bound");

    const double t1 = traj.t[i1];
    const double slope = -traj.udot[i1] / (0.5 * eps * t1 + a);  // > 0
    const std::vector<double> uddot = centered_derivative(traj.t, traj.udot);
    const double ric_bound = 0.5 * eps * (1.0 + 0.9 * traj.udot[i1] / (0.5 * eps * t1 + a));

    r.worst_margin = 1e300;
    for (std::size_t k = i1; k + 1 < traj.size(); ++k) {
        const double grad_margin =
            -traj.udot[k] - 0.9 * slope * (0.5 * eps * traj.t[k] + a);
        const double ric_margin = ric_bound - (uddot[k] + 0.5 * eps);
        const double m = std::fmin(grad_margin, ric_margin);
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_location = traj.t[k];
        }
    }
    r.verdict = r.worst_margin > -ctx.strict_tol() ? Verdict::Pass : Verdict::Fail;
    r.notes = "t1=" + std::to_string(t1) + ", a=" + std::to_string(a);
    return r;
}

MonitorReport check_F0_lyapunov(const PhysicalTrajectory& traj,
                                const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "F0_lyapunov";
    const std::size_t begin = first_index_at(traj.t, ctx.startup_cut);
    if (traj.size() < begin + 4) return not_applicable(r.name, "too few samples");

    const auto dims = ctx.model.dims();
    const double n = total_dim(ctx.model);
    std::vector<double> f0(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const ConservedSet cs = conserved(ctx.model, traj.sample(k));
        double v = 1.0;
        for (std::size_t i = 0; i < dims.size(); ++i)
            v *= std::pow(traj.g[i][k], dims[i]);
        const double trfree2 = cs.trL2 - cs.trL * cs.trL / n;
        f0[k] = std::pow(v, 2.0 / n) * (cs.S + trfree2);
    }

    // latest increase beyond tolerance; onset is the sample after it
    std::size_t onset = begin;
    for (std::size_t k = traj.size() - 1; k > begin; --k) {
        const double tol = ctx.strict_tol() * (1.0 + std::fabs(f0[k - 1]));
        if (f0[k] - f0[k - 1] > tol) {
            onset = k;
            break;
        }
    }
    if (onset + 2 >= traj.size()) {
        r.verdict = Verdict::Fail;
        r.worst_location = traj.t.back();
        r.worst_margin = -1.0;
        r.notes = "no non-increasing tail found";
        return r;
    }
    r.worst_margin = 1e300;
    for (std::size_t k = onset + 1; k < traj.size(); ++k) {
        const double tol = ctx.strict_tol() * (1.0 + std::fabs(f0[k - 1]));
        const double m = tol - (f0[k] - f0[k - 1]);
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_location = traj.t[k];
        }
    }
    r.verdict = Verdict::Pass;
    r.notes = "non-increasing from t=" + std::to_string(traj.t[onset]);
    return r;
}

MonitorReport check_region_invariance(const PhaseView& traj, const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "region_invariance";
    if (traj.size() == 0) return not_applicable(r.name, "empty trajectory");
    if (std::fabs(traj.Q[0]) <= 1e-12)
        return not_applicable(r.name, "Q ~ 0 at start (Einstein locus)");
    if (!(traj.Q[0] < 0.0 && traj.H[0] < 1.0))
        return not_applicable(r.name, "start not inside {Q<0, H<1}");

    const double tol = std::fmax(1e-8, ctx.strict_tol());
    r.worst_margin = 1e300;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double m = std::fmin(tol - traj.Q[k], 1.0 + tol - traj.H[k]);
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_location = traj.s[k];
        }
    }
    r.verdict = r.worst_margin > 0.0 ? Verdict::Pass : Verdict::Fail;
    r.notes = "band " + std::to_string(tol);
    return r;
}

MonitorReport check_volume_growth(const PhysicalTrajectory& traj,
                                  const MonitorContext& ctx) {
    MonitorReport r;
    r.name = "volume_growth";
    if (traj.size() < 8 || traj.t.back() < 10.0)
        return not_applicable(r.name, "horizon below 10");

    const auto dims = ctx.model.dims();
    std::vector<double> v(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        double val = 1.0;
        for (std::size_t i = 0; i < dims.size(); ++i)
            val *= std::pow(traj.g[i][k], dims[i]);
        v[k] = val;
    }
    const std::vector<double> vol = cumtrapz(traj.t, v);

    const std::size_t mid = traj.size() / 2;
    const std::size_t quarter = (3 * traj.size()) / 4;
    std::vector<double> logt(traj.size() - mid);
    for (std::size_t k = mid; k < traj.size(); ++k) logt[k - mid] = std::log(traj.t[k]);
    std::span<const double> vw(vol.data() + mid, vol.size() - mid);
    const LinearFit fit = linear_fit(logt, vw);
    std::span<const double> lq(logt.data() + (quarter - mid), traj.size() - quarter);
    std::span<const double> vq(vol.data() + quarter, vol.size() - quarter);
    const LinearFit fit_quarter = linear_fit(lq, vq);

    // unbounded-trending: a clear factor over the window, or a log-slope that
    // is not decaying toward the end (a saturating volume fails both)
    const bool doubled = vol.back() > 2.0 * vol[mid];
    const double trend_margin =
        doubled ? fit.slope : fit_quarter.slope - 0.5 * fit.slope;
    const bool trend = doubled || trend_margin >= 0.0;
    r.worst_margin = std::fmin(fit.slope, trend_margin);
    r.worst_location = traj.t.back();
    r.verdict = (fit.slope > 0.0 && trend) ? Verdict::Pass : Verdict::Fail;
    r.notes = "log-fit coefficient " + std::to_string(fit.slope) +
              " (last quarter " + std::to_string(fit_quarter.slope) +
              "), vol(end)/vol(mid) = " +
              std::to_string(vol[mid] > 0 ? vol.back() / vol[mid] : 0.0);
    return r;
}

std::vector<std::string> monitor_names() {
    return {"potential",       "mean_curvature",       "E_negative",
            "potential_bounds", "gradient_lower_bound", "F0_lyapunov",
            "volume_growth"};
}

std::vector<MonitorReport> run_monitors(const PhysicalTrajectory& traj,
                                        const MonitorContext& ctx,
                                        const std::vector<std::string>& names) {
    std::vector<MonitorReport> out;
    for (const auto& name : names) {
        if (name == "potential") out.push_back(check_potential(traj, ctx));
        else if (name == "mean_curvature") out.push_back(check_mean_curvature(traj, ctx));
        else if (name == "E_negative") out.push_back(check_E_negative(traj, ctx));
        else if (name == "potential_bounds") out.push_back(check_potential_bounds(traj, ctx));
        else if (name == "gradient_lower_bound")
            out.push_back(check_gradient_lower_bound(traj, ctx));
        else if (name == "F0_lyapunov") out.push_back(check_F0_lyapunov(traj, ctx));
        else if (name == "volume_growth") out.push_back(check_volume_growth(traj, ctx));
        else {
            MonitorReport r;
            r.name = name;
            r.verdict = Verdict::NotApplicable;
            r.notes = "unknown monitor";
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace soliton
