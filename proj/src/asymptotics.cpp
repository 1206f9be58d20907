#include "soliton/asymptotics.hpp"

#include <algorithm>
#include <cmath>

namespace soliton {

std::string model_form_name(ModelForm form) {
    switch (form) {
        case ModelForm::Linear: return "linear";
        case ModelForm::PowerLaw: return "power_law";
        case ModelForm::LogLinear: return "log_linear";
        case ModelForm::ConstantLimit: return "constant_limit";
    }
    return "unknown";
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.slope * x[i] + fit.intercept);
        ss += e * e;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

std::vector<double> cumtrapz(std::span<const double> x, std::span<const double> y,
                             double start) {
    std::vector<double> out(x.size(), start);
    for (std::size_t i = 1; i < x.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return out;
}

std::pair<std::size_t, std::size_t> tail_window(std::span<const double> x,
                                                const FitOptions& options) {
    const std::size_t n = x.size();
    std::size_t count = static_cast<std::size_t>(options.tail_fraction * n);
    count = std::max(count, options.min_points);
    count = std::min(count, n);
    return {n - count, n};
}

std::vector<AsymptoticFit> fit_cone_slopes(const PhysicalTrajectory& traj,
                                           const FitOptions& options) {
    const auto [b, e] = tail_window(traj.t, options);
    std::span<const double> ts(traj.t.data() + b, e - b);
    std::vector<AsymptoticFit> out;
    for (std::size_t i = 0; i < traj.g.size(); ++i) {
        std::span<const double> gs(traj.g[i].data() + b, e - b);
        const LinearFit fit = linear_fit(ts, gs);
        double rms_g = 0.0;
        for (double v : gs) rms_g += v * v;
        rms_g = std::sqrt(rms_g / gs.size());

        AsymptoticFit a;
        a.quantity = "g" + std::to_string(i + 1);
        a.form = ModelForm::Linear;
        a.params = {fit.slope, fit.intercept};
        a.window_start = traj.t[b];
        a.window_end = traj.t[e - 1];
        a.residual_rms = fit.residual_rms;
        a.ok = rms_g > 0.0 && fit.residual_rms / rms_g < 1e-2;
        a.notes = "relative rms " + std::to_string(rms_g > 0 ? fit.residual_rms / rms_g : 0.0);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<AsymptoticFit> check_lambda_limits(const PhaseView& traj,
                                               const OrbitModel& model,
                                               const FitOptions& options) {
    const auto [b, e] = tail_window(traj.s, options);
    const auto dims = model.dims();
    std::vector<AsymptoticFit> out;
    for (std::size_t i = 0; i < traj.X.size(); ++i) {
        double mean = 0.0;
        for (std::size_t k = b; k < e; ++k)
            mean += traj.X[i][k] / (traj.W[k] * traj.W[k]);
        mean /= (e - b);
        const double target = 0.5 * model.epsilon * std::sqrt(dims[i]);
        const double dev = std::fabs(mean - target) / target;

        AsymptoticFit a;
        a.quantity = "X" + std::to_string(i + 1) + "/W^2";
        a.form = ModelForm::ConstantLimit;
        a.params = {mean, target, dev};
        a.window_start = traj.s[b];
        a.window_end = traj.s[e - 1];
        double ss = 0.0;
        for (std::size_t k = b; k < e; ++k) {
            const double r = traj.X[i][k] / (traj.W[k] * traj.W[k]) - mean;
            ss += r * r;
        }
        a.residual_rms = std::sqrt(ss / (e - b));
        a.ok = dev <= 0.1;
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<AsymptoticFit> check_scaling_laws(const PhaseView& traj, double epsilon,
                                              const FitOptions& options) {
    const auto [b, e] = tail_window(traj.s, options);
    const std::vector<double> t = cumtrapz(traj.s, traj.W);
    std::vector<AsymptoticFit> out;

    {
        double mean = 0.0;
        for (std::size_t k = b; k < e; ++k)
            mean += traj.W[k] * std::sqrt(epsilon * traj.s[k]);
        mean /= (e - b);
        AsymptoticFit a;
        a.quantity = "W*sqrt(eps*s)";
        a.form = ModelForm::ConstantLimit;
        a.params = {mean, std::fabs(mean - 1.0)};
        a.window_start = traj.s[b];
        a.window_end = traj.s[e - 1];
        a.ok = std::fabs(mean - 1.0) <= 0.1;
        out.push_back(std::move(a));
    }
    {
        double mean = 0.0;
        for (std::size_t k = b; k < e; ++k)
            mean += traj.s[k] / (epsilon * t[k] * t[k] / 4.0);
        mean /= (e - b);
        AsymptoticFit a;
        a.quantity = "s/(eps*t^2/4)";
        a.form = ModelForm::ConstantLimit;
        a.params = {mean, std::fabs(mean - 1.0)};
        a.window_start = traj.s[b];
        a.window_end = traj.s[e - 1];
        a.ok = std::fabs(mean - 1.0) <= 0.1;
        out.push_back(std::move(a));
    }
    {
        // bracketing constants for G against W^4 on the tail
        double a1 = 1e300, a2 = 0.0;
        for (std::size_t k = b; k < e; ++k) {
            const double w4 = traj.W[k] * traj.W[k] * traj.W[k] * traj.W[k];
            if (w4 > 0.0) {
                a1 = std::fmin(a1, traj.G[k] / w4);
                a2 = std::fmax(a2, traj.G[k] / w4);
            }
        }
        AsymptoticFit a;
        a.quantity = "G/W^4";
        a.form = ModelForm::PowerLaw;
        a.params = {a1, a2};
        a.window_start = traj.s[b];
        a.window_end = traj.s[e - 1];
        a.ok = a1 > 0.0 && a1 <= a2;
        out.push_back(std::move(a));
    }
    return out;
}

AsymptoticFit einstein_convergence(const PhaseView& traj, const OrbitModel& model,
                                   const FitOptions& options) {
    const auto dims = model.dims();
    const std::size_t r = dims.size();
    const double n = total_dim(model);
    const double target = std::sqrt(model.epsilon / (2.0 * n));
    const std::vector<double> t = cumtrapz(traj.s, traj.W);
    const auto [b, e] = tail_window(traj.s, options);

    // distance to E+ at the final sample, across all coordinates
    const double wstar = std::sqrt(2.0 / (n * model.epsilon));
    const std::size_t last = traj.size() - 1;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        const double dx = traj.X[i][last] - std::sqrt(dims[i]) / n;
        const double dy = traj.Y[i][last];
        dist2 += dx * dx + dy * dy;
    }
    dist2 += (traj.W[last] - wstar) * (traj.W[last] - wstar);
    const double dist = std::sqrt(dist2);

    // growth rate of log g_i = log(sqrt(d_i) W / Y_i) in t, for factors whose
    // Y_i stays positive on the window (degenerate Y_i = 0 slices are skipped)
    double rate_sum = 0.0;
    int rate_count = 0;
    std::string per_factor;
    std::span<const double> tw(t.data() + b, e - b);
    for (std::size_t i = 0; i < r; ++i) {
        bool usable = true;
        std::vector<double> logg(e - b);
        for (std::size_t k = b; k < e && usable; ++k) {
            if (!(traj.Y[i][k] > 0.0)) usable = false;
            else logg[k - b] = std::log(std::sqrt(dims[i]) * traj.W[k] / traj.Y[i][k]);
        }
        if (!usable) continue;
        const LinearFit fit = linear_fit(tw, logg);
        rate_sum += fit.slope;
        ++rate_count;
        per_factor += " g" + std::to_string(i + 1) + ":" + std::to_string(fit.slope);
    }
    const double rate = rate_count > 0 ? rate_sum / rate_count : 0.0;

    AsymptoticFit a;
    a.quantity = "einstein: log g growth rate";
    a.form = ModelForm::LogLinear;
    a.params = {rate, target, dist};
    a.window_start = traj.s[b];
    a.window_end = traj.s[e - 1];
    a.ok = rate_count > 0 && std::fabs(rate - target) / target <= 0.05;
    a.notes = "final |state - E+| = " + std::to_string(dist) + ";" + per_factor;
    return a;
}

AsymptoticFit estimate_sigma(const PhaseView& traj, std::size_t factor,
                             const FitOptions& options) {
    const auto [b, e] = tail_window(traj.s, options);
    std::vector<double> ratio(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k)
        ratio[k] = traj.W[k] / traj.Y[factor][k];

    // W/Y_i must be non-decreasing wherever X_i >= 0
    bool monotone = true;
    double worst = 0.0;
    for (std::size_t k = 1; k < traj.size(); ++k) {
        if (traj.X[factor][k] < 0.0) continue;
        const double d = ratio[k] - ratio[k - 1];
        if (d < -1e-10 * (1.0 + std::fabs(ratio[k]))) {
            monotone = false;
            worst = std::fmin(worst, d);
        }
    }
    std::span<const double> sw(traj.s.data() + b, e - b);
    std::span<const double> rw(ratio.data() + b, e - b);
    const LinearFit fit = linear_fit(sw, rw);
    std::vector<double> sorted(rw.begin(), rw.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const bool plateau = ratio.back() < 10.0 * median && fit.slope <= 0.0;

    AsymptoticFit a;
    a.quantity = "W/Y" + std::to_string(factor + 1);
    a.form = ModelForm::ConstantLimit;
    a.params = {ratio.back(), fit.slope, median};
    a.window_start = traj.s[b];
    a.window_end = traj.s[e - 1];
    a.residual_rms = fit.residual_rms;
    a.ok = monotone;
    a.notes = plateau ? "plateau candidate"
                      : "no finite plateau detected (consistent with divergence)";
    if (!monotone) a.notes += "; monotonicity violated by " + std::to_string(worst);
    return a;
}

}  // namespace soliton
