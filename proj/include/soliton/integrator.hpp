#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace soliton {

/// Classical fixed-step RK4 with optional step-doubling adaptivity, a
/// startup step ramp for fields that are singular at the origin, event
/// detection, and dense sample capture. Parameterization-agnostic: the
/// independent variable may be arclength t or the slow variable s.
struct IntegratorConfig {
    double h = 1e-3;        ///< base step
    double end = 20.0;      ///< integrate until the independent variable reaches this
    bool adaptive = false;  ///< step-doubling (Richardson) error control
    double rel_tol = 1e-8;  ///< per-step tolerance in adaptive mode
    std::size_t max_steps = 100'000'000;
    double blowup_norm = 1e12;
    double floor_guard = 1e-14;            ///< minimum allowed value at floor_indices
    std::vector<std::size_t> floor_indices;  ///< state entries that must stay above the floor
    /// When > 0, steps taken near the start are capped at ivar/ramp_divisor.
    /// Used for physical startups where the vector field is singular at 0.
    double ramp_divisor = 0.0;
    std::size_t record_every = 1;  ///< sample decimation (events always recorded)
};

enum class EventKind {
    ReachedEnd,
    MaxSteps,
    StageBlowup,   // NaN/inf at an RK4 stage
    NormBlowup,    // state norm exceeded blowup_norm
    FloorGuard,    // a guarded entry fell below floor_guard
    MonitorAbort,  // an inline observer requested termination
};

std::string event_kind_name(EventKind kind);

struct Event {
    EventKind kind = EventKind::ReachedEnd;
    double location = 0.0;
    std::string detail;
};

/// Dense capture of one integration. Samples are stored row-major
/// (sample-major) in `data` with `dim` doubles per sample; `ivar` holds the
/// strictly increasing independent variable. Immutable once returned.
struct Trajectory {
    std::size_t dim = 0;
    std::vector<double> ivar;
    std::vector<double> data;
    std::vector<Event> events;
    std::uint64_t model_hash = 0;
    std::uint64_t config_hash = 0;

    std::size_t size() const { return ivar.size(); }
    std::span<const double> state(std::size_t i) const {
        return {data.data() + i * dim, dim};
    }
    std::span<const double> back() const { return state(size() - 1); }
    /// One column of the state as a fresh vector.
    std::vector<double> column(std::size_t j) const;
    bool terminated_early() const {
        return !events.empty() && events.back().kind != EventKind::ReachedEnd;
    }
};

/// FNV-1a over a string, used for trajectory provenance hashes.
std::uint64_t fnv1a(std::string_view text);

namespace detail {

inline bool finite_all(std::span<const double> x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

inline double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::fmax(m, std::fabs(v));
    return m;
}

}  // namespace detail

/// One classical RK4 step x(t) -> x(t+h). Returns false if any stage
/// produced a non-finite value (the output is then unspecified).
/// Scratch must hold 5*x.size() doubles.
template <class Field>
bool rk4_step(Field&& f, double t, double h, std::span<const double> x,
              std::span<double> out, std::span<double> scratch) {
    const std::size_t n = x.size();
    std::span<double> k1 = scratch.subspan(0, n);
    std::span<double> k2 = scratch.subspan(n, n);
    std::span<double> k3 = scratch.subspan(2 * n, n);
    std::span<double> k4 = scratch.subspan(3 * n, n);
    std::span<double> tmp = scratch.subspan(4 * n, n);

    f(t, x, k1);
    if (!detail::finite_all(k1)) return false;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(t + 0.5 * h, tmp, k2);
    if (!detail::finite_all(k2)) return false;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(t + 0.5 * h, tmp, k3);
    if (!detail::finite_all(k3)) return false;
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    f(t + h, tmp, k4);
    if (!detail::finite_all(k4)) return false;
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return true;
}

/// Convenience overload returning the stepped state.
template <class Field>
std::vector<double> rk4_step(Field&& f, double t, double h, std::span<const double> x) {
    std::vector<double> out(x.size()), scratch(5 * x.size());
    rk4_step(f, t, h, x, out, scratch);
    return out;
}

/// Per-step observer; return false to terminate with a MonitorAbort event.
using StepObserver = std::function<bool(double, std::span<const double>)>;
/// Applied to the state after every accepted step (e.g. constraint projection).
using StepTransform = std::function<void(double, std::span<double>)>;

/// Advances x0 from `start` until config.end, max_steps, or an event.
/// Samples are recorded every config.record_every accepted steps (the initial
/// state and the final state are always recorded). Deterministic: identical
/// inputs give bit-identical trajectories on one platform.
template <class Field>
Trajectory integrate(Field&& f, std::span<const double> x0, double start,
                     const IntegratorConfig& config,
                     const StepObserver* observer = nullptr,
                     const StepTransform* transform = nullptr) {
    const std::size_t n = x0.size();
    Trajectory traj;
    traj.dim = n;

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> xnew(n), xhalf(n), xfull(n), scratch(5 * n);
    double t = start;

    auto record = [&](double tv, std::span<const double> sv) {
        traj.ivar.push_back(tv);
        traj.data.insert(traj.data.end(), sv.begin(), sv.end());
    };
    auto finish = [&](EventKind kind, double loc, std::string detail = {}) {
        traj.events.push_back({kind, loc, std::move(detail)});
        return traj;
    };

    record(t, x);
    if (!detail::finite_all(x)) return finish(EventKind::StageBlowup, t, "non-finite x0");

    const double direction = config.end >= start ? 1.0 : -1.0;
    double h_next = config.h * direction;
    std::size_t steps_since_record = 0;

    for (std::size_t step = 0; step < config.max_steps; ++step) {
        if ((config.end - t) * direction <= 0.0) return finish(EventKind::ReachedEnd, t);

        double h = h_next;
        if (config.ramp_divisor > 0.0) {
            const double cap = std::fabs(t) / config.ramp_divisor;
            if (cap < std::fabs(h)) h = cap * direction;
        }
        // land exactly on the endpoint (the tolerance absorbs accumulation dust)
        if (std::fabs(h) * (1.0 + 1e-9) >= std::fabs(config.end - t))
            h = config.end - t;

        bool accepted = false;
        if (!config.adaptive) {
            if (!rk4_step(f, t, h, x, xnew, scratch))
                return finish(EventKind::StageBlowup, t);
            accepted = true;
        } else {
            // Step doubling: compare one h step against two h/2 steps.
            for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
                if (!rk4_step(f, t, h, x, xfull, scratch))
                    return finish(EventKind::StageBlowup, t);
                if (!rk4_step(f, t, 0.5 * h, x, xhalf, scratch) ||
                    !rk4_step(f, t + 0.5 * h, 0.5 * h, xhalf, xnew, scratch))
                    return finish(EventKind::StageBlowup, t);
                double err = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    err = std::fmax(err, std::fabs(xnew[i] - xfull[i]));
                err /= 15.0;
                const double tol = config.rel_tol * (1.0 + detail::max_abs(x));
                if (err <= tol) {
                    accepted = true;
                    const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
                    h_next = h * std::fmin(2.0, std::fmax(1.0, grow));
                } else {
                    h *= std::fmax(0.25, 0.9 * std::pow(tol / err, 0.2));
                }
            }
            if (!accepted) return finish(EventKind::StageBlowup, t, "adaptive step failed");
        }

        t += h;
        x = xnew;
        if (transform) (*transform)(t, x);

        if (!detail::finite_all(x)) return finish(EventKind::StageBlowup, t);
        if (detail::max_abs(x) > config.blowup_norm) {
            record(t, x);
            return finish(EventKind::NormBlowup, t);
        }
        for (std::size_t idx : config.floor_indices) {
            if (idx < n && x[idx] < config.floor_guard) {
                record(t, x);
                return finish(EventKind::FloorGuard, t, "state[" + std::to_string(idx) + "]");
            }
        }
        if (observer && !(*observer)(t, x)) {
            record(t, x);
            return finish(EventKind::MonitorAbort, t);
        }

        if (++steps_since_record >= config.record_every ||
            (config.end - t) * direction <= 0.0) {
            record(t, x);
            steps_since_record = 0;
        }
    }
    return finish(EventKind::MaxSteps, t);
}

}  // namespace soliton
