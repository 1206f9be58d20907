#include <doctest.h>

#include <cmath>

#include "soliton/asymptotics.hpp"
#include "soliton/phase.hpp"

using namespace soliton;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace

TEST_CASE("linear_fit recovers an exact line") {
    const auto x = linspace(0.0, 10.0, 101);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i] + 1.0;
    const LinearFit fit = linear_fit(x, y);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residual_rms <= 1e-12);
}

TEST_CASE("cumtrapz integrates a linear function exactly") {
    const auto x = linspace(0.0, 2.0, 21);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i];
    const auto acc = cumtrapz(x, y, 0.5);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(acc[i] == doctest::Approx(0.5 + x[i] * x[i]).epsilon(1e-14));
}

TEST_CASE("tail_window respects the minimum point count") {
    const auto x = linspace(0.0, 1.0, 200);
    FitOptions opt;
    opt.tail_fraction = 0.2;
    opt.min_points = 50;
    auto [b, e] = tail_window(x, opt);
    CHECK(e == 200);
    CHECK(e - b == 50);  // 20% of 200 = 40 < min_points
    opt.min_points = 10;
    std::tie(b, e) = tail_window(x, opt);
    CHECK(e - b == 40);
}

TEST_CASE("cone-slope fit on exact lines and its failure on exponentials") {
    PhysicalTrajectory traj;
    traj.t = linspace(0.0, 20.0, 500);
    traj.g.resize(2);
    traj.gdot.resize(2);
    traj.g[0].resize(500);
    traj.g[1].resize(500);
    for (std::size_t k = 0; k < 500; ++k) {
        traj.g[0][k] = 3.0 * traj.t[k] + 1.0;
        traj.g[1][k] = std::exp(0.4 * traj.t[k]);
    }
    traj.gdot[0].assign(500, 3.0);
    traj.gdot[1] = traj.g[1];
    traj.u.assign(500, 0.0);
    traj.udot.assign(500, 0.0);

    const auto fits = fit_cone_slopes(traj);
    REQUIRE(fits.size() == 2);
    CHECK(fits[0].ok);
    CHECK(fits[0].params[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fits[0].params[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(!fits[1].ok);  // exponential growth is not conical
}

TEST_CASE("lambda limits recover a constant X/W^2 ratio exactly") {
    const OrbitModel model = circle_warped_model({2}, {1.0});
    PhaseView v;
    v.s = linspace(1.0, 100.0, 400);
    v.W.resize(400);
    v.X.assign(2, std::vector<double>(400));
    v.Y.assign(2, std::vector<double>(400, 0.1));
    for (std::size_t k = 0; k < 400; ++k) {
        v.W[k] = 1.0 / std::sqrt(v.s[k]);
        v.X[0][k] = 0.5 * v.W[k] * v.W[k];                    // = (eps/2) sqrt(d1)
        v.X[1][k] = std::sqrt(2.0) / 2.0 * v.W[k] * v.W[k];   // = (eps/2) sqrt(d2)
    }
    v.G.assign(400, 0.0);
    v.H.assign(400, 0.0);
    v.Q.assign(400, 0.0);
    v.J.assign(400, 0.0);
    v.Lyap.assign(400, 0.0);

    const auto fits = check_lambda_limits(v, model);
    REQUIRE(fits.size() == 2);
    for (const auto& f : fits) {
        CHECK(f.ok);
        CHECK(f.params[2] <= 1e-12);  // relative deviation
    }
}

TEST_CASE("scaling laws hold exactly on W = 1/sqrt(eps s)") {
    PhaseView v;
    v.s = linspace(0.01, 100.0, 2000);
    v.W.resize(2000);
    v.G.resize(2000);
    for (std::size_t k = 0; k < 2000; ++k) {
        v.W[k] = 1.0 / std::sqrt(v.s[k]);
        v.G[k] = 0.77 * std::pow(v.W[k], 4.0);
    }
    v.X.assign(2, std::vector<double>(2000, 0.0));
    v.Y.assign(2, std::vector<double>(2000, 0.1));
    v.H.assign(2000, 0.0);
    v.Q.assign(2000, 0.0);
    v.J.assign(2000, 0.0);
    v.Lyap.assign(2000, 0.0);

    const auto fits = check_scaling_laws(v, 1.0);
    REQUIRE(fits.size() == 3);
    CHECK(fits[0].quantity == "W*sqrt(eps*s)");
    CHECK(fits[0].ok);
    CHECK(fits[0].params[1] <= 1e-12);  // exact ratio 1
    CHECK(fits[1].ok);                  // s / (eps t^2/4) within 10% on the tail
    CHECK(fits[1].params[1] <= 0.03);
    CHECK(fits[2].ok);
    CHECK(fits[2].params[0] == doctest::Approx(0.77).epsilon(1e-10));
    CHECK(fits[2].params[1] == doctest::Approx(0.77).epsilon(1e-10));
}

TEST_CASE("sigma estimate: constant ratio when X_i = 0, monotone on runs") {
    const OrbitModel model = circle_warped_model({2}, {1.0});
    PhaseView v;
    v.s = linspace(0.0, 10.0, 300);
    v.X.assign(2, std::vector<double>(300, 0.0));
    v.Y.assign(2, std::vector<double>(300, 0.25));
    v.W.assign(300, 0.5);
    v.G.assign(300, 0.0);
    v.H.assign(300, 0.0);
    v.Q.assign(300, 0.0);
    v.J.assign(300, 0.0);
    v.Lyap.assign(300, 0.0);
    const AsymptoticFit fit = estimate_sigma(v, 0);
    CHECK(fit.ok);  // monotone (trivially constant)
    CHECK(fit.params[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::fabs(fit.params[1]) <= 1e-12);
    CHECK(fit.notes.find("plateau candidate") != std::string::npos);

    // on a genuine launch W/Y_i is non-decreasing and keeps growing
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.end = 40.0;
    cfg.record_every = 10;
    PhaseSystem system(model);
    const auto x0 = p_launch(model, 1e-6, 5);
    const Trajectory traj = integrate(system, x0, 0.0, cfg);
    const PhaseView view = phase_view(traj, model);
    for (std::size_t i = 0; i < 2; ++i) {
        const AsymptoticFit f = estimate_sigma(view, i);
        CHECK(f.ok);
    }
}

TEST_CASE("einstein_convergence measures the sink and the growth rate") {
    const OrbitModel model = circle_warped_model({2}, {1.0});
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.end = 70.0;
    cfg.record_every = 10;
    PhaseSystem system(model);
    const StepTransform lock = [&](double, std::span<double> s) {
        project_einstein(model, s);
    };
    const auto x0 = einstein_launch(model, 1e-6);
    const Trajectory traj = integrate(system, x0, 0.0, cfg, nullptr, &lock);
    REQUIRE(traj.events.back().kind == EventKind::ReachedEnd);
    const PhaseView view = phase_view(traj, model);

    const AsymptoticFit fit = einstein_convergence(view, model);
    CHECK(fit.ok);
    // growth rate ~ sqrt(eps/(2n)) = sqrt(1/6)
    CHECK(std::fabs(fit.params[0] - std::sqrt(1.0 / 6.0)) / std::sqrt(1.0 / 6.0) <=
          0.05);
    CHECK(fit.params[2] <= 1e-6);  // final distance to E+
}
