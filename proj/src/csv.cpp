#include "soliton/csv.hpp"

#include <cstdio>
#include <fstream>

#include "soliton/errors.hpp"

namespace soliton {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::ofstream open_lf(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    return out;
}

}  // namespace

void write_physical_csv(const std::filesystem::path& path,
                        const PhysicalTrajectory& traj, const OrbitModel& model) {
    auto out = open_lf(path);
    const std::size_t r = traj.g.size();
    out << "t";
    for (std::size_t i = 1; i <= r; ++i) out << ",g" << i;
    for (std::size_t i = 1; i <= r; ++i) out << ",gdot" << i;
    out << ",u,udot,xi,trL,S,E,cons1_residual,ham_value\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const ConservedSet cs = conserved(model, traj.sample(k));
        out << format_number(traj.t[k]);
        for (std::size_t i = 0; i < r; ++i) out << ',' << format_number(traj.g[i][k]);
        for (std::size_t i = 0; i < r; ++i) out << ',' << format_number(traj.gdot[i][k]);
        out << ',' << format_number(traj.u[k]) << ',' << format_number(traj.udot[k])
            << ',' << format_number(cs.xi) << ',' << format_number(cs.trL) << ','
            << format_number(cs.S) << ',' << format_number(cs.E) << ','
            << format_number(cs.cons1_residual) << ',' << format_number(cs.ham_value)
            << '\n';
    }
}

void write_phase_csv(const std::filesystem::path& path, const PhaseView& traj) {
    auto out = open_lf(path);
    const std::size_t r = traj.X.size();
    const std::vector<double> t = cumtrapz(traj.s, traj.W);
    out << "s,t";
    for (std::size_t i = 1; i <= r; ++i) out << ",X" << i;
    for (std::size_t i = 1; i <= r; ++i) out << ",Y" << i;
    out << ",W,G,H,Lyap,Q,J\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_number(traj.s[k]) << ',' << format_number(t[k]);
        for (std::size_t i = 0; i < r; ++i) out << ',' << format_number(traj.X[i][k]);
        for (std::size_t i = 0; i < r; ++i) out << ',' << format_number(traj.Y[i][k]);
        out << ',' << format_number(traj.W[k]) << ',' << format_number(traj.G[k]) << ','
            << format_number(traj.H[k]) << ',' << format_number(traj.Lyap[k]) << ','
            << format_number(traj.Q[k]) << ',' << format_number(traj.J[k]) << '\n';
    }
}

void write_critical_points_csv(const std::filesystem::path& path,
                               const std::vector<CriticalPoint>& points,
                               std::size_t rank) {
    auto out = open_lf(path);
    out << "family,label";
    for (std::size_t i = 1; i <= rank; ++i) out << ",X" << i;
    for (std::size_t i = 1; i <= rank; ++i) out << ",Y" << i;
    out << ",W";
    for (std::size_t i = 1; i <= 2 * rank + 1; ++i)
        out << ",eig" << i << "_re,eig" << i << "_im";
    out << '\n';
    for (const auto& p : points) {
        out << critical_family_name(p.family) << ',' << p.label;
        for (double c : p.coords) out << ',' << format_number(c);
        for (std::size_t i = 0; i < 2 * rank + 1; ++i) {
            if (i < p.eigenvalues.size())
                out << ',' << format_number(p.eigenvalues[i].real()) << ','
                    << format_number(p.eigenvalues[i].imag());
            else
                out << ",,";
        }
        out << '\n';
    }
}

void write_monitors_csv(const std::filesystem::path& path,
                        const std::vector<MonitorReport>& reports) {
    auto out = open_lf(path);
    out << "name,verdict,worst_margin,worst_location,notes\n";
    for (const auto& rep : reports) {
        std::string notes = rep.notes;
        for (char& c : notes)
            if (c == ',') c = ';';
        out << rep.name << ',' << verdict_name(rep.verdict) << ','
            << format_number(rep.worst_margin) << ','
            << format_number(rep.worst_location) << ',' << notes << '\n';
    }
}

void write_fits_csv(const std::filesystem::path& path,
                    const std::vector<AsymptoticFit>& fits) {
    auto out = open_lf(path);
    out << "quantity,form,ok,window_start,window_end,residual_rms,params,notes\n";
    for (const auto& fit : fits) {
        std::string params;
        for (std::size_t i = 0; i < fit.params.size(); ++i) {
            if (i) params += ';';
            params += format_number(fit.params[i]);
        }
        std::string notes = fit.notes;
        for (char& c : notes)
            if (c == ',') c = ';';
        std::string quantity = fit.quantity;
        for (char& c : quantity)
            if (c == ',') c = ';';
        out << quantity << ',' << model_form_name(fit.form) << ','
            << (fit.ok ? "1" : "0") << ',' << format_number(fit.window_start) << ','
            << format_number(fit.window_end) << ',' << format_number(fit.residual_rms)
            << ',' << params << ',' << notes << '\n';
    }
}

}  // namespace soliton
