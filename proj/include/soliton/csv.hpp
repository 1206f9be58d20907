#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "soliton/asymptotics.hpp"
#include "soliton/geometry.hpp"
#include "soliton/monitors.hpp"
#include "soliton/phase.hpp"
#include "soliton/physical.hpp"

namespace soliton {

/// 17-significant-digit, '.'-decimal rendering used by every CSV writer.
std::string format_number(double value);

/// Columns: t, g_i..., gdot_i..., u, udot, xi, trL, S, E, cons1_residual,
/// ham_value. Header row, comma separators, LF line endings.
void write_physical_csv(const std::filesystem::path& path,
                        const PhysicalTrajectory& traj, const OrbitModel& model);

/// Columns: s, t, X_i..., Y_i..., W, G, H, Lyap, Q, J.
void write_phase_csv(const std::filesystem::path& path, const PhaseView& traj);

/// Columns: family, label, X_i..., Y_i..., W, eig1_re, eig1_im, ...
void write_critical_points_csv(const std::filesystem::path& path,
                               const std::vector<CriticalPoint>& points,
                               std::size_t rank);

void write_monitors_csv(const std::filesystem::path& path,
                        const std::vector<MonitorReport>& reports);

void write_fits_csv(const std::filesystem::path& path,
                    const std::vector<AsymptoticFit>& fits);

}  // namespace soliton
