#include "soliton/integrator.hpp"

namespace soliton {

std::string event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::ReachedEnd: return "reached_end";
        case EventKind::MaxSteps: return "max_steps";
        case EventKind::StageBlowup: return "stage_blowup";
        case EventKind::NormBlowup: return "norm_blowup";
        case EventKind::FloorGuard: return "floor_guard";
        case EventKind::MonitorAbort: return "monitor_abort";
    }
    return "unknown";
}

std::vector<double> Trajectory::column(std::size_t j) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = data[i * dim + j];
    return out;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace soliton
