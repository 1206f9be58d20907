#include "soliton/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "soliton/errors.hpp"

namespace soliton {

namespace {

std::string trim(std::string_view sv) {
    std::size_t b = 0, e = sv.size();
    while (b < e && std::isspace(static_cast<unsigned char>(sv[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(sv[e - 1]))) --e;
    return std::string(sv.substr(b, e - b));
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("bad numeric value for " + key + ": '" + value + "'");
    }
}

long long to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw config_error("bad integer value for " + key + ": '" + value + "'");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw config_error("bad boolean value for " + key + ": '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(trimmed.substr(0, eq));
        const std::string value = trim(trimmed.substr(eq + 1));
        if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
        out[key] = value;
    }
    return out;
}

void apply_preset(RunConfig& config, std::string_view name) {
    const auto model = preset_model(name);
    if (!model) throw config_error("unknown preset '" + std::string(name) + "'");
    config.model = *model;
    config.preset = std::string(name);
    if (model->kind == OrbitKind::TwoSummand) {
        config.startup = StartupKind::Series;
        config.normalization = Normalization::CZero;
        config.hbar = 6.0;
        config.ubar = -1.0;
        config.integrator.end = 20.0;
        config.integrator.ramp_divisor = 16.0;
        config.integrator.floor_indices = {0, 2};
    } else {
        config.startup = StartupKind::PhaseLaunch;
        config.integrator.end = 200.0;
        config.integrator.ramp_divisor = 0.0;
        config.integrator.record_every = 10;
        config.integrator.floor_indices.clear();
    }
}

RunConfig run_config_from_text(const std::string& text) {
    const auto kv = parse_flat_config(text);
    RunConfig config;

    // preset first so explicit keys can override its choices
    if (auto it = kv.find("model.preset"); it != kv.end()) apply_preset(config, it->second);

    bool end_set = false;
    for (const auto& [key, value] : kv) {
        if (key == "model.preset") continue;
        if (key == "model.kind") {
            if (value == "warped") config.model.kind = OrbitKind::WarpedProduct;
            else if (value == "two_summand") config.model.kind = OrbitKind::TwoSummand;
            else throw config_error("model.kind must be warped|two_summand");
        } else if (key == "model.d1") config.model.d1 = static_cast<int>(to_int(key, value));
        else if (key == "model.d2") config.model.d2 = static_cast<int>(to_int(key, value));
        else if (key == "model.A2") config.model.A2 = to_double(key, value);
        else if (key == "model.A3") config.model.A3 = to_double(key, value);
        else if (key == "model.dims") {
            config.model.factors.clear();
            for (const auto& item : split_list(value))
                config.model.factors.push_back({static_cast<int>(to_int(key, item)), 0.0});
        } else if (key == "model.lambdas") {
            const auto items = split_list(value);
            if (items.size() != config.model.factors.size())
                throw config_error("model.lambdas length differs from model.dims");
            for (std::size_t i = 0; i < items.size(); ++i)
                config.model.factors[i].einstein_const = to_double(key, items[i]);
        } else if (key == "model.epsilon") config.model.epsilon = to_double(key, value);
        else if (key == "model.C") config.model.C = to_double(key, value);
        else if (key == "model.k") config.model.k = static_cast<int>(to_int(key, value));
        else if (key == "normalization") {
            if (value == "u0_zero") config.normalization = Normalization::PotentialZeroAtOrigin;
            else if (value == "c_zero") config.normalization = Normalization::CZero;
            else throw config_error("normalization must be u0_zero|c_zero");
        } else if (key == "startup.kind") {
            if (value == "series") config.startup = StartupKind::Series;
            else if (value == "phase") config.startup = StartupKind::PhaseLaunch;
            else if (value == "einstein") config.startup = StartupKind::EinsteinLaunch;
            else throw config_error("startup.kind must be series|phase|einstein");
        } else if (key == "startup.hbar") config.hbar = to_double(key, value);
        else if (key == "startup.ubar") config.ubar = to_double(key, value);
        else if (key == "startup.order") config.order = static_cast<int>(to_int(key, value));
        else if (key == "startup.t0") config.t0 = to_double(key, value);
        else if (key == "startup.delta") config.delta = to_double(key, value);
        else if (key == "startup.seed") config.seed = static_cast<std::uint64_t>(to_int(key, value));
        else if (key == "startup.y1") config.y1 = to_double(key, value);
        else if (key == "integrator.h") config.integrator.h = to_double(key, value);
        else if (key == "integrator.end") { config.integrator.end = to_double(key, value); end_set = true; }
        else if (key == "integrator.adaptive") config.integrator.adaptive = to_bool(key, value);
        else if (key == "integrator.rel_tol") config.integrator.rel_tol = to_double(key, value);
        else if (key == "integrator.max_steps")
            config.integrator.max_steps = static_cast<std::size_t>(to_int(key, value));
        else if (key == "integrator.blowup_norm") config.integrator.blowup_norm = to_double(key, value);
        else if (key == "integrator.floor_guard") config.integrator.floor_guard = to_double(key, value);
        else if (key == "integrator.record_every")
            config.integrator.record_every = static_cast<std::size_t>(to_int(key, value));
        else if (key == "integrator.ramp_divisor") config.integrator.ramp_divisor = to_double(key, value);
        else if (key == "run.min_horizon") config.min_horizon = to_double(key, value);
        else if (key == "monitors") {
            config.monitors.clear();
            if (value != "all")
                for (const auto& item : split_list(value)) config.monitors.push_back(item);
        } else if (key == "fits.tail_fraction") config.fits.tail_fraction = to_double(key, value);
        else if (key == "fits.min_points")
            config.fits.min_points = static_cast<std::size_t>(to_int(key, value));
        else if (key == "sweep.hbar") {
            config.sweep_hbar.clear();
            for (const auto& item : split_list(value)) config.sweep_hbar.push_back(to_double(key, item));
        } else if (key == "sweep.ubar") {
            config.sweep_ubar.clear();
            for (const auto& item : split_list(value)) config.sweep_ubar.push_back(to_double(key, item));
        } else if (key == "sweep.seeds") {
            config.sweep_seeds.clear();
            for (const auto& item : split_list(value))
                config.sweep_seeds.push_back(static_cast<std::uint64_t>(to_int(key, item)));
        } else if (key == "sweep.workers") config.workers = static_cast<int>(to_int(key, value));
        else if (key == "output.plots") config.plots = to_bool(key, value);
        else throw config_error("unknown config key '" + key + "'");
    }
    if (config.model.kind == OrbitKind::TwoSummand && config.model.factors.empty() &&
        config.integrator.floor_indices.empty())
        config.integrator.floor_indices = {0, 2};
    if (!end_set && config.startup != StartupKind::Series &&
        config.preset.empty())
        config.integrator.end = 200.0;
    return config;
}

std::string canonical_config_text(const RunConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "kind=" << (c.model.kind == OrbitKind::WarpedProduct ? "warped" : "two_summand");
    if (c.model.kind == OrbitKind::WarpedProduct) {
        os << " dims=";
        for (const auto& f : c.model.factors) os << f.dim << ",";
        os << " lambdas=";
        for (const auto& f : c.model.factors) os << f.einstein_const << ",";
    } else {
        os << " d1=" << c.model.d1 << " d2=" << c.model.d2 << " A2=" << c.model.A2
           << " A3=" << c.model.A3;
    }
    os << " eps=" << c.model.epsilon << " C=" << c.model.C << " k=" << c.model.k;
    os << " norm=" << (c.normalization == Normalization::CZero ? "c_zero" : "u0_zero");
    os << " startup=" << static_cast<int>(c.startup);
    os << " hbar=" << c.hbar << " ubar=" << c.ubar << " order=" << c.order
       << " t0=" << c.t0 << " delta=" << c.delta << " seed=" << c.seed
       << " y1=" << c.y1;
    os << " h=" << c.integrator.h << " end=" << c.integrator.end
       << " adaptive=" << c.integrator.adaptive << " rel_tol=" << c.integrator.rel_tol
       << " max_steps=" << c.integrator.max_steps
       << " blowup=" << c.integrator.blowup_norm
       << " floor=" << c.integrator.floor_guard
       << " record_every=" << c.integrator.record_every
       << " ramp=" << c.integrator.ramp_divisor;
    return os.str();
}

}  // namespace soliton
