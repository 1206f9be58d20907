#include "soliton/geometry.hpp"

#include <cmath>

namespace soliton {

int OrbitModel::rank() const {
    return kind == OrbitKind::WarpedProduct ? static_cast<int>(factors.size()) : 2;
}

std::vector<double> OrbitModel::dims() const {
    if (kind == OrbitKind::WarpedProduct) {
        std::vector<double> d;
        d.reserve(factors.size());
        for (const auto& f : factors) d.push_back(static_cast<double>(f.dim));
        return d;
    }
    return {static_cast<double>(d1), static_cast<double>(d2)};
}

std::vector<double> OrbitModel::lambdas() const {
    if (kind == OrbitKind::WarpedProduct) {
        std::vector<double> l;
        l.reserve(factors.size());
        for (const auto& f : factors) l.push_back(f.einstein_const);
        return l;
    }
    return {static_cast<double>(d1 - 1), d2 > 0 ? A2 / d2 : 0.0};
}

int total_dim(const OrbitModel& model) {
    if (model.kind == OrbitKind::WarpedProduct) {
        int n = 0;
        for (const auto& f : model.factors) n += f.dim;
        return n;
    }
    return model.d1 + model.d2;
}

std::vector<std::string> validate(const OrbitModel& model, double u0) {
    std::vector<std::string> out;
    if (!(model.epsilon > 0.0)) out.push_back("epsilon-nonpositive");

    if (model.kind == OrbitKind::WarpedProduct) {
        if (model.factors.empty()) out.push_back("no-factors");
        bool any_nonflat = false;
        for (std::size_t i = 0; i < model.factors.size(); ++i) {
            const auto& f = model.factors[i];
            if (f.dim < 1) out.push_back("factor-dim-below-1");
            if (f.einstein_const < 0.0) out.push_back("einstein-const-negative");
            if (f.einstein_const == 0.0 && f.dim != 1)
                out.push_back("flat-factor-not-circle");
            if (f.einstein_const > 0.0) any_nonflat = true;
        }
        if (any_nonflat && total_dim(model) < 3) out.push_back("total-dim-below-3");
        // Circle-startup models (k = 1) must collapse factor 1.
        if (model.k == 1 && !model.factors.empty()) {
            if (model.factors[0].dim != 1 || model.factors[0].einstein_const != 0.0)
                out.push_back("circle-startup-factor1");
            for (std::size_t i = 1; i < model.factors.size(); ++i)
                if (!(model.factors[i].einstein_const > 0.0))
                    out.push_back("circle-startup-lambda-nonpositive");
        }
    } else {
        if (model.d1 < 1) out.push_back("d1-below-1");
        if (model.d2 < 1) out.push_back("d2-below-1");
        if (!(model.A2 > 0.0)) out.push_back("A2-nonpositive");
        if (!(model.A3 > 0.0)) out.push_back("A3-nonpositive");
        if (model.k != model.d1) out.push_back("k-not-d1");
    }

    if (!(model.C + model.epsilon * u0 < 0.0)) out.push_back("E-nonnegative");
    return out;
}

OrbitModel example1_model(int m) {
    OrbitModel mdl;
    mdl.kind = OrbitKind::TwoSummand;
    mdl.d1 = 2;
    mdl.d2 = 4 * m;
    mdl.A2 = 2.0 * m * (m + 2);
    mdl.A3 = 0.5 * m;
    mdl.epsilon = 1.0;
    mdl.C = 0.0;
    mdl.k = mdl.d1;
    return mdl;
}

OrbitModel example2_model(int m) {
    OrbitModel mdl;
    mdl.kind = OrbitKind::TwoSummand;
    mdl.d1 = 3;
    mdl.d2 = 4 * m;
    mdl.A2 = 4.0 * m * (m + 2);
    mdl.A3 = 0.75 * m;
    mdl.epsilon = 1.0;
    mdl.C = 0.0;
    mdl.k = mdl.d1;
    return mdl;
}

OrbitModel circle_warped_model(const std::vector<int>& other_dims,
                               const std::vector<double>& other_lambdas,
                               double epsilon, double C) {
    OrbitModel mdl;
    mdl.kind = OrbitKind::WarpedProduct;
    mdl.factors.push_back({1, 0.0});
    for (std::size_t i = 0; i < other_dims.size(); ++i)
        mdl.factors.push_back({other_dims[i], other_lambdas[i]});
    mdl.epsilon = epsilon;
    mdl.C = C;
    mdl.k = 1;
    return mdl;
}

std::optional<OrbitModel> preset_model(std::string_view name) {
    for (int m = 1; m <= 4; ++m) {
        if (name == "example1-m" + std::to_string(m)) return example1_model(m);
        if (name == "example2-m" + std::to_string(m)) return example2_model(m);
    }
    if (name == "phase-r2") return circle_warped_model({2}, {1.0});
    if (name == "phase-r3") return circle_warped_model({2, 3}, {1.0, 1.0});
    return std::nullopt;
}

}  // namespace soliton
