#pragma once

#include <stdexcept>
#include <string>

namespace soliton {

/// An operation was given a model of the wrong kind (or missing structure).
struct model_mismatch_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A state hit a pole of the equations (g_i <= 0, z1/z3 <= 0).
struct singular_state_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// The s-parameterization broke down (xi = 0, W <= 0, Y_i = 0).
struct coordinate_breakdown_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Bad run configuration (unknown keys, unparsable values, missing preset).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace soliton
