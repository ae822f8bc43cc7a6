#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

// Error taxonomy. Everything derived from invalid_parameter is a precondition /
// configuration problem (CLI exit 2); everything derived from numerical_error is a
// runtime numerics failure (CLI exit 3).

namespace dwdirac {

namespace detail {
inline std::string error_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}
} // namespace detail

struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct spacing_too_small : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

struct invalid_window : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

struct invalid_sample : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

struct no_exact_zero_mode : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

struct not_implemented : invalid_parameter {
    using invalid_parameter::invalid_parameter;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// quadrature / iterative process did not reach its tolerance
struct tolerance_not_met : numerical_error {
    tolerance_not_met(const std::string& what, double achieved_, double requested_)
        : numerical_error(what + " (achieved " + detail::error_value(achieved_) +
                          ", requested " + detail::error_value(requested_) + ")"),
          achieved(achieved_), requested(requested_) {}
    double achieved;
    double requested;
};

struct resolvent_failure : numerical_error {
    using numerical_error::numerical_error;
};

struct reconstruction_failure : numerical_error {
    reconstruction_failure(const std::string& what, double residual_)
        : numerical_error(what + " (residual " + detail::error_value(residual_) + ")"),
          residual(residual_) {}
    double residual;
};

struct eigenvector_failure : numerical_error {
    using numerical_error::numerical_error;
};

struct integration_failure : numerical_error {
    using numerical_error::numerical_error;
};

} // namespace dwdirac
