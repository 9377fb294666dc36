#pragma once

#include <stdexcept>
#include <string>

namespace corrinv {

/// Enumeration request above a hard ceiling. Ceilings exist because every
/// enumerator here is exponential; exceeding one is a caller bug, never
/// silently truncated.
struct LimitExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// rho^(2) vanished (or underflowed) at the anchor pair, typically inside a
/// hard core. Carries the offending separation so callers can report the
/// admissible radius.
struct HardCoreViolation : std::domain_error {
    HardCoreViolation(const std::string& what, double separation_)
        : std::domain_error(what), separation(separation_) {}
    double separation = 0.0;
};

/// Malformed run configuration or input table.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace corrinv
