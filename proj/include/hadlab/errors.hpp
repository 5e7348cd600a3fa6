#pragma once

#include <stdexcept>
#include <string>

namespace hadlab {

/// Thrown when an admissible barrier constant cannot be found below sup a.
/// Carries the best achievable g(0) so callers can report how far off the
/// request was.
class calibration_error : public std::runtime_error {
public:
    calibration_error(const std::string& what, double achievable_g0)
        : std::runtime_error(what), achievable_g0_(achievable_g0) {}
    double achievable_g0() const noexcept { return achievable_g0_; }

private:
    double achievable_g0_;
};

/// Newton (or bisection) failed to reach its tolerance.
class nonconvergence_error : public std::runtime_error {
public:
    nonconvergence_error(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// ODE integration violated its invariant monitor.
class integrator_error : public std::runtime_error {
public:
    integrator_error(const std::string& what, double worst_residual)
        : std::runtime_error(what), worst_residual_(worst_residual) {}
    double worst_residual() const noexcept { return worst_residual_; }

private:
    double worst_residual_;
};

/// Config file rejected; line is 1-based, 0 when not tied to a line.
class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Radial flux demand exceeds what the profile can carry.
class infeasibility_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hadlab
