#pragma once

#include <stdexcept>
#include <string>

namespace dcmg {

/// Bad physical value or malformed argument (finite-ness, sign, range).
struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// NII is undefined for a zero-power load.
struct UndefinedImpedance : std::domain_error {
    using std::domain_error::domain_error;
};

/// b(x) fell below the invertibility floor; the control law cannot divide.
struct SingularLinearization : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A controller intermediate went non-finite.
struct ControllerFault : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bus voltage reached zero with the CPL still drawing power.
struct PlantCollapse : std::runtime_error {
    PlantCollapse(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time = 0.0;
};

/// Integrator produced a non-finite state.
struct NumericalBlowup : std::runtime_error {
    NumericalBlowup(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time = 0.0;
};

/// Configuration file could not be parsed or validated.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dcmg
