#pragma once

#include <stdexcept>
#include <string>

namespace pmflow {

/// Raised on invalid configuration (grid dimensions, well rates, bad input files, ...).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace units {

// Internal unit system is strict SI (m, s, Pa, kg).
inline constexpr double milli_darcy = 9.869233e-16; // m^2
inline constexpr double day = 86400.0;              // s
inline constexpr double gravity = 9.81;             // m/s^2

} // namespace units

} // namespace pmflow
