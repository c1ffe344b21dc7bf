#pragma once

#include <stdexcept>
#include <string>

namespace sevdyn {

/// Invalid inputs: parameter ranges, config fields, malformed files.
/// The message names the offending field (dotted path for config files).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure inside a solver (singular system, non-convergence).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sevdyn
