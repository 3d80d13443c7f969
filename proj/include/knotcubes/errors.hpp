#pragma once

#include <stdexcept>
#include <string>

namespace knotcubes {

// Input violates a documented precondition or structural invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry is too degenerate for the requested computation; callers may
// perturb and retry.
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : ValidationError {
    explicit DimensionMismatch(const std::string& msg) : ValidationError(msg) {}
};

} // namespace knotcubes
