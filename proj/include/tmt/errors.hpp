// errors.hpp -- exception taxonomy shared by all modules.

#pragma once

#include <stdexcept>
#include <string>

namespace tmt {

// Physically inconsistent parameter regime (e.g. overdamped Rabi request).
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input that is structurally valid but carries no usable content
// (zero vector, non-positive trace, grid missing the waveform support).
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& msg) : std::runtime_error(msg) {}
};

// Time grid too coarse for the requested spectrum.
struct AliasingError : std::runtime_error {
    explicit AliasingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model-level failure: covariance not PSD, factorization breakdown.
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operands defined on incompatible time grids.
struct GridMismatch : std::invalid_argument {
    explicit GridMismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

// Phase extraction found no element above threshold.
struct EmptyPhaseError : std::runtime_error {
    explicit EmptyPhaseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tmt
