#pragma once

#include <stdexcept>
#include <string>

namespace apch {

/// Raised when a quasi-MLE fit cannot be attempted or a calibration search
/// cannot be completed. The code distinguishes the spec'd failure modes so
/// callers can react without parsing messages.
class EstimationError : public std::runtime_error {
public:
    enum class Code {
        TooFewObservations,
        NoFeasibleCandidate,
        CalibrationFailed,
    };

    EstimationError(Code c, const std::string& what)
        : std::runtime_error(what), code_(c) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Non-finite value encountered mid-recursion; carries the offending index.
class NumericError : public std::runtime_error {
public:
    NumericError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

} // namespace apch
