#pragma once

#include <stdexcept>
#include <string>

namespace mckv {

/// Runtime numerical failure (blow-up, lost bracket, non-convergence).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowupError : NumericalError {
    double time;
    explicit BlowupError(double t)
        : NumericalError("solution blew up at t = " + std::to_string(t)), time(t) {}
};

}  // namespace mckv
