#pragma once

#include <stdexcept>
#include <string>

namespace honest {

// Thrown when a sigma^2 estimation window cannot fit inside the model
// dimension (finite sequence model with beta too small).
struct infeasible_window_error : std::runtime_error {
    explicit infeasible_window_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when the cut-off rule is incompatible with a finite model dimension.
struct infeasible_cutoff_error : std::runtime_error {
    explicit infeasible_cutoff_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace honest
