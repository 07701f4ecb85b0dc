#pragma once

#include <stdexcept>
#include <string>

namespace mpsprep {

// Bad arguments / config: caller error.  CLI maps this to exit code 2.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure at runtime (ill-conditioned input, cap exceeded mid-run).
// CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mpsprep
