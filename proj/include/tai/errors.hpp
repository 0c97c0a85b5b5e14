#pragma once

#include <stdexcept>
#include <string>

namespace tai {

// Bad input data or arguments: CLI maps this to exit code 1.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Network boundary failures: CLI maps this to exit code 2.
struct gateway_error : std::runtime_error {
    explicit gateway_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tai
