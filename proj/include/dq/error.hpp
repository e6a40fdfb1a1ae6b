#pragma once
#include <stdexcept>
#include <string>

namespace dq {

// Problems in user-provided inputs (files, flags, dataset shape, config).
// The CLI maps this to exit code 2; any other exception exits 1.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dq
