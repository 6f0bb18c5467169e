#pragma once

#include <stdexcept>

namespace treesub {

// Invalid input or a parameter outside its documented domain.
// The CLI maps this to exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace treesub
