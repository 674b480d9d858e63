#pragma once

#include <stdexcept>
#include <string>

namespace airway {

// Invalid user input or malformed data: bad CSV/JSON, out-of-range flags,
// series that violate documented preconditions. The CLI maps this to exit
// code 2; anything else escaping to main() is treated as an internal error
// (exit code 3).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace airway
