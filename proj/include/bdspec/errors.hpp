// SPDX-License-Identifier: Apache-2.0

#ifndef BDSPEC_ERRORS_HPP
#define BDSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdspec {

// Thrown when a computation cannot deliver its contract (bad bracket,
// degenerate profile, residual too large).  Invalid inputs throw
// std::invalid_argument instead.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bdspec

#endif // BDSPEC_ERRORS_HPP
