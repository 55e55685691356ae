#pragma once

#include <stdexcept>
#include <string>

namespace pmdep {

// Bad user input: unreadable files, unknown columns, invalid flags,
// out-of-range parameters. Maps to a distinct CLI exit code.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Data that is structurally valid but statistically unusable:
// all-zero residuals, constant response, empty split halves.
class degenerate_error : public std::runtime_error {
public:
    explicit degenerate_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace pmdep
