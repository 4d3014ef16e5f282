#pragma once

#include <stdexcept>
#include <string>

namespace gradgeom {

// Numerical / domain violations (bad shapes, budgets out of range,
// degenerate references). Mapped to exit code 2 by the CLI.
struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// File and format failures. Mapped to exit code 3 by the CLI.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gradgeom
