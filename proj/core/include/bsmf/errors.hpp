#pragma once

#include <stdexcept>
#include <string>

namespace bsmf {

/// Malformed or inconsistent user input (bad files, invalid config, violated
/// preconditions). Maps to exit code 2 in the CLI.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix dimensions.
class ShapeError : public InputError {
public:
    explicit ShapeError(const std::string& what) : InputError(what) {}
};

/// The optimizer produced a non-finite loss. Maps to exit code 3 in the CLI.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace bsmf
