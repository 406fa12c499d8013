#pragma once

#include <stdexcept>
#include <string>

namespace mml {

/// Machine-checkable failure categories. Every validated precondition in the
/// library throws Error with one of these kinds; tests assert on the kind.
enum class ErrorKind {
    invalid_domain,
    sampling_error,
    invalid_field,
    incompatible_fields,
    invalid_radii,
    radius_too_small,
    invalid_exponent,
    inadmissible_exponents,
    truncation_below_grid,
    invalid_kernel,
    unknown_operator,
    invalid_corpus,
    invalid_coefficients,
    support_violation,
    config_error,
    io_error,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace mml
