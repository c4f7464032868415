#pragma once

#include <stdexcept>
#include <string>

namespace pafour {

/// Rejected parameters or inputs that violate an operation's precondition.
class ValidationError : public std::invalid_argument {
public:
    enum class Code {
        odd_length,
        odd_oversampled_length,
        window_too_wide,
        window_too_narrow,
        length_mismatch,
        shape_mismatch,
        non_square,
        bad_parameter,
        outside_domain,
        zero_reference,
    };

    ValidationError(Code code, const std::string& what)
        : std::invalid_argument(what), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

/// Malformed or unreadable grid/image files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pafour
