#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ncx {

enum class ErrorKind {
    parse,
    validation,
    not_found,
    limit,
    io,
    format,
    checksum,
    version,
    invalid_argument,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Library-wide exception. `kind()` is stable and machine-readable; the CLI
/// prints it as the first field of its one-line error report.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ncx
