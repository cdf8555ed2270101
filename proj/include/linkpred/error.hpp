#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linkpred {

enum class ErrorKind { parse, validation, io, numeric };

const char* to_string(ErrorKind kind) noexcept;

/// Every failure the library reports carries one of four categories so the
/// CLI can map it to a distinct exit status. `line` is 1-based, 0 when the
/// error is not tied to an input line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::size_t line_;
};

}  // namespace linkpred
