#include "linkpred/error.hpp"

namespace linkpred {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::parse: return "parse";
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
        case ErrorKind::numeric: return "numeric";
    }
    return "unknown";
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message, std::size_t line) {
    std::string out = to_string(kind);
    out += " error";
    if (line != 0) {
        out += " at line ";
        out += std::to_string(line);
    }
    out += ": ";
    out += message;
    return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(kind, message, line)), kind_(kind), line_(line) {}

}  // namespace linkpred
