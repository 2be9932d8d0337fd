#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvt {

enum class ErrorKind {
    dimension,
    config,
    parse,
    length,
    degenerate,
    range,
    usage,
    io,
    compatibility,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::dimension: return "dimension";
        case ErrorKind::config: return "config";
        case ErrorKind::parse: return "parse";
        case ErrorKind::length: return "length";
        case ErrorKind::degenerate: return "degenerate";
        case ErrorKind::range: return "range";
        case ErrorKind::usage: return "usage";
        case ErrorKind::io: return "io";
        case ErrorKind::compatibility: return "compatibility";
    }
    return "unknown";
}

// All library failures surface as mvt::Error; kind() lets callers branch
// without string matching.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) {
        fail(kind, message);
    }
}

}  // namespace mvt
