#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sarcd {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or shape (even kernel size, dimension mismatch, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed file header. Carries the byte offset where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Payload shorter or longer than the header promises.
class LengthError : public Error {
public:
    using Error::Error;
};

/// Value outside the representable range of an output format.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Input carries no usable contrast (e.g. a constant difference image).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Pseudo-labels lack one of the two classes, so no classifier can be trained.
class DegenerateTrainingError : public Error {
public:
    using Error::Error;
};

/// Synthetic scene description that cannot be realized.
class SpecError : public Error {
public:
    using Error::Error;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a sink for non-fatal warnings and returns the previous one.
/// The default handler writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace sarcd
