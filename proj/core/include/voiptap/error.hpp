#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace voiptap {

// Base of every error raised by the library. Each subclass maps to one
// failure category so callers (and the CLI exit-status logic) can branch on
// type rather than on message text.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid construction parameters (zero capacity, unsupported bit depth...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Signal is all zeros (or otherwise lacks the spread a statistic needs).
class DegenerateSignalError : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// Malformed WAV header; `field()` names the first field that failed.
class ParseError : public Error {
public:
    ParseError(std::string field, const std::string& detail)
        : Error("wav parse error at '" + field + "': " + detail), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DecodeError : public Error {
public:
    DecodeError(std::size_t offset, const std::string& detail)
        : Error("hex decode error at offset " + std::to_string(offset) + ": " + detail),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class StartupError : public Error {
public:
    using Error::Error;
};

class ConnectError : public Error {
public:
    using Error::Error;
};

class UploadError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

}  // namespace voiptap
