#pragma once

#include <stdexcept>
#include <string>

namespace adscreen {

// Base of every error the library throws. `code` is a stable machine-readable
// tag (used for HTTP error bodies and CLI messages); `subject` names the
// offending id, path or row when there is one.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message, std::string subject = {})
        : std::runtime_error(message), code_(std::move(code)), subject_(std::move(subject)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }

private:
    std::string code_;
    std::string subject_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& message, std::string subject = {})
        : Error("parse_error", message, std::move(subject)) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::string subject = {})
        : Error("validation_error", message, std::move(subject)) {}
};

class IoError : public Error {
public:
    IoError(const std::string& message, std::string path)
        : Error("io_error", message, std::move(path)) {}
};

} // namespace adscreen
