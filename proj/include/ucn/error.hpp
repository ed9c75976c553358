#pragma once

#include <stdexcept>
#include <string>

namespace ucn {

// Base of every library failure. Subclasses name the failure class so the CLI
// can map them to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class DegenerateVariableError : public Error {
public:
    using Error::Error;
};

class ZeroDistanceError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InstabilityError : public Error {
public:
    using Error::Error;
};

class GenerationError : public Error {
public:
    using Error::Error;
};

class ComparisonError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
public:
    using Error::Error;
};

class TemporalOrderError : public Error {
public:
    using Error::Error;
};

class WindowTooSmallError : public Error {
public:
    using Error::Error;
};

class DiscoveryError : public Error {
public:
    DiscoveryError(std::size_t target, const std::string& what)
        : Error(what), target_(target) {}
    std::size_t target() const noexcept { return target_; }

private:
    std::size_t target_;
};

}  // namespace ucn
