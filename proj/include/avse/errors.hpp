#pragma once

#include <stdexcept>
#include <string>

namespace avse {

// Error taxonomy. Each category maps onto one failure mode of the public
// API; CLI exit codes are derived from these (see tools/).
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& msg) : std::runtime_error("invalid input: " + msg) {}
};

struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error("shape mismatch: " + msg) {}
};

struct UndefinedMetric : std::runtime_error {
    explicit UndefinedMetric(const std::string& msg) : std::runtime_error("undefined metric: " + msg) {}
};

struct InsufficientInput : std::runtime_error {
    explicit InsufficientInput(const std::string& msg) : std::runtime_error("insufficient input: " + msg) {}
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error("protocol error: " + msg) {}
};

struct CodecError : std::runtime_error {
    explicit CodecError(const std::string& msg) : std::runtime_error("codec error: " + msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error("io error: " + msg) {}
};

struct IncompleteLog : std::runtime_error {
    explicit IncompleteLog(const std::string& msg) : std::runtime_error("incomplete log: " + msg) {}
};

struct EmptyPlayback : std::runtime_error {
    explicit EmptyPlayback(const std::string& msg) : std::runtime_error("empty playback: " + msg) {}
};

}  // namespace avse
