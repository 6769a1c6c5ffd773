#pragma once

#include <stdexcept>
#include <string>

namespace snlab {

/// Base class for all snlab runtime failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Flow / root-finding failures (normal-form module).
struct TrajectoryEscapeError : Error {
    explicit TrajectoryEscapeError(const std::string& msg) : Error(msg) {}
};
struct StepFailureError : Error {
    explicit StepFailureError(const std::string& msg) : Error(msg) {}
};
struct UnreachableTargetError : Error {
    explicit UnreachableTargetError(const std::string& msg) : Error(msg) {}
};
struct NoSolutionError : Error {
    explicit NoSolutionError(const std::string& msg) : Error(msg) {}
};

// Experiment-level failures.
struct CertificateFailedError : Error {
    explicit CertificateFailedError(const std::string& msg) : Error(msg) {}
};
struct IntervalNeverEscapesError : Error {
    explicit IntervalNeverEscapesError(const std::string& msg) : Error(msg) {}
};
struct NonConvergenceError : Error {
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};

// Config parsing, with the offending line number.
struct ConfigError : Error {
    int line;
    ConfigError(int line_, const std::string& msg)
        : Error("config line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

} // namespace snlab
