#pragma once

#include <stdexcept>
#include <string>

namespace nslab {

// Failure categories. The CLI maps them onto exit codes (see exit_code_for).
enum class ErrorKind {
    Domain,
    DegenerateMetric,
    Shape,
    NotInvertible,
    Convergence,
    TransversalityLost,
    NoAdmissibleNu,
    IrregularBoundary,
    Anisotropy,
    VelocityOutOfRange,
    DegenerateSlope,
    ZeroVelocity,
    SingularParametrization,
    OrientationAmbiguity,
    Integration,
    Parse,
    Config,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// 0 ok, 1 config error, 2 numeric failure, 3 I/O error.
int exit_code_for(ErrorKind kind);

} // namespace nslab
