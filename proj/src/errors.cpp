#include "nslab/errors.hpp"
#include "nslab/types.hpp"

#include <cstdio>

namespace nslab {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::DegenerateMetric: return "degenerate metric";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::NotInvertible: return "not invertible";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::TransversalityLost: return "transversality lost";
        case ErrorKind::NoAdmissibleNu: return "no admissible nu";
        case ErrorKind::IrregularBoundary: return "irregular boundary data";
        case ErrorKind::Anisotropy: return "anisotropy";
        case ErrorKind::VelocityOutOfRange: return "velocity out of range";
        case ErrorKind::DegenerateSlope: return "degenerate W slope";
        case ErrorKind::ZeroVelocity: return "zero velocity";
        case ErrorKind::SingularParametrization: return "singular parametrization";
        case ErrorKind::OrientationAmbiguity: return "orientation ambiguity";
        case ErrorKind::Integration: return "integration";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse:
        case ErrorKind::Config:
            return 1;
        case ErrorKind::Io:
            return 3;
        default:
            return 2;
    }
}

std::string to_string(const Eigen::VectorXd& v) {
    std::string out = "(";
    char buf[32];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) out += ", ";
        out += buf;
    }
    return out + ")";
}

} // namespace nslab
