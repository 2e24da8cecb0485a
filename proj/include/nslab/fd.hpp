#pragma once

#include "nslab/types.hpp"

#include <functional>

namespace nslab::fd {

// Step used by every central difference in the library: base * (1 + |x|_inf).
inline double step(double base, const Eigen::VectorXd& at) {
    return base * (1.0 + (at.size() ? at.cwiseAbs().maxCoeff() : 0.0));
}

inline constexpr double kDefaultBase = 1e-5;

// Central-difference gradient of a scalar function of n real arguments.
Eigen::VectorXd gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& at, double base = kDefaultBase);

// Central difference of a scalar function of one real argument.
double derivative(const std::function<double(double)>& f, double at, double base = kDefaultBase);

} // namespace nslab::fd
