#pragma once

#include "nslab/types.hpp"

#include <functional>

namespace nslab {

// Real function on the chart with an optional analytic gradient.
struct ScalarField {
    std::function<double(const Point&)> value;
    std::function<Eigen::VectorXd(const Point&)> gradient;  // may be empty

    double operator()(const Point& x) const { return value(x); }
    // Analytic gradient when present, central differences otherwise.
    Eigen::VectorXd grad(const Point& x) const;

    static ScalarField constant(double c);
    // c0 + slope . x
    static ScalarField affine(double c0, Eigen::VectorXd slope);
};

} // namespace nslab
