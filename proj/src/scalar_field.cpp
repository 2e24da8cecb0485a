#include "nslab/scalar_field.hpp"

#include "nslab/fd.hpp"

namespace nslab {

Eigen::VectorXd ScalarField::grad(const Point& x) const {
    if (gradient) return gradient(x);
    return fd::gradient([this](const Eigen::VectorXd& y) { return value(Point(y)); }, x.values());
}

ScalarField ScalarField::constant(double c) {
    return ScalarField{[c](const Point&) { return c; },
                       [](const Point& x) { return Eigen::VectorXd::Zero(x.size()).eval(); }};
}

ScalarField ScalarField::affine(double c0, Eigen::VectorXd slope) {
    return ScalarField{[c0, slope](const Point& x) { return c0 + slope.dot(x.values()); },
                       [slope](const Point&) { return slope; }};
}

} // namespace nslab
