#include "nslab/fd.hpp"

#include <cmath>

namespace nslab::fd {

Eigen::VectorXd gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& at, double base) {
    const double h = step(base, at);
    Eigen::VectorXd g(at.size());
    Eigen::VectorXd y = at;
    for (Eigen::Index k = 0; k < at.size(); ++k) {
        y[k] = at[k] + h;
        const double fp = f(y);
        y[k] = at[k] - h;
        const double fm = f(y);
        y[k] = at[k];
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

double derivative(const std::function<double(double)>& f, double at, double base) {
    const double h = base * (1.0 + std::abs(at));
    return (f(at + h) - f(at - h)) / (2.0 * h);
}

} // namespace nslab::fd
