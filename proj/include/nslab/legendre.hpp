#pragma once

#include "nslab/geometry.hpp"
#include "nslab/symbol.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nslab {

// Points of the cotangent bundle (momentum), the tangent bundle (Lagrangian
// velocity v) and the tangent bundle with the actual velocity u, each with
// the accumulated phase s.
struct StateP {
    Point x;
    Covector p;
    double s = 0.0;
};

struct StateV {
    Point x;
    Vector v;
    double s = 0.0;
};

struct StateU {
    Point x;
    Vector u;
    double s = 0.0;
};

// Inverse Legendre map: v^i = dH/dp_i.
StateV to_velocity(const PolySymbol& sym, const StateP& st);

struct NewtonOptions {
    int max_iter = 50;
    // converged when |grad_p H - v|_inf <= tol * (1 + |v|_inf)
    double tol = 1e-12;
};

// Direct Legendre map by damped Newton iteration on grad_p H(x, p) = v,
// started from `guess`. Throws NotInvertible on a singular p-Hessian and
// Convergence when the residual does not drop below tolerance.
StateP to_momentum(const PolySymbol& sym, const StateV& st, const Covector& guess,
                   const NewtonOptions& opts = {});

// l = p_i dH/dp_i - H, the Lagrange function at the image of p.
double lagrange_value(const PolySymbol& sym, const Point& x, const Covector& p);

// Fiberwise spherically symmetric Lagrangian L(x, |v|). Spatial gradients are
// taken at fixed speed, which is what the covariant spatial gradient reduces
// to for such fields.
struct SphericalLagrangian {
    std::function<double(const Point&, double)> L;
    std::function<double(const Point&, double)> L1;  // dL/dv
    std::function<double(const Point&, double)> L2;  // d^2L/dv^2
    std::function<Covector(const Point&, double)> gradx_L;
    std::function<Covector(const Point&, double)> gradx_L1;
    double v_min = 1e-12;
    double v_max = 1e6;
};

// Lagrange function of `sym` restricted to speeds, after checking that it does
// not depend on the direction of v at the probe points. Throws Anisotropy
// when the directional spread exceeds 1e-8 (1 + |L|).
SphericalLagrangian spherical_from_symbol(const PolySymbol& sym, const MetricChart& chart,
                                          std::vector<Point> probe_points = {});

// u-representation W(x, |u|) of the Hamilton function.
struct WField {
    std::function<double(const Point&, double)> W;
    std::function<double(const Point&, double)> W1;  // dW/du
    std::function<Covector(const Point&, double)> gradx_W;
    int epsilon = 1;
};

// Builds W by solving u = epsilon / L'(x, v) for v. epsilon is the sign of L'
// at (reference, reference_speed) and must not change afterwards.
WField build_W(const SphericalLagrangian& lag, const Point& reference, double reference_speed = 1.0);

// Speed v on the Lagrangian side matching the actual speed u at x.
double speed_for_u(const SphericalLagrangian& lag, int epsilon, const Point& x, double u);

struct GradientIdentityReport {
    double max_residual = 0.0;
    int worst_sample = -1;
    std::vector<double> residuals;
};

// max over samples of |nabla_k L(x, v(p)) + nabla_k H(x, p)|, the spatial
// gradient of L computed by central differences through the Legendre map.
GradientIdentityReport check_gradient_identity(const PolySymbol& sym, const MetricChart& chart,
                                     const std::vector<StateP>& samples);

namespace lagrangians {

// L = v^2/4 + n(x)^2, the Lagrangian of |p|^2 - n(x)^2.
SphericalLagrangian index_medium(ScalarField index);

} // namespace lagrangians

namespace wfields {

// W = 1/u^2 - n(x)^2 with epsilon = +1.
WField index_medium(ScalarField index);

// W given by a function of (x, u); derivatives by central differences.
WField from_function(std::function<double(const Point&, double)> W, int epsilon);

} // namespace wfields

} // namespace nslab
