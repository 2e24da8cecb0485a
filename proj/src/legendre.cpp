#include "nslab/legendre.hpp"

#include "nslab/errors.hpp"
#include "nslab/fd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nslab {

StateV to_velocity(const PolySymbol& sym, const StateP& st) {
    return StateV{st.x, grad_p(sym, st.x, st.p), st.s};
}

StateP to_momentum(const PolySymbol& sym, const StateV& st, const Covector& guess, const NewtonOptions& opts) {
    const Eigen::VectorXd& v = st.v.values();
    const double tol = opts.tol * (1.0 + st.v.norm_inf());
    Covector p = guess;
    Eigen::VectorXd r = grad_p(sym, st.x, p).values() - v;
    double rnorm = r.cwiseAbs().maxCoeff();
    for (int it = 0; it < opts.max_iter && rnorm > tol; ++it) {
        const Matrix J = hess_p(sym, st.x, p);
        Eigen::FullPivLU<Matrix> lu(J);
        if (!lu.isInvertible()) {
            throw Error(ErrorKind::NotInvertible,
                        "Legendre map not invertible here: singular p-Hessian at p = " + to_string(p.values()));
        }
        const Eigen::VectorXd dp = lu.solve(-r);
        double lambda = 1.0;
        Covector trial = p;
        Eigen::VectorXd rt;
        double tnorm = 0.0;
        for (;;) {
            trial = Covector(p.values() + lambda * dp);
            rt = grad_p(sym, st.x, trial).values() - v;
            tnorm = rt.cwiseAbs().maxCoeff();
            if (tnorm <= rnorm || lambda < 1e-10) break;
            lambda *= 0.5;
        }
        p = trial;
        r = rt;
        rnorm = tnorm;
    }
    if (!(rnorm <= tol)) {
        std::ostringstream os;
        os << "Legendre inversion did not converge in " << opts.max_iter << " iterations, residual " << rnorm;
        throw Error(ErrorKind::Convergence, os.str());
    }
    return StateP{st.x, p, st.s};
}

double lagrange_value(const PolySymbol& sym, const Point& x, const Covector& p) {
    return pair(p, grad_p(sym, x, p)) - eval_H(sym, x, p);
}

namespace {

// Unit vector (in the metric) along the first coordinate axis.
Vector radial_direction(const MetricChart& chart, const Point& x, int axis = 0) {
    Vector e = Vector::zero(chart.dim());
    e[axis] = 1.0;
    return e / norm(chart, x, e);
}

Covector momentum_at_speed(const PolySymbol& sym, const MetricChart& chart, const Point& x, const Vector& dir,
                           double speed) {
    const Vector v = dir * speed;
    return to_momentum(sym, StateV{x, v, 0.0}, lower(chart, x, v)).p;
}

std::vector<Point> default_probes(const MetricChart& chart) {
    const int n = chart.dim();
    Point centre = Point::zero(n);
    for (int i = 0; i < n; ++i) {
        const auto [lo, hi] = chart.domain().bounds[static_cast<size_t>(i)];
        const double a = std::max(lo, -1.0), b = std::min(hi, 1.0);
        centre[i] = a <= b ? 0.5 * (a + b) : 0.5 * (lo + hi);
    }
    std::vector<Point> probes{centre};
    for (int i = 0; i < n; ++i) {
        for (double off : {-0.3, 0.3}) {
            Point y = centre;
            y[i] += off;
            if (chart.domain().contains(y)) probes.push_back(y);
        }
    }
    return probes;
}

} // namespace

SphericalLagrangian spherical_from_symbol(const PolySymbol& sym, const MetricChart& chart,
                                          std::vector<Point> probe_points) {
    if (probe_points.empty()) probe_points = default_probes(chart);
    const int n = chart.dim();
    for (const Point& x : probe_points) {
        std::vector<Vector> dirs;
        for (int i = 0; i < n; ++i) {
            Vector e = Vector::zero(n);
            e[i] = 1.0;
            dirs.push_back(e / norm(chart, x, e));
            for (int j = i + 1; j < n; ++j) {
                Vector d = Vector::zero(n);
                d[i] = 1.0;
                d[j] = (i + j) % 2 ? -0.7 : 0.7;
                dirs.push_back(d / norm(chart, x, d));
            }
        }
        for (double speed : {0.5, 1.0, 2.0}) {
            double lo = INFINITY, hi = -INFINITY;
            for (const Vector& d : dirs) {
                const double l = lagrange_value(sym, x, momentum_at_speed(sym, chart, x, d, speed));
                lo = std::min(lo, l);
                hi = std::max(hi, l);
            }
            if (hi - lo > 1e-8 * (1.0 + std::abs(hi))) {
                std::ostringstream os;
                os << "symbol not fiberwise spherically symmetric: Lagrangian spread " << (hi - lo) << " at x = "
                   << to_string(x.values()) << ", speed " << speed;
                throw Error(ErrorKind::Anisotropy, os.str());
            }
        }
    }

    SphericalLagrangian lag;
    lag.L = [sym, chart](const Point& x, double v) {
        const Vector e = radial_direction(chart, x);
        return lagrange_value(sym, x, momentum_at_speed(sym, chart, x, e, v));
    };
    // dL/dv^b = p_b, so L' = p(v e) . e
    lag.L1 = [sym, chart](const Point& x, double v) {
        const Vector e = radial_direction(chart, x);
        return pair(momentum_at_speed(sym, chart, x, e, v), e);
    };
    // dp/dv = (d^2H/dp^2)^{-1} e
    lag.L2 = [sym, chart](const Point& x, double v) {
        const Vector e = radial_direction(chart, x);
        const Covector p = momentum_at_speed(sym, chart, x, e, v);
        const Matrix J = hess_p(sym, x, p);
        return e.values().dot(J.fullPivLu().solve(e.values()));
    };
    lag.gradx_L = [L = lag.L](const Point& x, double v) {
        return Covector(fd::gradient([&](const Eigen::VectorXd& y) { return L(Point(y), v); }, x.values()));
    };
    lag.gradx_L1 = [L1 = lag.L1](const Point& x, double v) {
        return Covector(fd::gradient([&](const Eigen::VectorXd& y) { return L1(Point(y), v); }, x.values()));
    };
    return lag;
}

double speed_for_u(const SphericalLagrangian& lag, int epsilon, const Point& x, double u) {
    if (!(u > 0.0)) throw Error(ErrorKind::ZeroVelocity, "actual speed must be positive");
    // L' is monotone in v (L'' != 0), so f has at most one root.
    const double target = epsilon / u;
    auto f = [&](double v) { return lag.L1(x, v) - target; };
    double a = std::clamp(1.0, lag.v_min, lag.v_max);
    double fa = f(a);
    if (fa == 0.0) return a;
    // walk away from a in the direction where f changes sign
    const bool up = (fa < 0.0) == (lag.L2(x, a) > 0.0);
    double b = a, fb = fa;
    auto out_of_range = [&] {
        std::ostringstream os;
        os << "velocity out of range for requested u = " << u << " at x = " << to_string(x.values());
        return Error(ErrorKind::VelocityOutOfRange, os.str());
    };
    for (;;) {
        const double nb = up ? std::min(lag.v_max, b * 2.0) : std::max(lag.v_min, b / 2.0);
        if (nb == b) throw out_of_range();
        a = b;
        fa = fb;
        b = nb;
        fb = f(b);
        if (fa * fb <= 0.0) break;
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    // Newton with bisection safeguard.
    double v = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const double fv = f(v);
        if (fv == 0.0) return v;
        if ((fv > 0.0) == (fa > 0.0)) { a = v; fa = fv; } else { b = v; }
        const double slope = lag.L2(x, v);
        double next = v - fv / slope;
        if (!(next > std::min(a, b) && next < std::max(a, b))) next = 0.5 * (a + b);
        if (std::abs(next - v) <= 1e-15 * std::max(1.0, std::abs(v))) return next;
        v = next;
    }
    return v;
}

WField build_W(const SphericalLagrangian& lag, const Point& reference, double reference_speed) {
    const double l1 = lag.L1(reference, reference_speed);
    if (l1 == 0.0 || !std::isfinite(l1)) throw Error(ErrorKind::DegenerateSlope, "L' vanishes at the reference state");
    const int eps = l1 > 0.0 ? 1 : -1;
    auto speed = [lag, eps](const Point& x, double u) {
        const double v = speed_for_u(lag, eps, x, u);
        if ((lag.L1(x, v) > 0.0 ? 1 : -1) != eps)
            throw Error(ErrorKind::VelocityOutOfRange, "sign of L' changed: epsilon is not constant");
        return v;
    };
    WField w;
    w.epsilon = eps;
    w.W = [lag, speed](const Point& x, double u) {
        const double v = speed(x, u);
        return v * lag.L1(x, v) - lag.L(x, v);
    };
    // W' = h' / (du/dv) with h' = v L'' and du/dv = -eps L'' / L'^2
    w.W1 = [lag, speed, eps](const Point& x, double u) {
        const double v = speed(x, u);
        const double l1v = lag.L1(x, v), l2v = lag.L2(x, v);
        const double dudv = -eps * l2v / (l1v * l1v);
        return v * l2v / dudv;
    };
    // nabla W = nabla h - h' (du/dx) / (du/dv), nabla h = v nabla L' - nabla L
    w.gradx_W = [lag, speed, eps](const Point& x, double u) {
        const double v = speed(x, u);
        const double l1v = lag.L1(x, v), l2v = lag.L2(x, v);
        const Covector gl = lag.gradx_L(x, v), gl1 = lag.gradx_L1(x, v);
        const double dudv = -eps * l2v / (l1v * l1v);
        const Covector dudx = gl1 * (-eps / (l1v * l1v));
        return Covector(v * gl1 - gl - (v * l2v / dudv) * dudx);
    };
    return w;
}

GradientIdentityReport check_gradient_identity(const PolySymbol& sym, const MetricChart& chart,
                                     const std::vector<StateP>& samples) {
    GradientIdentityReport rep;
    for (size_t i = 0; i < samples.size(); ++i) {
        const StateP& st = samples[i];
        const Vector v = grad_p(sym, st.x, st.p);
        auto L_at = [&](const Eigen::VectorXd& y) {
            const Point xy(y);
            const StateP q = to_momentum(sym, StateV{xy, v, 0.0}, st.p);
            return lagrange_value(sym, xy, q.p);
        };
        Covector gradL(fd::gradient(L_at, st.x.values()));
        // velocity-representation connection term: - v^a Gamma^b_qa dL/dv^b, with dL/dv^b = p_b
        const Christoffel gamma = christoffel_at(chart, st.x);
        const int n = chart.dim();
        for (int q = 0; q < n; ++q)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) gradL[q] -= v[a] * gamma(b, q, a) * st.p[b];
        const Covector gradH = grad_x(sym, chart, st.x, st.p);
        const double res = (gradL + gradH).norm_inf();
        rep.residuals.push_back(res);
        if (res > rep.max_residual || rep.worst_sample < 0) {
            rep.max_residual = std::max(rep.max_residual, res);
            rep.worst_sample = static_cast<int>(i);
        }
    }
    return rep;
}

namespace lagrangians {

SphericalLagrangian index_medium(ScalarField index) {
    SphericalLagrangian lag;
    lag.L = [index](const Point& x, double v) {
        const double n = index(x);
        return 0.25 * v * v + n * n;
    };
    lag.L1 = [](const Point&, double v) { return 0.5 * v; };
    lag.L2 = [](const Point&, double) { return 0.5; };
    lag.gradx_L = [index](const Point& x, double) { return Covector(2.0 * index(x) * index.grad(x)); };
    lag.gradx_L1 = [](const Point& x, double) { return Covector::zero(x.size()); };
    return lag;
}

} // namespace lagrangians

namespace wfields {

WField index_medium(ScalarField index) {
    WField w;
    w.epsilon = 1;
    w.W = [index](const Point& x, double u) {
        const double n = index(x);
        return 1.0 / (u * u) - n * n;
    };
    w.W1 = [](const Point&, double u) { return -2.0 / (u * u * u); };
    w.gradx_W = [index](const Point& x, double) { return Covector(-2.0 * index(x) * index.grad(x)); };
    return w;
}

WField from_function(std::function<double(const Point&, double)> W, int epsilon) {
    WField w;
    w.epsilon = epsilon;
    w.W = W;
    w.W1 = [W](const Point& x, double u) { return fd::derivative([&](double s) { return W(x, s); }, u); };
    w.gradx_W = [W](const Point& x, double u) {
        return Covector(fd::gradient([&](const Eigen::VectorXd& y) { return W(Point(y), u); }, x.values()));
    };
    return w;
}

} // namespace wfields

} // namespace nslab
