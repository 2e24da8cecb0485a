#include "nslab/checks.hpp"

#include "nslab/errors.hpp"
#include "nslab/fd.hpp"
#include "nslab/flow.hpp"
#include "nslab/forces.hpp"
#include "nslab/front.hpp"
#include "nslab/legendre.hpp"
#include "nslab/run.hpp"
#include "nslab/symbol.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <optional>
#include <random>

namespace nslab {

namespace {

#include "force_values.inc"
#include "hamilton_spread.inc"
#include "newtonian_reference.inc"
#include "transport_cases.inc"

constexpr double kSlope = 0.2;

CheckLine at_most(int criterion, std::string name, double value, double threshold) {
    return CheckLine{criterion, std::move(name), value <= threshold, value, threshold, "<=", false};
}

CheckLine at_least(int criterion, std::string name, double value, double threshold) {
    return CheckLine{criterion, std::move(name), value >= threshold, value, threshold, ">=", false};
}

CheckLine info(int criterion, std::string name, double value) {
    return CheckLine{criterion, std::move(name), true, value, 0.0, "", true};
}

// Linear-index medium n(x) = 1 + 0.2 x1 in the Euclidean plane.
struct Medium {
    MetricChart chart = charts::euclidean(2);
    ScalarField index = ScalarField::affine(1.0, Eigen::Vector2d(kSlope, 0.0));
    PolySymbol sym = symbols::index_medium(2, index);
    WField W = wfields::index_medium(index);
};

// Segment x2 = 0, x1 in [-0.5, 0.5], crossing the index gradient.
FrontMesh transverse_front(const Medium& m) {
    Lattice grid{{LatticeAxis{64, -0.5, 0.5, false}}, {}};
    const FrontMesh mesh = build_front(m.chart, [](const std::vector<double>& q) { return Point{q[0], 0.0}; }, grid,
                                       Vector{0.0, 1.0});
    return solve_nu(m.sym, m.chart, mesh, {});
}

// Segment x1 = 0, x2 in [-1, 1]: a level set of the index.
FrontMesh level_front(const Medium& m) {
    Lattice grid{{LatticeAxis{64, -1.0, 1.0, false}}, {}};
    const FrontMesh mesh = build_front(m.chart, [](const std::vector<double>& q) { return Point{0.0, q[0]}; }, grid,
                                       Vector{1.0, 0.0});
    return solve_nu(m.sym, m.chart, mesh, {});
}

StepperConfig rk4(double t_end, double dt = 1e-3) {
    StepperConfig cfg;
    cfg.method = Method::RK4;
    cfg.dt = dt;
    cfg.t_end = t_end;
    return cfg;
}

std::vector<double> times_up_to(double t_end, double step) {
    std::vector<double> out;
    const int count = static_cast<int>(std::lround(t_end / step));
    for (int k = 1; k <= count; ++k) out.push_back(k * step);
    return out;
}

double max_spread(const ShiftResult& r) {
    double worst = 0.0;
    for (const Snapshot& s : r.fronts) worst = std::max(worst, s.phase_spread);
    return worst;
}

double max_normality(const ShiftResult& r) {
    double worst = 0.0;
    for (const Snapshot& s : r.fronts) worst = std::max(worst, s.normality);
    return worst;
}

double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    const double gap = (a - b).cwiseAbs().maxCoeff();
    if (scale < 1e-12) return gap;
    return gap / scale;
}

// ---------------------------------------------------------------- suites

// a(x) |p|^2 - 1 with a = 1 + 0.3 sin(x1) + 0.2 x2: the speed derivative L'
// depends on position, so W picks up the chain-rule term through v(x, u).
PolySymbol variable_speed() {
    auto a = [](const Point& x) { return 1.0 + 0.3 * std::sin(x[0]) + 0.2 * x[1]; };
    PolySymbol::Term c0{[](const Point&) {
        SymTensor t(2, 0);
        t[0] = -1.0;
        return t;
    }, nullptr, true};
    PolySymbol::Term c1{[](const Point&) { return SymTensor(2, 1); }, nullptr, true};
    PolySymbol::Term c2{[a](const Point& x) {
        SymTensor t(2, 2);
        t.at({0, 0}) = a(x);
        t.at({1, 1}) = a(x);
        return t;
    }, nullptr, true};
    return PolySymbol("variable_speed", 2, {c0, c1, c2});
}

std::vector<CheckLine> front_coincidence() {
    Medium m;
    const FrontMesh front = transverse_front(m);
    const std::vector<double> times(std::begin(kHamiltonSpreadTimes), std::end(kHamiltonSpreadTimes));
    const ShiftResult modified = shift_front(m.sym, m.chart, front, Form::Modified, rk4(0.5), times);
    const ShiftResult hamilton = shift_front(m.sym, m.chart, front, Form::Hamilton, rk4(0.5), times);

    double oracle_gap = 0.0;
    bool growing = true;
    for (size_t k = 1; k < hamilton.fronts.size(); ++k) {
        const double s = hamilton.fronts[k].phase_spread;
        oracle_gap = std::max(oracle_gap, std::abs(s - kHamiltonSpread[k - 1]) / kHamiltonSpread[k - 1]);
        growing = growing && s > hamilton.fronts[k - 1].phase_spread;
    }
    const ShiftResult level = shift_front(m.sym, m.chart, level_front(m), Form::Hamilton, rk4(0.5), {0.5});

    // Accumulated phase: trapezoid quadrature of p . xdot along each recorded
    // modified trajectory, compared with s0 + t.
    const Dynamics dyn = modified_dynamics(m.sym, m.chart, 1e-10);
    double phase_gap = 0.0;
    for (const Trajectory& tr : modified.trajectories) {
        double acc = tr.phase(0);
        double prev = 0.0;
        for (size_t k = 0; k < tr.size(); ++k) {
            const StateP st = unpack_p(tr.y[k]);
            const Eigen::VectorXd dy = dyn.derivative(tr.y[k]);
            const double rate = st.p.values().dot(dy.head(tr.dim));
            if (k > 0) acc += 0.5 * (rate + prev) * (tr.t[k] - tr.t[k - 1]);
            prev = rate;
            phase_gap = std::max({phase_gap, std::abs(acc - (tr.phase(0) + tr.t[k])),
                                  std::abs(tr.phase(k) - (tr.phase(0) + tr.t[k]))});
        }
    }

    return {
        at_most(1, "modified flow: max phase spread over snapshots t = 0.1..0.5", max_spread(modified), 1e-7),
        at_most(1, "modified flow: accumulated phase vs s0 + t, max gap", phase_gap, 1e-9),
        at_least(1, "hamilton flow: phase spread at t = 0.5", hamilton.fronts.back().phase_spread, 1e-3),
        at_most(1, "hamilton flow: relative gap to fine-step reference spreads", oracle_gap, 1e-6),
        at_least(1, "hamilton flow: spread strictly increasing in t (1 = yes)", growing ? 1.0 : 0.0, 1.0),
        info(1, "hamilton flow on the level-set segment x1 = 0: phase spread at t = 0.5",
             level.fronts.back().phase_spread),
    };
}

std::vector<CheckLine> normality() {
    Medium m;
    const FrontMesh front = transverse_front(m);
    const std::vector<double> times = times_up_to(1.0, 0.1);
    const ShiftResult modified = shift_front(m.sym, m.chart, front, Form::Modified, rk4(1.0), times);
    const ForceField F = wavefront_force(m.W, m.chart);
    const ShiftResult newtonian =
        shift_front(F, m.chart, front, newtonian_velocities(m.sym, m.chart, front), rk4(1.0), times);

    const MetricChart sphere = charts::sphere();
    const PolySymbol geo = symbols::inverse_metric(sphere, ScalarField::constant(-1.0));
    const double theta0 = std::numbers::pi / 4;
    Lattice grid{{LatticeAxis{64, 0.0, 2.0 * std::numbers::pi, true}}, {}};
    FrontMesh circle = build_front(sphere, [theta0](const std::vector<double>& q) { return Point{theta0, q[0]}; },
                                   grid, Vector{1.0, 0.0});
    circle = solve_nu(geo, sphere, circle, {});
    const ShiftResult lat = shift_front(geo, sphere, circle, Form::Modified, rk4(1.0), times_up_to(1.0, 0.25));
    double theta_spread = 0.0, geodesic_gap = 0.0;
    for (const Snapshot& s : lat.fronts) {
        double lo = s.mesh.points[0][0], hi = lo;
        for (const Point& x : s.mesh.points) {
            lo = std::min(lo, x[0]);
            hi = std::max(hi, x[0]);
            geodesic_gap = std::max(geodesic_gap, std::abs(x[0] - (theta0 + s.t)));
        }
        theta_spread = std::max(theta_spread, hi - lo);
    }

    return {
        at_most(2, "modified flow, linear index: max normality deviation t = 0.1..1", max_normality(modified), 1e-5),
        at_most(2, "newtonian flow, linear index: max normality deviation t = 0.1..1", max_normality(newtonian), 1e-5),
        at_most(2, "sphere latitude circle: polar-angle spread over snapshots", theta_spread, 1e-6),
        at_most(2, "sphere latitude circle: gap to meridian geodesics theta0 + t", geodesic_gap, 1e-6),
        at_most(2, "sphere latitude circle: max normality deviation", max_normality(lat), 1e-5),
    };
}

std::vector<CheckLine> form_equivalence() {
    Medium m;
    const FrontMesh front = transverse_front(m);
    const ShiftResult modified = shift_front(m.sym, m.chart, front, Form::Modified, rk4(1.0), {1.0});
    const ForceField F = wavefront_force(m.W, m.chart);
    const ShiftResult newtonian =
        shift_front(F, m.chart, front, newtonian_velocities(m.sym, m.chart, front), rk4(1.0), {1.0});
    double gap = 0.0;
    for (size_t i = 0; i < front.size(); ++i) {
        const Trajectory& a = modified.trajectories[i];
        const Trajectory& b = newtonian.trajectories[i];
        if (a.size() != b.size()) return {at_most(3, "trajectories recorded on different time grids", 1.0, 0.0)};
        for (size_t k = 0; k < a.size(); ++k) gap = std::max(gap, (a.x(k) - b.x(k)).norm_inf());
    }

    // Newtonian integration against an independent fine-step reference.
    double ref_gap = 0.0;
    const Dynamics dyn = newtonian_dynamics(F, m.chart);
    for (const auto& row : kNewtonianEnd) {
        const Point x0{0.1, -0.2};
        const double n0 = m.index(x0);
        const StateU st{x0, Vector{std::cos(row[0]) / n0, std::sin(row[0]) / n0}, 0.0};
        const Trajectory tr = integrate(dyn, st, rk4(1.0));
        const Eigen::VectorXd& y = tr.y.back();
        for (int k = 0; k < 4; ++k) ref_gap = std::max(ref_gap, std::abs(y[k] - row[k + 1]));
    }

    // Wave-front force against values from an independent symbolic derivation.
    double force_gap = 0.0;
    for (const auto& c : kForceCases) {
        const Covector f = force_wavefront(m.W, m.chart, StateU{Point{c[0], c[1]}, Vector{c[2], c[3]}, 0.0});
        force_gap = std::max({force_gap, std::abs(f[0] - c[4]), std::abs(f[1] - c[5])});
    }

    return {
        at_most(3, "wave-front force of W = 1/u^2 - n^2 vs symbolic reference values", force_gap, 1e-10),
        at_most(3, "modified vs newtonian (wave-front force): sup x-distance over t in [0, 1]", gap, 1e-6),
        at_most(3, "newtonian endpoints vs fine-step reference integration", ref_gap, 1e-6),
    };
}

std::vector<CheckLine> first_integral() {
    Medium m;
    const FrontMesh front = transverse_front(m);
    auto worst = [](const ShiftResult& r, bool W) {
        double d = 0.0;
        for (const Trajectory& t : r.trajectories) {
            const ConservationReport c = conservation_report(t);
            d = std::max(d, W ? c.W_drift : c.H_drift);
        }
        return d;
    };
    const ForceField F = wavefront_force(m.W, m.chart);
    const ShiftResult newtonian =
        shift_front(F, m.chart, front, newtonian_velocities(m.sym, m.chart, front), rk4(1.0), {1.0});
    const ShiftResult hamilton = shift_front(m.sym, m.chart, front, Form::Hamilton, rk4(1.0), {1.0});
    const ShiftResult modified = shift_front(m.sym, m.chart, front, Form::Modified, rk4(1.0), {1.0});
    return {
        at_most(4, "newtonian flow: max |W(t) - W(0)| over t in [0, 1]", worst(newtonian, true), 1e-8),
        at_most(4, "hamilton flow: max |H(t) - H(0)| over t in [0, 1]", worst(hamilton, false), 1e-8),
        at_most(4, "modified flow: max |H(t) - H(0)| over t in [0, 1]", worst(modified, false), 1e-8),
    };
}

std::vector<CheckLine> h_zero() {
    Medium m;
    const HFunction zero = hfunctions::zero();
    const HFunction ident = hfunctions::identity();
    size_t mismatches = 0, states = 0;
    double shell_gap = 0.0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b)
            for (int c = 0; c < 10; ++c) {
                const Point x{-1.0 + 2.0 * a / 9.0, 0.3};
                const double angle = 2.0 * std::numbers::pi * b / 10.0 + 0.1;
                const double speed = 0.5 + 1.5 * c / 9.0;
                const StateU st{x, Vector{speed * std::cos(angle), speed * std::sin(angle)}, 0.0};
                const Covector fw = force_wavefront(m.W, m.chart, st);
                const Covector fn = force_normal_shift(m.W, zero, m.chart, st);
                ++states;
                if (std::memcmp(fw.values().data(), fn.values().data(), sizeof(double) * 2) != 0) ++mismatches;

                const StateU shell{x, st.u * (1.0 / (speed * m.index(x))), 0.0};
                shell_gap = std::max(shell_gap, (force_normal_shift(m.W, ident, m.chart, shell) -
                                                 force_wavefront(m.W, m.chart, shell)).norm_inf());
            }
    return {
        at_most(5, "h = 0: states where normal-shift and wave-front forces differ bitwise (of 1000)",
                static_cast<double>(mismatches), 0.0),
        at_least(5, "h = 0: states compared", static_cast<double>(states), 1000.0),
        at_most(5, "h(W) = W on the W = 0 shell: max force difference", shell_gap, 1e-12),
    };
}

struct BundledSymbol {
    std::string label;
    MetricChart chart;
    PolySymbol sym;
    bool spherical;
    std::function<Point(std::mt19937_64&)> point;
};

std::vector<BundledSymbol> bundled_symbols() {
    const MetricChart flat = charts::euclidean(2);
    const MetricChart polar = charts::polar();
    const ScalarField n = ScalarField::affine(1.0, Eigen::Vector2d(kSlope, 0.0));
    ScalarField n2{[n](const Point& x) { return n(x) * n(x); },
                   [n](const Point& x) { return Eigen::VectorXd(2.0 * n(x) * n.grad(x)); }};
    ScalarField radial{[](const Point& x) { return -(1.0 + 0.1 * x[0] * x[0]); },
                       [](const Point& x) { return Eigen::VectorXd(Eigen::Vector2d(-0.2 * x[0], 0.0)); }};
    auto box = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double a = u(rng);
        return Point{a, u(rng)};
    };
    auto annulus = [](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> r(0.5, 2.0), phi(-3.0, 3.0);
        const double a = r(rng);
        return Point{a, phi(rng)};
    };
    return {
        {"|p|^2/2 - 1", flat, symbols::quadratic(2, 0.5, ScalarField::constant(-1.0)), true, box},
        {"|p|^2 - n^2", flat, symbols::index_medium(2, n), true, box},
        {"|p|^4 + n^2", flat, symbols::quartic(2, n2), true, box},
        {"polar g^ij p_i p_j - (1 + r^2/10)", polar, symbols::inverse_metric(polar, radial), true, annulus},
    };
}

Covector random_momentum(std::mt19937_64& rng, double min_norm = 0.2) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (;;) {
        const double a = u(rng);
        const Covector p{a, u(rng)};
        if (p.values().norm() >= min_norm) return p;
    }
}

std::vector<CheckLine> legendre() {
    std::vector<CheckLine> out;
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);

    double round_trip = 0.0, identity = 0.0, omega_gap = 0.0, h_gap = 0.0;
    for (const BundledSymbol& b : bundled_symbols()) {
        std::optional<SphericalLagrangian> lag;
        if (b.spherical) lag = spherical_from_symbol(b.sym, b.chart);
        std::vector<StateP> samples;
        for (int k = 0; k < 100; ++k) {
            const Point x = b.point(rng);
            const Covector p = random_momentum(rng);
            const StateV sv = to_velocity(b.sym, StateP{x, p, 0.0});
            const Covector guess{p[0] + jitter(rng), p[1] + jitter(rng)};
            const StateP back = to_momentum(b.sym, sv, guess);
            round_trip = std::max(round_trip, (back.p - p).norm_inf());
            if (k < 30) samples.push_back(StateP{x, p, 0.0});

            // Omega in the momentum, velocity and speed representations.
            const double om_p = omega(b.sym, x, p);
            auto L_of_v = [&](const Eigen::VectorXd& v) {
                return lagrange_value(b.sym, x, to_momentum(b.sym, StateV{x, Vector(v), 0.0}, p).p);
            };
            const Eigen::VectorXd dLdv = fd::gradient(L_of_v, sv.v.values());
            const double om_v = sv.v.values().dot(dLdv);
            omega_gap = std::max(omega_gap, std::abs(om_p - om_v) / std::max(1.0, std::abs(om_p)));
            if (lag) {
                const double speed = norm(b.chart, x, sv.v);
                const double om_s = speed * lag->L1(x, speed);
                omega_gap = std::max(omega_gap, std::abs(om_p - om_s) / std::max(1.0, std::abs(om_p)));
            }
        }
        identity = std::max(identity, check_gradient_identity(b.sym, b.chart, samples).max_residual);
    }
    out.push_back(at_most(6, "round trip p -> v -> p, 4 bundled symbols x 100 states", round_trip, 1e-10));
    out.push_back(at_most(6, "grad L + grad H along the Legendre map, max residual", identity, 1e-6));
    out.push_back(at_most(6, "Omega across momentum, velocity and speed forms (relative)", omega_gap, 1e-9));

    // W built from Lagrange functions: |p|^2 - n^2 (closed form known) and
    // a(x) |p|^2 - 1.
    Medium m;
    double slope_gap = 0.0, grad_gap = 0.0, closed_gap = 0.0;
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uu(0.4, 2.5);
    const PolySymbol syms[] = {m.sym, variable_speed()};
    for (int which = 0; which < 2; ++which) {
        const PolySymbol& sym = syms[which];
        const SphericalLagrangian lag = spherical_from_symbol(sym, m.chart);
        const WField W = build_W(lag, Point{0.0, 0.0});
        const bool closed = which == 0;
        for (int k = 0; k < 100; ++k) {
            const Point x{ux(rng), ux(rng)};
            const double u = uu(rng);
            const double v = speed_for_u(lag, W.epsilon, x, u);
            const double L1 = lag.L1(x, v);
            slope_gap = std::max(slope_gap, std::abs(W.W1(x, u) + W.epsilon * v * L1 * L1));
            grad_gap = std::max(grad_gap, (W.gradx_W(x, u) + lag.gradx_L(x, v)).norm_inf());
            if (closed) {
                const double n = m.index(x);
                closed_gap = std::max(closed_gap, std::abs(W.W(x, u) - (1.0 / (u * u) - n * n)));
            }

            const Covector p = random_momentum(rng);
            const double speed = norm(m.chart, x, grad_p(sym, x, p));
            h_gap = std::max(h_gap, std::abs(speed * lag.L1(x, speed) - lag.L(x, speed) - eval_H(sym, x, p)));
        }
    }
    out.push_back(at_most(6, "W' + eps |v| L'^2, max residual", slope_gap, 1e-8));
    out.push_back(at_most(6, "grad W + grad L, max residual", grad_gap, 1e-8));
    out.push_back(at_most(6, "W against closed form 1/u^2 - n^2", closed_gap, 1e-8));
    out.push_back(at_most(6, "v L' - L against H at the matched momentum", h_gap, 1e-9));
    return out;
}

double monomial(const int (&m)[2], const Eigen::Vector2d& x, int d1, int d2) {
    auto falling = [](int a, int d) {
        double f = 1.0;
        for (int i = 0; i < d; ++i) f *= a - i;
        return f;
    };
    if (m[0] < d1 || m[1] < d2) return 0.0;
    return falling(m[0], d1) * falling(m[1], d2) * std::pow(x[0], m[0] - d1) * std::pow(x[1], m[1] - d2);
}

template <size_t N>
double poly(const double (&c)[N], const int (&monos)[N][2], const Eigen::Vector2d& x, int d1, int d2) {
    double s = 0.0;
    for (size_t k = 0; k < N; ++k) s += c[k] * monomial(monos[k], x, d1, d2);
    return s;
}

std::vector<CheckLine> transport() {
    const MetricChart flat = charts::euclidean(2);
    const PolySymbol sym = symbols::quadratic(2, 1.0, ScalarField::constant(0.0));
    double worst = 0.0;
    for (const TransportCase& tc : kTransportCases) {
        auto S = [&tc](const Point& x) { return poly(tc.S, kSMonomials, x.values(), 0, 0); };
        auto grad = [&tc](const Point& x) {
            return Covector{poly(tc.S, kSMonomials, x.values(), 1, 0), poly(tc.S, kSMonomials, x.values(), 0, 1)};
        };
        auto second = [&tc](const Point& x) {
            Matrix h(2, 2);
            h(0, 0) = poly(tc.S, kSMonomials, x.values(), 2, 0);
            h(0, 1) = h(1, 0) = poly(tc.S, kSMonomials, x.values(), 1, 1);
            h(1, 1) = poly(tc.S, kSMonomials, x.values(), 0, 2);
            return h;
        };
        const PhaseField phase = PhaseField::from_derivatives(S, grad, second, flat);
        const Point x{tc.x[0], tc.x[1]};
        const double phi = poly(tc.phi, kPhiMonomials, x.values(), 0, 0);
        const Covector dphi{poly(tc.phi, kPhiMonomials, x.values(), 1, 0), poly(tc.phi, kPhiMonomials, x.values(), 0, 1)};
        worst = std::max(worst, std::abs(apply_R1(sym, flat, phase, phi, dphi, x) - tc.expected));
    }
    return {at_most(7, "R1 on 50 polynomial (S, phi, x) cases vs symbolic expansion", worst, 1e-8)};
}

std::vector<CheckLine> gradients() {
    std::mt19937_64 rng(7151);
    double gp = 0.0, gx = 0.0;
    for (const BundledSymbol& b : bundled_symbols()) {
        for (int k = 0; k < 100; ++k) {
            const Point x = b.point(rng);
            const Covector p = random_momentum(rng);
            const Eigen::VectorXd fd_p =
                fd::gradient([&](const Eigen::VectorXd& q) { return eval_H(b.sym, x, Covector(q)); }, p.values());
            gp = std::max(gp, relative_gap(grad_p(b.sym, x, p).values(), fd_p));

            Eigen::VectorXd fd_x =
                fd::gradient([&](const Eigen::VectorXd& y) { return eval_H(b.sym, Point(y), p); }, x.values());
            const Christoffel gamma = christoffel_at(b.chart, x);
            const Vector hp = grad_p(b.sym, x, p);
            for (int q = 0; q < 2; ++q)
                for (int a = 0; a < 2; ++a)
                    for (int c = 0; c < 2; ++c) fd_x[q] += p[a] * gamma(a, q, c) * hp[c];
            gx = std::max(gx, relative_gap(grad_x(b.sym, b.chart, x, p).values(), fd_x));
        }
    }

    Medium m;
    double l1 = 0.0, l2 = 0.0, w1 = 0.0, gw = 0.0;
    const std::vector<std::pair<PolySymbol, Point>> lagr = {
        {m.sym, Point{0.0, 0.0}},
        {symbols::quartic(2, ScalarField::constant(-1.0)), Point{0.0, 0.0}},
        {variable_speed(), Point{0.0, 0.0}},
    };
    std::uniform_real_distribution<double> ux(-1.0, 1.0), uv(0.3, 2.0), uu(0.4, 2.5);
    for (const auto& [sym, ref] : lagr) {
        const SphericalLagrangian lag = spherical_from_symbol(sym, m.chart);
        const WField W = build_W(lag, ref);
        for (int k = 0; k < 100; ++k) {
            const Point x{ux(rng), ux(rng)};
            const double v = uv(rng);
            const double fd1 = fd::derivative([&](double s) { return lag.L(x, s); }, v);
            const double fd2 = fd::derivative([&](double s) { return lag.L1(x, s); }, v);
            l1 = std::max(l1, std::abs(lag.L1(x, v) - fd1) / std::max(std::abs(fd1), 1e-12));
            l2 = std::max(l2, std::abs(lag.L2(x, v) - fd2) / std::max(std::abs(fd2), 1e-12));

            const double u = uu(rng);
            const double fdw = fd::derivative([&](double s) { return W.W(x, s); }, u);
            w1 = std::max(w1, std::abs(W.W1(x, u) - fdw) / std::max(std::abs(fdw), 1e-12));
            const Eigen::VectorXd fdg =
                fd::gradient([&](const Eigen::VectorXd& y) { return W.W(Point(y), u); }, x.values());
            gw = std::max(gw, relative_gap(W.gradx_W(x, u).values(), fdg));
        }
    }
    return {
        at_most(8, "grad_p vs central differences (relative)", gp, 1e-6),
        at_most(8, "grad_x vs central differences plus connection term (relative)", gx, 1e-6),
        at_most(8, "L' vs central differences of L (relative)", l1, 1e-6),
        at_most(8, "L'' vs central differences of L' (relative)", l2, 1e-6),
        at_most(8, "W' vs central differences of W (relative)", w1, 1e-6),
        at_most(8, "grad W vs central differences of W (relative)", gw, 1e-6),
    };
}

std::vector<CheckLine> order() {
    Medium m;
    const Dynamics dyn = hamilton_dynamics(m.sym, m.chart);
    const Point x0{0.3, 0.0};
    const double n0 = m.index(x0);
    const StateP st{x0, Covector{n0 * std::cos(0.7), n0 * std::sin(0.7)}, 0.0};
    std::vector<Eigen::VectorXd> ends;
    for (double dt : {0.05, 0.025, 0.0125}) ends.push_back(integrate(dyn, st, rk4(1.0, dt)).y.back());
    const double e1 = (ends[0] - ends[1]).cwiseAbs().maxCoeff();
    const double e2 = (ends[1] - ends[2]).cwiseAbs().maxCoeff();
    return {at_least(9, "observed RK4 order from step halving (dt = 0.05, 0.025, 0.0125)", std::log2(e1 / e2), 3.8)};
}

struct Suite {
    const char* name;
    std::vector<CheckLine> (*run)();
};

const Suite kSuites[] = {
    {"front-coincidence", front_coincidence},
    {"normality", normality},
    {"form-equivalence", form_equivalence},
    {"first-integral", first_integral},
    {"h-zero", h_zero},
    {"legendre", legendre},
    {"transport", transport},
    {"gradients", gradients},
    {"order", order},
};

} // namespace

bool SuiteResult::passed() const {
    for (const CheckLine& l : lines)
        if (!l.passed) return false;
    return true;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const Suite& s : kSuites) out.emplace_back(s.name);
        return out;
    }();
    return names;
}

std::vector<SuiteResult> run_suites(const std::string& name) {
    std::vector<SuiteResult> out;
    for (const Suite& s : kSuites) {
        if (name != "all" && name != s.name) continue;
        SuiteResult r{s.name, {}};
        try {
            r.lines = s.run();
        } catch (const Error& e) {
            r.lines.push_back(CheckLine{0, std::string("suite aborted: ") + e.what(), false, 0.0, 0.0, "", false});
        }
        out.push_back(std::move(r));
    }
    if (out.empty()) throw Error(ErrorKind::Config, "unknown check suite '" + name + "'");
    return out;
}

SuiteResult check_config(const SimConfig& cfg) {
    SuiteResult r{"config", {}};
    const RunOutcome out = run(cfg);
    const Form form = out.result.form;
    if (form == Form::Modified)
        r.lines.push_back(at_most(1, "configured run: max phase spread over snapshots", max_spread(out.result), 1e-7));
    if (form != Form::Hamilton)
        r.lines.push_back(
            at_most(2, "configured run: max normality deviation over snapshots", max_normality(out.result), 1e-5));
    if (form == Form::Newtonian)
        r.lines.push_back(at_most(4, "configured run: max W drift", out.conservation.W_drift, 1e-8));
    else
        r.lines.push_back(at_most(4, "configured run: max H drift", out.conservation.H_drift, 1e-8));
    return r;
}

std::string format_line(const CheckLine& l) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", l.value);
    std::string s = l.informational ? "[INFO] " : (l.passed ? "[PASS] " : "[FAIL] ");
    s += "criterion " + std::to_string(l.criterion) + ": " + l.name + " = " + buf;
    if (!l.informational) {
        std::snprintf(buf, sizeof buf, "%.3g", l.threshold);
        s += " (" + l.relation + " " + buf + ")";
    }
    return s;
}

} // namespace nslab
