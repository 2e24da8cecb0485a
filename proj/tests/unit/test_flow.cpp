#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/flow.hpp"

#include <cmath>
#include <limits>

using namespace nslab;

namespace {

const MetricChart kFlat = charts::euclidean(2);
const ScalarField kIndex = ScalarField::affine(1.0, Eigen::Vector2d(0.2, 0.0));

StepperConfig rk4(double dt, double t_end) {
    StepperConfig c;
    c.dt = dt;
    c.t_end = t_end;
    return c;
}

} // namespace

TEST_CASE("free Hamilton rays are straight") {
    const PolySymbol sym = symbols::quadratic(2, 1.0, ScalarField::constant(-1.0));
    const StateP st{Point{0.1, 0.2}, Covector{0.6, 0.8}, 0.0};
    const Trajectory tr = integrate(hamilton_dynamics(sym, kFlat), st, rk4(0.01, 1.0));
    const Point x = tr.x(tr.size() - 1);
    CHECK(x[0] == doctest::Approx(0.1 + 1.2));
    CHECK(x[1] == doctest::Approx(0.2 + 1.6));
    CHECK(tr.phase(tr.size() - 1) == doctest::Approx(2.0));
}

TEST_CASE("modified rates are the Hamilton rates over Omega") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const StateP st{Point{0.3, -0.1}, Covector{0.9, 0.7}, 0.0};
    const PRates h = rhs_hamilton(sym, kFlat, st);
    const PRates m = rhs_modified(sym, kFlat, st, 1e-10);
    CHECK(m.sdot == 1.0);
    CHECK((h.xdot / h.sdot - m.xdot).norm_inf() < 1e-15);
    CHECK((h.pdot_raw / h.sdot - m.pdot_raw).norm_inf() < 1e-15);
    CHECK(h.sdot == doctest::Approx(2.0 * (0.81 + 0.49)));

    try {
        rhs_modified(sym, kFlat, StateP{st.x, Covector{0.0, 0.0}, 0.0}, 1e-10);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TransversalityLost);
    }
}

TEST_CASE("geodesic rays on the sphere follow meridians") {
    const MetricChart chart = charts::sphere();
    const PolySymbol sym = symbols::inverse_metric(chart, ScalarField::constant(-1.0));
    const StateP st{Point{0.5, 1.0}, Covector{1.0, 0.0}, 0.0};
    const Trajectory tr = integrate(modified_dynamics(sym, chart, 1e-10), st, rk4(1e-3, 1.0));
    const Point x = tr.x(tr.size() - 1);
    CHECK(x[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("landing times are hit exactly and recorded") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    StepperConfig cfg = rk4(0.03, 1.0);
    cfg.record_every = 1000;
    cfg.landing_times = {0.1, 0.25, 0.7};
    const Trajectory tr = integrate(hamilton_dynamics(sym, kFlat), StateP{Point{0.0, 0.0}, Covector{1.0, 0.0}, 0.0}, cfg);
    CHECK(tr.t.front() == 0.0);
    CHECK(tr.t.back() == 1.0);
    for (double t : cfg.landing_times) CHECK(tr.find(t) >= 0);
    CHECK(tr.find(0.5) == -1);
}

TEST_CASE("adaptive and fixed-step integration agree") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const Dynamics dyn = hamilton_dynamics(sym, kFlat);
    const StateP st{Point{0.0, 0.0}, Covector{0.6, 0.8}, 0.0};
    StepperConfig adaptive = rk4(0.05, 1.0);
    adaptive.method = Method::RK45;
    const Eigen::VectorXd a = integrate(dyn, st, adaptive).y.back();
    const Eigen::VectorXd b = integrate(dyn, st, rk4(1e-3, 1.0)).y.back();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("RK4 converges at fourth order") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const Dynamics dyn = hamilton_dynamics(sym, kFlat);
    const StateP st{Point{0.2, 0.0}, Covector{0.9, 0.6}, 0.0};
    const Eigen::VectorXd a = integrate(dyn, st, rk4(0.1, 1.0)).y.back();
    const Eigen::VectorXd b = integrate(dyn, st, rk4(0.05, 1.0)).y.back();
    const Eigen::VectorXd c = integrate(dyn, st, rk4(0.025, 1.0)).y.back();
    const double order = std::log2((a - b).cwiseAbs().maxCoeff() / (b - c).cwiseAbs().maxCoeff());
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("Hamilton function is conserved along rays") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const Trajectory tr = integrate(hamilton_dynamics(sym, kFlat),
                                    StateP{Point{0.0, 0.0}, Covector{0.3, 1.0}, 0.0}, rk4(1e-3, 1.0));
    const ConservationReport r = conservation_report(tr);
    CHECK(r.H_drift < 1e-10);
    CHECK(std::isnan(r.W_drift));
    CHECK(r.min_abs_Omega > 0.0);
}

TEST_CASE("Newtonian flow monitors W and not H") {
    const WField W = wfields::index_medium(kIndex);
    const Trajectory tr = integrate(newtonian_dynamics(wavefront_force(W, kFlat), kFlat),
                                    StateU{Point{0.0, 0.0}, Vector{0.0, 1.0}, 0.0}, rk4(1e-3, 0.5));
    const ConservationReport r = conservation_report(tr);
    CHECK(std::isnan(r.H_drift));
    CHECK(r.W_drift < 1e-10);
    CHECK(tr.phase(tr.size() - 1) == doctest::Approx(0.5));
}

TEST_CASE("a non-finite state stops integration with the partial trajectory") {
    Dynamics dyn;
    dyn.form = Form::Hamilton;
    dyn.dim = 1;
    dyn.derivative = [](const Eigen::VectorXd& y) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(y.size());
        d[0] = y[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
        return d;
    };
    dyn.monitor = [](const Eigen::VectorXd&) { return Monitor{}; };
    try {
        integrate(dyn, Eigen::VectorXd::Zero(3), rk4(0.1, 1.0));
        FAIL("expected an error");
    } catch (const IntegrationError& e) {
        CHECK(e.kind() == ErrorKind::Integration);
        CHECK(e.partial().size() > 0);
        CHECK(e.last_good().allFinite());
        CHECK(e.t() < 1.0);
    }
}

TEST_CASE("form names round trip") {
    for (Form f : {Form::Hamilton, Form::Modified, Form::Newtonian}) CHECK(form_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(form_from_string("lagrange"), Error);
}

TEST_CASE("flat state layout") {
    const StateP st{Point{1.0, 2.0}, Covector{3.0, 4.0}, 5.0};
    const Eigen::VectorXd y = pack(st);
    CHECK(y.size() == 5);
    const StateP back = unpack_p(y);
    CHECK(back.x[1] == 2.0);
    CHECK(back.p[0] == 3.0);
    CHECK(back.s == 5.0);
}
