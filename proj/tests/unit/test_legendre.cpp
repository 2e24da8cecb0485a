#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/legendre.hpp"

#include <cmath>

using namespace nslab;

namespace {

const MetricChart kFlat = charts::euclidean(2);
const ScalarField kIndex = ScalarField::affine(1.0, Eigen::Vector2d(0.2, 0.0));

// p1^2 + 2 p2^2 - 1, not spherically symmetric.
PolySymbol anisotropic() {
    PolySymbol::Term c0{[](const Point&) {
        SymTensor t(2, 0);
        t[0] = -1.0;
        return t;
    }};
    PolySymbol::Term c1{[](const Point&) { return SymTensor(2, 1); }};
    PolySymbol::Term c2{[](const Point&) {
        SymTensor t(2, 2);
        t.at({0, 0}) = 1.0;
        t.at({1, 1}) = 2.0;
        return t;
    }};
    return PolySymbol("anisotropic", 2, {c0, c1, c2});
}

} // namespace

TEST_CASE("velocity map of |p|^2 - n^2") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const StateV sv = to_velocity(sym, StateP{Point{0.0, 0.0}, Covector{0.5, -1.0}, 0.25});
    CHECK(sv.v[0] == doctest::Approx(1.0));
    CHECK(sv.v[1] == doctest::Approx(-2.0));
    CHECK(sv.s == 0.25);
}

TEST_CASE("momentum map inverts the velocity map") {
    const PolySymbol sym = symbols::quartic(2, ScalarField::constant(-1.0));
    const Point x{0.2, 0.1};
    const Covector p{0.8, -0.3};
    const StateV sv = to_velocity(sym, StateP{x, p, 0.0});
    const StateP back = to_momentum(sym, sv, Covector{1.0, 0.0});
    CHECK((back.p - p).norm_inf() < 1e-12);
}

TEST_CASE("momentum map reports a singular Hessian") {
    // Linear in p: the fiber Hessian is identically zero.
    const PolySymbol sym = symbols::quadratic(2, 0.0, ScalarField::constant(1.0));
    try {
        to_momentum(sym, StateV{Point{0.0, 0.0}, Vector{1.0, 0.0}, 0.0}, Covector{1.0, 1.0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInvertible);
    }
}

TEST_CASE("Lagrange function of the index medium") {
    const PolySymbol sym = symbols::index_medium(2, kIndex);
    const SphericalLagrangian numeric = spherical_from_symbol(sym, kFlat);
    const SphericalLagrangian closed = lagrangians::index_medium(kIndex);
    for (double v : {0.3, 1.0, 2.5}) {
        const Point x{0.4, -0.2};
        CHECK(numeric.L(x, v) == doctest::Approx(closed.L(x, v)).epsilon(1e-10));
        CHECK(numeric.L1(x, v) == doctest::Approx(closed.L1(x, v)).epsilon(1e-10));
        CHECK(numeric.L2(x, v) == doctest::Approx(closed.L2(x, v)).epsilon(1e-8));
        CHECK((numeric.gradx_L(x, v) - closed.gradx_L(x, v)).norm_inf() < 1e-8);
    }
    const Point x{0.4, -0.2};
    const double n = kIndex(x);
    CHECK(closed.L(x, 1.0) == doctest::Approx(0.25 + n * n));
}

TEST_CASE("direction-dependent Lagrangians are rejected") {
    try {
        spherical_from_symbol(anisotropic(), kFlat);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Anisotropy);
    }
}

TEST_CASE("W built from L matches the closed form 1/u^2 - n^2") {
    const WField built = build_W(lagrangians::index_medium(kIndex), Point{0.0, 0.0});
    const WField closed = wfields::index_medium(kIndex);
    CHECK(built.epsilon == 1);
    for (double u : {0.5, 1.0, 1.7}) {
        const Point x{-0.3, 0.6};
        CHECK(built.W(x, u) == doctest::Approx(closed.W(x, u)).epsilon(1e-12));
        CHECK(built.W1(x, u) == doctest::Approx(-2.0 / (u * u * u)).epsilon(1e-10));
        CHECK((built.gradx_W(x, u) - closed.gradx_W(x, u)).norm_inf() < 1e-10);
    }
}

TEST_CASE("W from a user function differentiates numerically") {
    const WField W = wfields::from_function([](const Point& x, double u) { return x[0] * u * u; }, 1);
    CHECK(W.W1(Point{2.0, 0.0}, 1.5) == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(W.gradx_W(Point{2.0, 0.0}, 1.5)[0] == doctest::Approx(2.25).epsilon(1e-8));
}

TEST_CASE("gradient identity between L and H") {
    const PolySymbol sym = symbols::inverse_metric(charts::polar(), ScalarField::constant(-1.0));
    std::vector<StateP> samples = {
        {Point{1.0, 0.0}, Covector{0.5, 0.3}, 0.0},
        {Point{2.0, 1.0}, Covector{-1.0, 0.8}, 0.0},
    };
    const GradientIdentityReport r = check_gradient_identity(sym, charts::polar(), samples);
    CHECK(r.residuals.size() == 2);
    CHECK(r.max_residual < 1e-6);
}
