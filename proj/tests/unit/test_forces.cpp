#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/forces.hpp"

#include <cmath>
#include <cstring>

using namespace nslab;

namespace {

#include "force_values.inc"

const MetricChart kFlat = charts::euclidean(2);
const WField kW = wfields::index_medium(ScalarField::affine(1.0, Eigen::Vector2d(0.2, 0.0)));

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Io;
}

} // namespace

TEST_CASE("wave-front force against symbolic reference values") {
    for (const auto& c : kForceCases) {
        const Covector f = force_wavefront(kW, kFlat, StateU{Point{c[0], c[1]}, Vector{c[2], c[3]}, 0.0});
        CHECK(f[0] == doctest::Approx(c[4]).epsilon(1e-12));
        CHECK(f[1] == doctest::Approx(c[5]).epsilon(1e-12));
    }
}

TEST_CASE("homogeneous W exerts no wave-front force") {
    const WField W = wfields::index_medium(ScalarField::constant(1.3));
    const Covector f = force_wavefront(W, kFlat, StateU{Point{0.2, 0.1}, Vector{0.4, -0.9}, 0.0});
    CHECK(f.norm_inf() == 0.0);
}

TEST_CASE("projectors split along the velocity") {
    const MetricChart chart = charts::sphere();
    const Point x{0.8, 0.0};
    const Vector v{0.3, 1.1};
    const Projectors pr = projectors(chart, x, v);
    const Matrix I = Matrix::Identity(2, 2);
    CHECK((pr.Q + pr.P - I).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((pr.Q * pr.Q - pr.Q).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((pr.Q * v.values() - v.values()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((pr.P * v.values()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(kind_of([&] { projectors(chart, x, Vector{0.0, 0.0}); }) == ErrorKind::ZeroVelocity);
}

TEST_CASE("zero h reproduces the wave-front force bit for bit") {
    const HFunction zero = hfunctions::zero();
    for (double a = 0.0; a < 6.0; a += 0.37) {
        const StateU st{Point{0.3 * a - 0.5, 0.1}, Vector{1.2 * std::cos(a), 1.2 * std::sin(a)}, 0.0};
        const Covector f = force_wavefront(kW, kFlat, st);
        const Covector g = force_normal_shift(kW, zero, kFlat, st);
        CHECK(std::memcmp(f.values().data(), g.values().data(), 2 * sizeof(double)) == 0);
    }
}

TEST_CASE("normal-shift force adds h(W) N / W'") {
    const HFunction h = hfunctions::linear(2.0, 0.5);
    const StateU st{Point{0.1, 0.2}, Vector{0.0, 0.8}, 0.0};
    const Covector diff = force_normal_shift(kW, h, kFlat, st) - force_wavefront(kW, kFlat, st);
    const double w = kW.W(st.x, 0.8);
    const double w1 = kW.W1(st.x, 0.8);
    CHECK(diff[0] == doctest::Approx(0.0));
    CHECK(diff[1] == doctest::Approx((2.0 * w + 0.5) / w1));
}

TEST_CASE("force errors") {
    const WField flat_in_u = wfields::from_function([](const Point& x, double) { return x[0]; }, 1);
    CHECK(kind_of([&] { force_wavefront(flat_in_u, kFlat, StateU{Point{0.0, 0.0}, Vector{1.0, 0.0}, 0.0}); }) ==
          ErrorKind::DegenerateSlope);
    CHECK(kind_of([&] { force_wavefront(kW, kFlat, StateU{Point{0.0, 0.0}, Vector{0.0, 0.0}, 0.0}); }) ==
          ErrorKind::ZeroVelocity);
}

TEST_CASE("force field wrappers") {
    const ForceField F = wavefront_force(kW, kFlat);
    const StateU st{Point{0.0, 0.0}, Vector{1.0, 0.0}, 0.0};
    CHECK((F.eval(st) - force_wavefront(kW, kFlat, st)).norm_inf() == 0.0);
    CHECK_FALSE(static_cast<bool>(F.h));
    const ForceField G = normal_shift_force(kW, hfunctions::identity(), kFlat);
    CHECK(static_cast<bool>(G.h));
    CHECK(G.label != F.label);
}
