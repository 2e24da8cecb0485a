#include <doctest.h>

#include "nslab/errors.hpp"
#include "nslab/geometry.hpp"

#include <cmath>

using namespace nslab;

TEST_CASE("polar chart connection coefficients") {
    const MetricChart chart = charts::polar();
    const Point x{2.0, 0.4};
    const Christoffel g = christoffel_at(chart, x);
    CHECK(g(0, 1, 1) == doctest::Approx(-2.0));
    CHECK(g(1, 0, 1) == doctest::Approx(0.5));
    CHECK(g(1, 1, 0) == doctest::Approx(0.5));
    CHECK(g(0, 0, 0) == 0.0);
    CHECK(g(1, 1, 1) == 0.0);
}

TEST_CASE("sphere chart connection coefficients") {
    const MetricChart chart = charts::sphere();
    const double th = 0.9;
    const Christoffel g = christoffel_at(chart, Point{th, 1.0});
    CHECK(g(0, 1, 1) == doctest::Approx(-std::sin(th) * std::cos(th)));
    CHECK(g(1, 0, 1) == doctest::Approx(std::cos(th) / std::sin(th)));
}

TEST_CASE("finite-difference metric partials track the analytic ones") {
    auto phi = ScalarField{[](const Point& x) { return 0.3 * x[0] * x[1] + 0.1 * x[0]; },
                           [](const Point& x) {
                               return Eigen::VectorXd(Eigen::Vector2d(0.3 * x[1] + 0.1, 0.3 * x[0]));
                           }};
    const DomainBox box = DomainBox::cube(2, -2.0, 2.0);
    const MetricChart analytic = charts::conformal(2, phi, box);
    const MetricChart numeric = charts::conformal(2, ScalarField{phi.value, nullptr}, box);
    REQUIRE(analytic.has_analytic_partials());
    REQUIRE_FALSE(numeric.has_analytic_partials());

    const Point x{0.7, -0.4};
    const Christoffel a = christoffel_at(analytic, x);
    const Christoffel b = christoffel_at(numeric, x);
    for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(a(k, i, j) - b(k, i, j)) < 1e-8);
}

TEST_CASE("lower and raise are mutually inverse") {
    const MetricChart chart = charts::sphere();
    const Point x{1.1, 0.2};
    const Vector v{0.3, -1.7};
    const Vector back = raise(chart, x, lower(chart, x, v));
    CHECK((back - v).norm_inf() < 1e-14);
    CHECK(norm(chart, x, v) == doctest::Approx(std::sqrt(0.09 + std::pow(std::sin(1.1) * 1.7, 2))));
    CHECK(norm(chart, x, lower(chart, x, v)) == doctest::Approx(norm(chart, x, v)));
}

TEST_CASE("raw_rate inverts covariant_rate") {
    const MetricChart chart = charts::polar();
    const Point x{1.5, 0.3};
    const Vector xdot{0.2, 0.9};
    const Covector p{1.0, -0.4};
    const Covector raw{0.05, 0.7};
    const Covector cov = covariant_rate(chart, x, xdot, p, raw);
    const Covector back = raw_rate(christoffel_at(chart, x), xdot, p, cov);
    CHECK((back - raw).norm_inf() < 1e-15);
}

TEST_CASE("metric queries validate domain, shape and definiteness") {
    const MetricChart chart = charts::polar();
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Io;
    };
    CHECK(kind_of([&] { chart.metric(Point{-1.0, 0.0}); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { chart.metric(Point{1.0, 0.0, 0.0}); }) == ErrorKind::Shape);
    CHECK(kind_of([&] { lower(chart, Point{1.0, 0.0}, Vector{1.0}); }) == ErrorKind::Shape);

    const MetricChart bad = charts::diagonal({ScalarField::constant(1.0), ScalarField::constant(-1.0)},
                                             DomainBox::cube(2, -1.0, 1.0));
    CHECK(kind_of([&] { bad.metric(Point{0.0, 0.0}); }) == ErrorKind::DegenerateMetric);
}
