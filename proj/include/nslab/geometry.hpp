#pragma once

#include "nslab/scalar_field.hpp"
#include "nslab/types.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace nslab {

// Closed interval per coordinate axis.
struct DomainBox {
    std::vector<std::pair<double, double>> bounds;

    static DomainBox cube(int n, double lo, double hi);
    int dim() const { return static_cast<int>(bounds.size()); }
    bool contains(const Point& x) const;
};

// partials[k](i, j) = d g_ij / d x^k
using MetricPartials = std::vector<Matrix>;

// Coordinate chart carrying a Riemannian metric. Metric queries validate the
// domain box, the symmetry of g and its positive definiteness.
class MetricChart {
public:
    using MetricFn = std::function<Matrix(const Point&)>;
    using PartialsFn = std::function<MetricPartials(const Point&)>;

    MetricChart(std::string name, int dim, MetricFn metric, DomainBox domain,
                PartialsFn partials = nullptr, double fd_step = 1e-5);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const DomainBox& domain() const { return domain_; }
    double fd_step() const { return fd_step_; }
    bool has_analytic_partials() const { return static_cast<bool>(partials_); }

    // Throws Domain when x lies outside the box, DegenerateMetric when g(x)
    // is not symmetric positive definite.
    Matrix metric(const Point& x) const;
    Matrix inverse_metric(const Point& x) const;

    // Analytic partials when supplied, central differences otherwise.
    MetricPartials metric_partials(const Point& x) const;
    MetricPartials metric_partials_fd(const Point& x) const;

    void check_domain(const Point& x) const;
    void check_dim(int n, const char* what) const;

private:
    std::string name_;
    int dim_;
    MetricFn metric_;
    DomainBox domain_;
    PartialsFn partials_;
    double fd_step_;
};

// Connection coefficients of the metric connection, Gamma^k_ij.
class Christoffel {
public:
    explicit Christoffel(int dim) : dim_(dim), gamma_(static_cast<size_t>(dim * dim * dim), 0.0) {}

    int dim() const { return dim_; }
    double operator()(int k, int i, int j) const { return gamma_[index(k, i, j)]; }
    double& operator()(int k, int i, int j) { return gamma_[index(k, i, j)]; }

    // sum_{i,j} Gamma^k_ij a^i b^j
    Vector contract(const Vector& a, const Vector& b) const;

private:
    size_t index(int k, int i, int j) const {
        return static_cast<size_t>((k * dim_ + i) * dim_ + j);
    }
    int dim_;
    std::vector<double> gamma_;
};

Christoffel christoffel_at(const MetricChart& chart, const Point& x);
Christoffel christoffel_from(const Matrix& g_inv, const MetricPartials& dg);

Covector lower(const MetricChart& chart, const Point& x, const Vector& v);
Vector raise(const MetricChart& chart, const Point& x, const Covector& p);

double inner(const MetricChart& chart, const Point& x, const Vector& a, const Vector& b);
double norm(const MetricChart& chart, const Point& x, const Vector& v);
double norm(const MetricChart& chart, const Point& x, const Covector& p);

// nabla_t p_i = pdot_i - Gamma^k_ij p_k xdot^j
Covector covariant_rate(const MetricChart& chart, const Point& x, const Vector& xdot,
                        const Covector& p, const Covector& pdot_raw);
// Inverse of covariant_rate: the raw rate whose covariant rate is `rate`.
Covector raw_rate(const Christoffel& gamma, const Vector& xdot, const Covector& p,
                  const Covector& rate);

namespace charts {

MetricChart euclidean(int n, double half_width = 1e3);
// (r, theta) with g = diag(1, r^2).
MetricChart polar();
// (theta, phi) on the unit sphere, g = diag(1, sin^2 theta).
MetricChart sphere();
// g = diag(entries[i](x)); gradients of the entries are optional.
MetricChart diagonal(std::vector<ScalarField> entries, DomainBox domain);
// g = exp(2 phi(x)) * identity
MetricChart conformal(int n, ScalarField phi, DomainBox domain);

} // namespace charts

} // namespace nslab
