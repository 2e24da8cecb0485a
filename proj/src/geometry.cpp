#include "nslab/geometry.hpp"

#include "nslab/errors.hpp"
#include "nslab/fd.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nslab {

DomainBox DomainBox::cube(int n, double lo, double hi) {
    return DomainBox{std::vector<std::pair<double, double>>(static_cast<size_t>(n), {lo, hi})};
}

bool DomainBox::contains(const Point& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        if (!std::isfinite(x[i]) || x[i] < bounds[i].first || x[i] > bounds[i].second) return false;
    }
    return true;
}

MetricChart::MetricChart(std::string name, int dim, MetricFn metric, DomainBox domain,
                         PartialsFn partials, double fd_step)
    : name_(std::move(name)), dim_(dim), metric_(std::move(metric)), domain_(std::move(domain)),
      partials_(std::move(partials)), fd_step_(fd_step) {
    if (dim_ < 2) throw Error(ErrorKind::Shape, "chart dimension must be at least 2");
    if (domain_.dim() != dim_) throw Error(ErrorKind::Shape, "domain box does not match chart dimension");
    if (!(fd_step_ > 0.0)) throw Error(ErrorKind::Config, "fd_step must be positive");
}

void MetricChart::check_dim(int n, const char* what) const {
    if (n != dim_) {
        std::ostringstream os;
        os << what << " has " << n << " components, chart '" << name_ << "' has dimension " << dim_;
        throw Error(ErrorKind::Shape, os.str());
    }
}

void MetricChart::check_domain(const Point& x) const {
    check_dim(x.size(), "point");
    if (!domain_.contains(x)) {
        throw Error(ErrorKind::Domain,
                    "point " + to_string(x.values()) + " outside the domain of chart '" + name_ + "'");
    }
}

Matrix MetricChart::metric(const Point& x) const {
    check_domain(x);
    Matrix g = metric_(x);
    const double scale = g.cwiseAbs().maxCoeff();
    if (!g.allFinite() || (g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::DegenerateMetric,
                    "degenerate metric: not symmetric at " + to_string(x.values()));
    }
    Eigen::LLT<Matrix> llt(g);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::DegenerateMetric,
                    "degenerate metric: not positive definite at " + to_string(x.values()));
    }
    return g;
}

Matrix MetricChart::inverse_metric(const Point& x) const {
    Matrix g = metric(x);
    return g.llt().solve(Matrix::Identity(dim_, dim_));
}

MetricPartials MetricChart::metric_partials_fd(const Point& x) const {
    check_domain(x);
    const double h = fd::step(fd_step_, x.values());
    MetricPartials dg(static_cast<size_t>(dim_));
    Point y = x;
    for (int k = 0; k < dim_; ++k) {
        y[k] = x[k] + h;
        Matrix gp = metric_(y);
        y[k] = x[k] - h;
        Matrix gm = metric_(y);
        y[k] = x[k];
        dg[k] = (gp - gm) / (2.0 * h);
    }
    return dg;
}

MetricPartials MetricChart::metric_partials(const Point& x) const {
    if (!partials_) return metric_partials_fd(x);
    check_domain(x);
    return partials_(x);
}

Vector Christoffel::contract(const Vector& a, const Vector& b) const {
    Vector out = Vector::zero(dim_);
    for (int k = 0; k < dim_; ++k) {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * a[i] * b[j];
        out[k] = s;
    }
    return out;
}

Christoffel christoffel_from(const Matrix& g_inv, const MetricPartials& dg) {
    const int n = static_cast<int>(g_inv.rows());
    // First kind: Gamma_{s,ij} = 1/2 (d_j g_si + d_i g_sj - d_s g_ij)
    std::vector<double> first(static_cast<size_t>(n * n * n));
    auto at = [n](int s, int i, int j) { return static_cast<size_t>((s * n + i) * n + j); };
    for (int s = 0; s < n; ++s)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = 0.5 * (dg[j](s, i) + dg[i](s, j) - dg[s](i, j));
                first[at(s, i, j)] = v;
                first[at(s, j, i)] = v;
            }
    Christoffel gamma(n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 0.0;
                for (int s = 0; s < n; ++s) v += g_inv(k, s) * first[at(s, i, j)];
                gamma(k, i, j) = v;
                gamma(k, j, i) = v;
            }
    return gamma;
}

Christoffel christoffel_at(const MetricChart& chart, const Point& x) {
    return christoffel_from(chart.inverse_metric(x), chart.metric_partials(x));
}

Covector lower(const MetricChart& chart, const Point& x, const Vector& v) {
    chart.check_dim(v.size(), "vector");
    return Covector(chart.metric(x) * v.values());
}

Vector raise(const MetricChart& chart, const Point& x, const Covector& p) {
    chart.check_dim(p.size(), "covector");
    return Vector(chart.metric(x).llt().solve(p.values()));
}

double inner(const MetricChart& chart, const Point& x, const Vector& a, const Vector& b) {
    chart.check_dim(a.size(), "vector");
    chart.check_dim(b.size(), "vector");
    return a.values().dot(chart.metric(x) * b.values());
}

double norm(const MetricChart& chart, const Point& x, const Vector& v) {
    return std::sqrt(inner(chart, x, v, v));
}

double norm(const MetricChart& chart, const Point& x, const Covector& p) {
    return std::sqrt(p.values().dot(raise(chart, x, p).values()));
}

Covector covariant_rate(const MetricChart& chart, const Point& x, const Vector& xdot,
                        const Covector& p, const Covector& pdot_raw) {
    chart.check_dim(xdot.size(), "velocity");
    chart.check_dim(p.size(), "covector");
    chart.check_dim(pdot_raw.size(), "covector rate");
    const Christoffel gamma = christoffel_at(chart, x);
    const int n = chart.dim();
    Covector out = pdot_raw;
    for (int i = 0; i < n; ++i) {
        double corr = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) corr += gamma(k, i, j) * p[k] * xdot[j];
        out[i] -= corr;
    }
    return out;
}

Covector raw_rate(const Christoffel& gamma, const Vector& xdot, const Covector& p,
                  const Covector& rate) {
    const int n = gamma.dim();
    Covector out = rate;
    for (int i = 0; i < n; ++i) {
        double corr = 0.0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) corr += gamma(k, i, j) * p[k] * xdot[j];
        out[i] += corr;
    }
    return out;
}

namespace charts {

MetricChart euclidean(int n, double half_width) {
    return MetricChart(
        "euclidean", n, [n](const Point&) { return Matrix::Identity(n, n).eval(); },
        DomainBox::cube(n, -half_width, half_width),
        [n](const Point&) { return MetricPartials(static_cast<size_t>(n), Matrix::Zero(n, n)); });
}

MetricChart polar() {
    DomainBox box{{{1e-9, 1e3}, {-1e3, 1e3}}};
    return MetricChart(
        "polar", 2,
        [](const Point& x) {
            Matrix g = Matrix::Zero(2, 2);
            g(0, 0) = 1.0;
            g(1, 1) = x[0] * x[0];
            return g;
        },
        box,
        [](const Point& x) {
            MetricPartials dg(2, Matrix::Zero(2, 2));
            dg[0](1, 1) = 2.0 * x[0];
            return dg;
        });
}

MetricChart sphere() {
    constexpr double pi = std::numbers::pi;
    DomainBox box{{{1e-9, pi - 1e-9}, {-1e3, 1e3}}};
    return MetricChart(
        "sphere", 2,
        [](const Point& x) {
            Matrix g = Matrix::Zero(2, 2);
            const double s = std::sin(x[0]);
            g(0, 0) = 1.0;
            g(1, 1) = s * s;
            return g;
        },
        box,
        [](const Point& x) {
            MetricPartials dg(2, Matrix::Zero(2, 2));
            dg[0](1, 1) = 2.0 * std::sin(x[0]) * std::cos(x[0]);
            return dg;
        });
}

MetricChart diagonal(std::vector<ScalarField> entries, DomainBox domain) {
    const int n = static_cast<int>(entries.size());
    bool analytic = true;
    for (const auto& e : entries) analytic = analytic && static_cast<bool>(e.gradient);
    MetricChart::PartialsFn partials;
    if (analytic) {
        partials = [entries, n](const Point& x) {
            MetricPartials dg(static_cast<size_t>(n), Matrix::Zero(n, n));
            for (int i = 0; i < n; ++i) {
                const Eigen::VectorXd gi = entries[i].gradient(x);
                for (int k = 0; k < n; ++k) dg[k](i, i) = gi[k];
            }
            return dg;
        };
    }
    return MetricChart(
        "diagonal", n,
        [entries, n](const Point& x) {
            Matrix g = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i) g(i, i) = entries[i](x);
            return g;
        },
        std::move(domain), partials);
}

MetricChart conformal(int n, ScalarField phi, DomainBox domain) {
    MetricChart::PartialsFn partials;
    if (phi.gradient) {
        partials = [phi, n](const Point& x) {
            const double f = std::exp(2.0 * phi(x));
            const Eigen::VectorXd d = phi.gradient(x);
            MetricPartials dg(static_cast<size_t>(n));
            for (int k = 0; k < n; ++k) dg[k] = (2.0 * d[k] * f) * Matrix::Identity(n, n);
            return dg;
        };
    }
    return MetricChart(
        "conformal", n,
        [phi, n](const Point& x) { return (std::exp(2.0 * phi(x)) * Matrix::Identity(n, n)).eval(); },
        std::move(domain), partials);
}

} // namespace charts

} // namespace nslab
