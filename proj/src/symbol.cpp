#include "nslab/symbol.hpp"

#include "nslab/errors.hpp"
#include "nslab/fd.hpp"

#include <algorithm>
#include <numeric>

namespace nslab {

namespace {

size_t ipow(int base, int exp) {
    size_t out = 1;
    for (int i = 0; i < exp; ++i) out *= static_cast<size_t>(base);
    return out;
}

std::vector<int> unflatten(size_t flat, int dim, int rank) {
    std::vector<int> idx(static_cast<size_t>(rank));
    for (int k = rank - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(flat % static_cast<size_t>(dim));
        flat /= static_cast<size_t>(dim);
    }
    return idx;
}

size_t flatten(const std::vector<int>& idx, int dim) {
    size_t flat = 0;
    for (int i : idx) flat = flat * static_cast<size_t>(dim) + static_cast<size_t>(i);
    return flat;
}

} // namespace

SymTensor::SymTensor(int dim, int rank) : dim_(dim), rank_(rank), data_(ipow(dim, rank), 0.0) {}

size_t SymTensor::flat_index(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank_) throw Error(ErrorKind::Shape, "tensor index rank mismatch");
    size_t flat = 0;
    for (int i : idx) {
        if (i < 0 || i >= dim_) throw Error(ErrorKind::Shape, "tensor index out of range");
        flat = flat * static_cast<size_t>(dim_) + static_cast<size_t>(i);
    }
    return flat;
}

double& SymTensor::at(std::initializer_list<int> idx) { return data_[flat_index(idx)]; }
double SymTensor::at(std::initializer_list<int> idx) const { return data_[flat_index(idx)]; }

SymTensor SymTensor::symmetrized() const {
    if (rank_ < 2) return *this;
    SymTensor out(dim_, rank_);
    std::vector<int> perm(static_cast<size_t>(rank_));
    for (size_t f = 0; f < data_.size(); ++f) {
        const std::vector<int> idx = unflatten(f, dim_, rank_);
        std::iota(perm.begin(), perm.end(), 0);
        double sum = 0.0;
        int count = 0;
        std::vector<int> permuted(idx.size());
        do {
            for (size_t k = 0; k < perm.size(); ++k) permuted[k] = idx[static_cast<size_t>(perm[k])];
            sum += data_[flatten(permuted, dim_)];
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.data_[f] = sum / count;
    }
    return out;
}

double SymTensor::asymmetry() const {
    const SymTensor s = symmetrized();
    double worst = 0.0;
    for (size_t f = 0; f < data_.size(); ++f) worst = std::max(worst, std::abs(data_[f] - s.data_[f]));
    return worst;
}

SymTensor SymTensor::contract_tail(const Eigen::VectorXd& p, int count) const {
    if (count > rank_ || p.size() != dim_) throw Error(ErrorKind::Shape, "bad tensor contraction");
    SymTensor cur = *this;
    for (int c = 0; c < count; ++c) {
        SymTensor next(dim_, cur.rank_ - 1);
        for (size_t j = 0; j < next.data_.size(); ++j) {
            double s = 0.0;
            const size_t base = j * static_cast<size_t>(dim_);
            for (int k = 0; k < dim_; ++k) s += cur.data_[base + static_cast<size_t>(k)] * p[k];
            next.data_[j] = s;
        }
        cur = std::move(next);
    }
    return cur;
}

Eigen::VectorXd SymTensor::as_vector() const {
    if (rank_ != 1) throw Error(ErrorKind::Shape, "tensor is not rank 1");
    return Eigen::Map<const Eigen::VectorXd>(data_.data(), dim_);
}

Matrix SymTensor::as_matrix() const {
    if (rank_ != 2) throw Error(ErrorKind::Shape, "tensor is not rank 2");
    Matrix m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = data_[static_cast<size_t>(i * dim_ + j)];
    return m;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    if (o.dim_ != dim_ || o.rank_ != rank_) throw Error(ErrorKind::Shape, "tensor shape mismatch");
    for (size_t f = 0; f < data_.size(); ++f) data_[f] += o.data_[f];
    return *this;
}

SymTensor& SymTensor::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

PolySymbol::PolySymbol(std::string name, int dim, std::vector<Term> terms, double fd_step)
    : name_(std::move(name)), dim_(dim), terms_(std::move(terms)), fd_step_(fd_step) {
    if (terms_.empty()) throw Error(ErrorKind::Config, "symbol needs at least the order-0 term");
    for (auto& t : terms_) {
        if (!t.coeff) throw Error(ErrorKind::Config, "symbol term without coefficient");
        if (!t.symmetric) {
            t.coeff = [raw = std::move(t.coeff)](const Point& x) { return raw(x).symmetrized(); };
            if (t.partials) {
                t.partials = [raw = std::move(t.partials)](const Point& x) {
                    std::vector<SymTensor> d = raw(x);
                    for (auto& s : d) s = s.symmetrized();
                    return d;
                };
            }
            t.symmetric = true;
        }
    }
}

SymTensor PolySymbol::coefficient(int r, const Point& x) const {
    SymTensor a = terms_[static_cast<size_t>(r)].coeff(x);
    if (a.rank() != r || a.dim() != dim_) throw Error(ErrorKind::Shape, "coefficient has wrong shape");
    return a;
}

std::vector<SymTensor> PolySymbol::coefficients(const Point& x) const {
    if (x.size() != dim_) throw Error(ErrorKind::Shape, "point dimension does not match symbol");
    std::vector<SymTensor> out;
    out.reserve(terms_.size());
    for (int r = 0; r <= degree(); ++r) out.push_back(coefficient(r, x));
    return out;
}

bool PolySymbol::has_analytic_partials() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return static_cast<bool>(t.partials); });
}

std::vector<SymTensor> PolySymbol::coefficient_partials(int r, const Point& x) const {
    const Term& t = terms_[static_cast<size_t>(r)];
    if (t.partials) return t.partials(x);
    const double h = fd::step(fd_step_, x.values());
    std::vector<SymTensor> out;
    Point y = x;
    for (int q = 0; q < dim_; ++q) {
        y[q] = x[q] + h;
        SymTensor plus = t.coeff(y);
        y[q] = x[q] - h;
        SymTensor minus = t.coeff(y);
        y[q] = x[q];
        minus *= -1.0;
        plus += minus;
        plus *= 1.0 / (2.0 * h);
        out.push_back(std::move(plus));
    }
    return out;
}

namespace {

double contract_all(const SymTensor& a, const Eigen::VectorXd& p) {
    return a.contract_tail(p, a.rank()).scalar();
}

void check_p(const PolySymbol& sym, const Point& x, const Covector& p) {
    if (x.size() != sym.dim() || p.size() != sym.dim())
        throw Error(ErrorKind::Shape, "state dimension does not match symbol '" + sym.name() + "'");
}

} // namespace

double eval_H(const PolySymbol& sym, const Point& x, const Covector& p) {
    check_p(sym, x, p);
    double h = 0.0;
    for (const SymTensor& a : sym.coefficients(x)) h += contract_all(a, p.values());
    return h;
}

Vector grad_p(const PolySymbol& sym, const Point& x, const Covector& p) {
    check_p(sym, x, p);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(sym.dim());
    for (const SymTensor& a : sym.coefficients(x)) {
        const int r = a.rank();
        if (r == 0) continue;
        g += r * a.contract_tail(p.values(), r - 1).as_vector();
    }
    return Vector(g);
}

Matrix hess_p(const PolySymbol& sym, const Point& x, const Covector& p) {
    check_p(sym, x, p);
    Matrix h = Matrix::Zero(sym.dim(), sym.dim());
    for (const SymTensor& a : sym.coefficients(x)) {
        const int r = a.rank();
        if (r < 2) continue;
        h += static_cast<double>(r * (r - 1)) * a.contract_tail(p.values(), r - 2).as_matrix();
    }
    return h;
}

Covector partial_x(const PolySymbol& sym, const Point& x, const Covector& p) {
    check_p(sym, x, p);
    Covector d = Covector::zero(sym.dim());
    for (int r = 0; r <= sym.degree(); ++r) {
        const std::vector<SymTensor> da = sym.coefficient_partials(r, x);
        for (int q = 0; q < sym.dim(); ++q) d[q] += contract_all(da[static_cast<size_t>(q)], p.values());
    }
    return d;
}

Covector grad_x(const PolySymbol& sym, const MetricChart& chart, const Point& x, const Covector& p) {
    const Christoffel gamma = christoffel_at(chart, x);
    const Vector dp = grad_p(sym, x, p);
    Covector out = partial_x(sym, x, p);
    const int n = sym.dim();
    for (int q = 0; q < n; ++q) {
        double corr = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) corr += p[a] * gamma(a, q, b) * dp[b];
        out[q] += corr;
    }
    return out;
}

double omega(const PolySymbol& sym, const Point& x, const Covector& p) {
    return pair(p, grad_p(sym, x, p));
}

Vector momentum_gradient(const ExtendedScalar& f, const Point& x, const Covector& p) {
    if (f.momentum_gradient) return f.momentum_gradient(x, p);
    return Vector(fd::gradient([&](const Eigen::VectorXd& q) { return f.value(x, Covector(q)); },
                               p.values(), f.fd_step));
}

Covector spatial_gradient(const ExtendedScalar& f, const MetricChart& chart, const Point& x,
                          const Covector& p) {
    Covector d = f.partial_x
                     ? f.partial_x(x, p)
                     : Covector(fd::gradient([&](const Eigen::VectorXd& y) { return f.value(Point(y), p); },
                                             x.values(), f.fd_step));
    const Christoffel gamma = christoffel_at(chart, x);
    const Vector dp = momentum_gradient(f, x, p);
    const int n = chart.dim();
    for (int q = 0; q < n; ++q)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) d[q] += p[a] * gamma(a, q, b) * dp[b];
    return d;
}

ExtendedScalar as_extended(const PolySymbol& sym) {
    return ExtendedScalar{[sym](const Point& x, const Covector& p) { return eval_H(sym, x, p); }, nullptr,
                          nullptr, 1e-5};
}

PhaseField PhaseField::from_value(ValueFn S, MetricChart chart) {
    auto grad = [S](const Point& x) {
        const double h = fd::step(1e-4, x.values());
        Covector g = Covector::zero(x.size());
        Point y = x;
        for (int k = 0; k < x.size(); ++k) {
            y[k] = x[k] + h;
            const double fp = S(y);
            y[k] = x[k] - h;
            const double fm = S(y);
            y[k] = x[k];
            g[k] = (fp - fm) / (2.0 * h);
        }
        return g;
    };
    auto second = [grad](const Point& x) {
        const double h = fd::step(1e-4, x.values());
        const int n = x.size();
        Matrix m(n, n);
        Point y = x;
        for (int j = 0; j < n; ++j) {
            y[j] = x[j] + h;
            const Covector gp = grad(y);
            y[j] = x[j] - h;
            const Covector gm = grad(y);
            y[j] = x[j];
            for (int i = 0; i < n; ++i) m(i, j) = (gp[i] - gm[i]) / (2.0 * h);
        }
        return Matrix((m + m.transpose()) / 2.0);
    };
    return from_derivatives(std::move(S), grad, second, std::move(chart));
}

PhaseField PhaseField::from_derivatives(ValueFn S, GradFn grad, HessFn second, MetricChart chart) {
    auto hess = [grad, second, chart = std::move(chart)](const Point& x) {
        const Christoffel gamma = christoffel_at(chart, x);
        const Covector dS = grad(x);
        Matrix h = second(x);
        const int n = x.size();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) h(i, j) -= gamma(k, i, j) * dS[k];
        return h;
    };
    return PhaseField(std::move(S), std::move(grad), std::move(hess));
}

double eikonal_residual(const PolySymbol& sym, const PhaseField& S, const Point& x) {
    return eval_H(sym, x, S.grad(x));
}

double apply_R1(const PolySymbol& sym, const MetricChart& chart, const PhaseField& S,
                double phi_value, const Covector& phi_grad, const Point& x) {
    chart.check_domain(x);
    const Covector dS = S.grad(x);
    const Matrix ddS = S.hess(x);
    double first = 0.0;
    double zeroth = 0.0;
    for (const SymTensor& a : sym.coefficients(x)) {
        const int r = a.rank();
        if (r >= 1) first += r * a.contract_tail(dS.values(), r - 1).as_vector().dot(phi_grad.values());
        if (r >= 2) {
            const Matrix m = a.contract_tail(dS.values(), r - 2).as_matrix();
            zeroth += 0.5 * r * (r - 1) * (m.array() * ddS.array()).sum();
        }
    }
    return first + zeroth * phi_value;
}

namespace symbols {

namespace {

PolySymbol::Term zero_term(int n, int r) {
    return {[n, r](const Point&) { return SymTensor(n, r); },
            [n, r](const Point&) { return std::vector<SymTensor>(static_cast<size_t>(n), SymTensor(n, r)); },
            true};
}

PolySymbol::Term scalar_term(int n, ScalarField f) {
    PolySymbol::Term t;
    t.coeff = [f](const Point& x) {
        SymTensor a(x.size(), 0);
        a[0] = f(x);
        return a;
    };
    if (f.gradient) {
        t.partials = [f, n](const Point& x) {
            const Eigen::VectorXd g = f.gradient(x);
            std::vector<SymTensor> d;
            for (int q = 0; q < n; ++q) {
                SymTensor s(n, 0);
                s[0] = g[q];
                d.push_back(s);
            }
            return d;
        };
    }
    t.symmetric = true;
    return t;
}

SymTensor identity2(int n, double scale) {
    SymTensor a(n, 2);
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i * n + i)] = scale;
    return a;
}

} // namespace

PolySymbol quadratic(int n, double scale, ScalarField constant) {
    std::vector<PolySymbol::Term> terms{scalar_term(n, std::move(constant)), zero_term(n, 1),
                                        {[n, scale](const Point&) { return identity2(n, scale); },
                                         zero_term(n, 2).partials, true}};
    return PolySymbol("quadratic", n, std::move(terms));
}

PolySymbol index_medium(int n, ScalarField index) {
    ScalarField c{[index](const Point& x) { return -index(x) * index(x); },
                  [index](const Point& x) { return Eigen::VectorXd(-2.0 * index(x) * index.grad(x)); }};
    std::vector<PolySymbol::Term> terms{scalar_term(n, std::move(c)), zero_term(n, 1),
                                        {[n](const Point&) { return identity2(n, 1.0); },
                                         zero_term(n, 2).partials, true}};
    return PolySymbol("index_medium", n, std::move(terms));
}

PolySymbol quartic(int n, ScalarField constant) {
    // sym(delta^{ij} delta^{kl}) = (d^ij d^kl + d^ik d^jl + d^il d^jk) / 3
    SymTensor a(n, 4);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const double v = ((i == j && k == l) + (i == k && j == l) + (i == l && j == k)) / 3.0;
                    a[static_cast<size_t>(((i * n + j) * n + k) * n + l)] = v;
                }
    std::vector<PolySymbol::Term> terms{scalar_term(n, std::move(constant)), zero_term(n, 1), zero_term(n, 2),
                                        zero_term(n, 3),
                                        {[a](const Point&) { return a; }, zero_term(n, 4).partials, true}};
    return PolySymbol("quartic", n, std::move(terms));
}

PolySymbol inverse_metric(const MetricChart& chart, ScalarField constant) {
    const int n = chart.dim();
    auto to_tensor = [n](const Matrix& m) {
        SymTensor a(n, 2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a[static_cast<size_t>(i * n + j)] = m(i, j);
        return a;
    };
    PolySymbol::Term quad;
    quad.coeff = [chart, to_tensor](const Point& x) { return to_tensor(chart.inverse_metric(x)); };
    quad.partials = [chart, to_tensor](const Point& x) {
        const Matrix gi = chart.inverse_metric(x);
        std::vector<SymTensor> d;
        for (const Matrix& dg : chart.metric_partials(x)) {
            Matrix m = -gi * dg * gi;
            d.push_back(to_tensor((m + m.transpose()) / 2.0));
        }
        return d;
    };
    quad.symmetric = true;
    return PolySymbol("inverse_metric", n, {scalar_term(n, std::move(constant)), zero_term(n, 1), quad});
}

} // namespace symbols

} // namespace nslab
