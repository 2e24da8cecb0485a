#pragma once

#include "nslab/geometry.hpp"
#include "nslab/scalar_field.hpp"
#include "nslab/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nslab {

// Dense order-r array over an n-dimensional index space, row-major.
class SymTensor {
public:
    SymTensor(int dim, int rank);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    size_t size() const { return data_.size(); }

    double& operator[](size_t flat) { return data_[flat]; }
    double operator[](size_t flat) const { return data_[flat]; }
    double& at(std::initializer_list<int> idx);
    double at(std::initializer_list<int> idx) const;

    const std::vector<double>& data() const { return data_; }

    // Average over all index permutations.
    SymTensor symmetrized() const;
    double asymmetry() const;

    // Contract the trailing `count` indices with p; the result has rank - count.
    SymTensor contract_tail(const Eigen::VectorXd& p, int count) const;
    // rank-0 value, rank-1 vector, rank-2 matrix views of small results
    double scalar() const { return data_[0]; }
    Eigen::VectorXd as_vector() const;
    Matrix as_matrix() const;

    SymTensor& operator+=(const SymTensor& o);
    SymTensor& operator*=(double s);

private:
    size_t flat_index(std::initializer_list<int> idx) const;
    int dim_;
    int rank_;
    std::vector<double> data_;
};

// Polynomial Hamiltonian symbol H(x, p) = sum_r a^{k1..kr}(x) p_k1 ... p_kr.
class PolySymbol {
public:
    using CoeffFn = std::function<SymTensor(const Point&)>;
    // partials[q] = d a^{k1..kr} / d x^q
    using CoeffPartialsFn = std::function<std::vector<SymTensor>(const Point&)>;

    struct Term {
        CoeffFn coeff;
        CoeffPartialsFn partials;  // optional
        bool symmetric = false;    // skip symmetrization when the caller guarantees it
    };

    // terms[r] is the order-r coefficient; degree = terms.size() - 1.
    PolySymbol(std::string name, int dim, std::vector<Term> terms, double fd_step = 1e-5);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    int degree() const { return static_cast<int>(terms_.size()) - 1; }

    std::vector<SymTensor> coefficients(const Point& x) const;
    SymTensor coefficient(int r, const Point& x) const;
    std::vector<SymTensor> coefficient_partials(int r, const Point& x) const;
    bool has_analytic_partials() const;

private:
    std::string name_;
    int dim_;
    std::vector<Term> terms_;
    double fd_step_;
};

double eval_H(const PolySymbol& sym, const Point& x, const Covector& p);
// Momentum gradient dH/dp_q.
Vector grad_p(const PolySymbol& sym, const Point& x, const Covector& p);
// d^2 H / dp_i dp_j
Matrix hess_p(const PolySymbol& sym, const Point& x, const Covector& p);
// Plain coordinate derivative dH/dx^q at fixed p components.
Covector partial_x(const PolySymbol& sym, const Point& x, const Covector& p);
// Spatial gradient: dH/dx^q + sum_{a,b} p_a Gamma^a_qb dH/dp_b.
Covector grad_x(const PolySymbol& sym, const MetricChart& chart, const Point& x, const Covector& p);
// Omega = p_i dH/dp_i
double omega(const PolySymbol& sym, const Point& x, const Covector& p);

// Extended scalar field on the cotangent bundle, differentiated numerically
// when no analytic gradients are given.
struct ExtendedScalar {
    std::function<double(const Point&, const Covector&)> value;
    std::function<Vector(const Point&, const Covector&)> momentum_gradient;   // optional
    std::function<Covector(const Point&, const Covector&)> partial_x;         // optional
    double fd_step = 1e-5;
};

Vector momentum_gradient(const ExtendedScalar& f, const Point& x, const Covector& p);
Covector spatial_gradient(const ExtendedScalar& f, const MetricChart& chart, const Point& x,
                          const Covector& p);
ExtendedScalar as_extended(const PolySymbol& sym);

// Phase function S with its gradient and covariant Hessian.
class PhaseField {
public:
    using ValueFn = std::function<double(const Point&)>;
    using GradFn = std::function<Covector(const Point&)>;
    using HessFn = std::function<Matrix(const Point&)>;

    // Gradient and Hessian by nested central differences (step 1e-4 (1 + |x|_inf)),
    // Hessian corrected by the connection terms.
    static PhaseField from_value(ValueFn S, MetricChart chart);
    // Analytic coordinate derivatives; `second` holds d^2 S / dx^i dx^j.
    static PhaseField from_derivatives(ValueFn S, GradFn grad, HessFn second, MetricChart chart);

    double value(const Point& x) const { return S_(x); }
    Covector grad(const Point& x) const { return grad_(x); }
    Matrix hess(const Point& x) const { return hess_(x); }

private:
    PhaseField(ValueFn S, GradFn grad, HessFn hess)
        : S_(std::move(S)), grad_(std::move(grad)), hess_(std::move(hess)) {}
    ValueFn S_;
    GradFn grad_;
    HessFn hess_;
};

// H(x, grad S(x)); zero where the eikonal equation holds.
double eikonal_residual(const PolySymbol& sym, const PhaseField& S, const Point& x);

// First-order transport operator applied to an amplitude given pointwise by
// its value and gradient.
double apply_R1(const PolySymbol& sym, const MetricChart& chart, const PhaseField& S,
                double phi_value, const Covector& phi_grad, const Point& x);

namespace symbols {

// scale * delta^{ij} p_i p_j + constant(x)
PolySymbol quadratic(int n, double scale, ScalarField constant);
// |p|^2 - n(x)^2 for a refractive index n(x)
PolySymbol index_medium(int n, ScalarField index);
// (delta^{ij} p_i p_j)^2 + constant(x)
PolySymbol quartic(int n, ScalarField constant);
// g^{ij}(x) p_i p_j + constant(x)
PolySymbol inverse_metric(const MetricChart& chart, ScalarField constant);

} // namespace symbols

} // namespace nslab
