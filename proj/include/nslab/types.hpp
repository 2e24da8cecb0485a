#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <initializer_list>
#include <string>

namespace nslab {

using Matrix = Eigen::MatrixXd;

// Component arrays tagged by their variance so that points, vectors and
// covectors cannot be mixed up silently.
template <class Tag>
class Components {
public:
    Components() = default;
    explicit Components(Eigen::VectorXd values) : values_(std::move(values)) {}
    Components(std::initializer_list<double> values)
        : values_(static_cast<Eigen::Index>(values.size())) {
        Eigen::Index i = 0;
        for (double v : values) values_[i++] = v;
    }

    static Components zero(int n) { return Components(Eigen::VectorXd::Zero(n)); }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }

    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

    double norm_inf() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }
    bool all_finite() const { return values_.allFinite(); }

    Components& operator+=(const Components& o) { values_ += o.values_; return *this; }
    Components& operator-=(const Components& o) { values_ -= o.values_; return *this; }
    Components& operator*=(double s) { values_ *= s; return *this; }
    Components& operator/=(double s) { values_ /= s; return *this; }

    friend Components operator+(Components a, const Components& b) { return a += b; }
    friend Components operator-(Components a, const Components& b) { return a -= b; }
    friend Components operator-(Components a) { a.values_ = -a.values_; return a; }
    friend Components operator*(Components a, double s) { return a *= s; }
    friend Components operator*(double s, Components a) { return a *= s; }
    friend Components operator/(Components a, double s) { return a /= s; }

private:
    Eigen::VectorXd values_;
};

struct PointTag {};
struct VectorTag {};
struct CovectorTag {};

// Chart coordinates x^1..x^n.
using Point = Components<PointTag>;
// Upper-index components v^i.
using Vector = Components<VectorTag>;
// Lower-index components p_i.
using Covector = Components<CovectorTag>;

// Natural pairing p_i v^i.
inline double pair(const Covector& p, const Vector& v) { return p.values().dot(v.values()); }

// Displacement of a point along a vector (used by steppers and finite differences).
inline Point displace(const Point& x, const Vector& v, double scale = 1.0) {
    return Point(x.values() + scale * v.values());
}

std::string to_string(const Eigen::VectorXd& v);

} // namespace nslab
