#pragma once

#include "nslab/geometry.hpp"
#include "nslab/legendre.hpp"

#include <functional>
#include <string>

namespace nslab {

struct Projectors {
    Matrix Q;  // Q^i_k = v^i v_k / |v|^2
    Matrix P;  // P = 1 - Q
};

Projectors projectors(const MetricChart& chart, const Point& x, const Vector& v);

// Function of one variable feeding the dissipative term of the general
// normal-shift force.
using HFunction = std::function<double(double)>;

namespace hfunctions {
HFunction zero();
HFunction identity();
HFunction linear(double slope, double offset);
} // namespace hfunctions

// F_k = -|u| sum_i (nabla_i W / W') (2 N^i N_k - delta^i_k), N = u / |u|.
Covector force_wavefront(const WField& W, const MetricChart& chart, const StateU& st);

// F_k = h(W) N_k / W' + force_wavefront. A zero h(W) adds nothing, so h = 0
// reproduces force_wavefront bit for bit.
Covector force_normal_shift(const WField& W, const HFunction& h, const MetricChart& chart, const StateU& st);

// Covariant force of the Newtonian form together with the W field it was
// derived from.
struct ForceField {
    std::function<Covector(const StateU&)> eval;
    WField source;
    HFunction h;  // empty for the wavefront force
    std::string label;
};

ForceField wavefront_force(WField W, MetricChart chart);
ForceField normal_shift_force(WField W, HFunction h, MetricChart chart);

} // namespace nslab
