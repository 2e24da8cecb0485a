#include "nslab/forces.hpp"

#include "nslab/errors.hpp"

#include <cmath>

namespace nslab {

Projectors projectors(const MetricChart& chart, const Point& x, const Vector& v) {
    const Covector v_low = lower(chart, x, v);
    const double v2 = pair(v_low, v);
    if (!(v2 > 0.0)) throw Error(ErrorKind::ZeroVelocity, "projector undefined at zero velocity");
    const int n = chart.dim();
    Projectors out;
    out.Q = v.values() * v_low.values().transpose() / v2;
    out.P = Matrix::Identity(n, n) - out.Q;
    return out;
}

namespace hfunctions {
HFunction zero() { return [](double) { return 0.0; }; }
HFunction identity() { return [](double w) { return w; }; }
HFunction linear(double slope, double offset) {
    return [slope, offset](double w) { return slope * w + offset; };
}
} // namespace hfunctions

namespace {

struct UnitDirection {
    double speed;
    Vector N;
    Covector N_low;
};

UnitDirection unit_direction(const MetricChart& chart, const StateU& st) {
    const double speed = norm(chart, st.x, st.u);
    if (!(speed > 0.0)) throw Error(ErrorKind::ZeroVelocity, "force undefined at zero velocity");
    const Vector N = st.u / speed;
    return {speed, N, lower(chart, st.x, N)};
}

double checked_slope(const WField& W, const Point& x, double speed) {
    const double w1 = W.W1(x, speed);
    if (w1 == 0.0 || !std::isfinite(w1))
        throw Error(ErrorKind::DegenerateSlope, "degenerate W slope at x = " + to_string(x.values()));
    return w1;
}

Covector wavefront_part(const WField& W, const UnitDirection& d, double w1, const StateU& st) {
    const Covector gw = W.gradx_W(st.x, d.speed);
    const double along = pair(gw, d.N);
    // -|u|/W' * (2 (grad W . N) N_k - grad_k W)
    Covector f = (2.0 * along) * d.N_low - gw;
    f *= -d.speed / w1;
    return f;
}

} // namespace

Covector force_wavefront(const WField& W, const MetricChart& chart, const StateU& st) {
    const UnitDirection d = unit_direction(chart, st);
    return wavefront_part(W, d, checked_slope(W, st.x, d.speed), st);
}

Covector force_normal_shift(const WField& W, const HFunction& h, const MetricChart& chart, const StateU& st) {
    const UnitDirection d = unit_direction(chart, st);
    const double w1 = checked_slope(W, st.x, d.speed);
    Covector f = wavefront_part(W, d, w1, st);
    const double hw = h(W.W(st.x, d.speed));
    if (hw != 0.0) f += d.N_low * (hw / w1);
    return f;
}

ForceField wavefront_force(WField W, MetricChart chart) {
    ForceField ff;
    ff.eval = [W, chart](const StateU& st) { return force_wavefront(W, chart, st); };
    ff.source = std::move(W);
    ff.label = "wavefront";
    return ff;
}

ForceField normal_shift_force(WField W, HFunction h, MetricChart chart) {
    ForceField ff;
    ff.eval = [W, h, chart](const StateU& st) { return force_normal_shift(W, h, chart, st); };
    ff.source = std::move(W);
    ff.h = std::move(h);
    ff.label = "normal_shift";
    return ff;
}

} // namespace nslab
