#include "nslab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nslab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(Form form) {
    switch (form) {
    case Form::Hamilton: return "hamilton";
    case Form::Modified: return "modified";
    case Form::Newtonian: return "newtonian";
    }
    return "?";
}

Form form_from_string(const std::string& name) {
    if (name == "hamilton") return Form::Hamilton;
    if (name == "modified") return Form::Modified;
    if (name == "newtonian") return Form::Newtonian;
    throw Error(ErrorKind::Config, "unknown flow form '" + name + "'");
}

PRates rhs_hamilton(const PolySymbol& sym, const MetricChart& chart, const StateP& st) {
    PRates r;
    r.xdot = grad_p(sym, st.x, st.p);
    const Christoffel gamma = christoffel_at(chart, st.x);
    r.pdot_raw = raw_rate(gamma, r.xdot, st.p, -grad_x(sym, chart, st.x, st.p));
    r.sdot = pair(st.p, r.xdot);
    return r;
}

PRates rhs_modified(const PolySymbol& sym, const MetricChart& chart, const StateP& st,
                    double omega_floor) {
    PRates r = rhs_hamilton(sym, chart, st);
    const double Om = r.sdot;
    if (!(std::abs(Om) >= omega_floor)) {
        std::ostringstream os;
        os << "transversality lost: |Omega| = " << std::abs(Om) << " below floor " << omega_floor
           << " at x = " << to_string(st.x.values()) << ", p = " << to_string(st.p.values());
        throw Error(ErrorKind::TransversalityLost, os.str());
    }
    r.xdot /= Om;
    r.pdot_raw /= Om;
    r.sdot = 1.0;
    return r;
}

URates rhs_newtonian(const ForceField& F, const MetricChart& chart, const StateU& st) {
    URates r;
    r.xdot = st.u;
    const Vector f_up = raise(chart, st.x, F.eval(st));
    r.udot_raw = f_up - christoffel_at(chart, st.x).contract(st.u, st.u);
    r.sdot = 1.0;
    return r;
}

Eigen::VectorXd pack(const StateP& st) {
    const int n = st.x.size();
    Eigen::VectorXd y(2 * n + 1);
    y << st.x.values(), st.p.values(), st.s;
    return y;
}

Eigen::VectorXd pack(const StateU& st) {
    const int n = st.x.size();
    Eigen::VectorXd y(2 * n + 1);
    y << st.x.values(), st.u.values(), st.s;
    return y;
}

namespace {
int dim_of(const Eigen::VectorXd& y) {
    if (y.size() < 5 || y.size() % 2 == 0)
        throw Error(ErrorKind::Shape, "flat state has invalid length " + std::to_string(y.size()));
    return static_cast<int>((y.size() - 1) / 2);
}
} // namespace

StateP unpack_p(const Eigen::VectorXd& y) {
    const int n = dim_of(y);
    return StateP{Point(y.head(n)), Covector(y.segment(n, n)), y[2 * n]};
}

StateU unpack_u(const Eigen::VectorXd& y) {
    const int n = dim_of(y);
    return StateU{Point(y.head(n)), Vector(y.segment(n, n)), y[2 * n]};
}

namespace {

Eigen::VectorXd flat_rates(const PRates& r) {
    const int n = r.xdot.size();
    Eigen::VectorXd d(2 * n + 1);
    d << r.xdot.values(), r.pdot_raw.values(), r.sdot;
    return d;
}

Monitor p_monitor(const PolySymbol& sym, const Eigen::VectorXd& y) {
    const StateP st = unpack_p(y);
    return Monitor{0.0, eval_H(sym, st.x, st.p), omega(sym, st.x, st.p), kNaN};
}

} // namespace

Dynamics hamilton_dynamics(PolySymbol sym, MetricChart chart) {
    Dynamics d;
    d.form = Form::Hamilton;
    d.dim = chart.dim();
    d.derivative = [sym, chart](const Eigen::VectorXd& y) {
        return flat_rates(rhs_hamilton(sym, chart, unpack_p(y)));
    };
    d.monitor = [sym](const Eigen::VectorXd& y) { return p_monitor(sym, y); };
    return d;
}

Dynamics modified_dynamics(PolySymbol sym, MetricChart chart, double omega_floor) {
    Dynamics d;
    d.form = Form::Modified;
    d.dim = chart.dim();
    d.derivative = [sym, chart, omega_floor](const Eigen::VectorXd& y) {
        return flat_rates(rhs_modified(sym, chart, unpack_p(y), omega_floor));
    };
    d.monitor = [sym](const Eigen::VectorXd& y) { return p_monitor(sym, y); };
    return d;
}

double default_omega_floor(const PolySymbol& sym, const StateP& st0) {
    return 1e-10 * (1.0 + std::abs(omega(sym, st0.x, st0.p)));
}

Dynamics newtonian_dynamics(ForceField F, MetricChart chart) {
    Dynamics d;
    d.form = Form::Newtonian;
    d.dim = chart.dim();
    d.derivative = [F, chart](const Eigen::VectorXd& y) {
        const URates r = rhs_newtonian(F, chart, unpack_u(y));
        const int n = r.xdot.size();
        Eigen::VectorXd out(2 * n + 1);
        out << r.xdot.values(), r.udot_raw.values(), r.sdot;
        return out;
    };
    const WField W = F.source;
    d.monitor = [W, chart](const Eigen::VectorXd& y) {
        const StateU st = unpack_u(y);
        return Monitor{0.0, kNaN, kNaN, W.W(st.x, norm(chart, st.x, st.u))};
    };
    return d;
}

Point Trajectory::x(size_t i) const { return Point(y[i].head(dim)); }

double Trajectory::phase(size_t i) const { return y[i][2 * dim]; }

long Trajectory::find(double time) const {
    for (size_t i = 0; i < t.size(); ++i)
        if (t[i] == time) return static_cast<long>(i);
    return -1;
}

namespace {

using Rhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

Eigen::VectorXd rk4_step(const Rhs& f, const Eigen::VectorXd& y, double h) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4); returns the fifth-order solution and writes the
// embedded error estimate.
Eigen::VectorXd dopri_step(const Rhs& f, const Eigen::VectorXd& y, double h, Eigen::VectorXd& err) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + h * a21 * k1);
    const Eigen::VectorXd k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Eigen::VectorXd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::VectorXd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::VectorXd k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Eigen::VectorXd y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = f(y5);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return y5;
}

void validate(const StepperConfig& cfg) {
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
        throw Error(ErrorKind::Config, "t_end must be finite and non-negative");
    if (!(cfg.dt > 0.0)) throw Error(ErrorKind::Config, "dt must be positive");
    if (cfg.method == Method::RK45 && !(cfg.atol > 0.0 && cfg.rtol > 0.0))
        throw Error(ErrorKind::Config, "rk45 tolerances must be positive");
    if (cfg.record_every < 1) throw Error(ErrorKind::Config, "record_every must be at least 1");
    for (double t : cfg.landing_times)
        if (!(t >= 0.0 && t <= cfg.t_end))
            throw Error(ErrorKind::Config, "landing time outside [0, t_end]");
}

std::vector<double> segment_ends(const StepperConfig& cfg) {
    std::vector<double> ends;
    for (double t : cfg.landing_times)
        if (t > 0.0) ends.push_back(t);
    ends.push_back(cfg.t_end);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    if (cfg.t_end == 0.0) ends.clear();
    return ends;
}

class Recorder {
public:
    Recorder(const Dynamics& dyn, Trajectory& traj) : dyn_(dyn), traj_(traj) {}

    void record(double t, const Eigen::VectorXd& y) {
        Monitor m = dyn_.monitor(y);
        m.t = t;
        traj_.t.push_back(t);
        traj_.y.push_back(y);
        traj_.monitors.push_back(m);
    }

private:
    const Dynamics& dyn_;
    Trajectory& traj_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what, double t, const Eigen::VectorXd& last,
                       const Trajectory& traj) {
    std::ostringstream os;
    os << what << " (t = " << t << ", last good state " << to_string(last) << ")";
    throw IntegrationError(kind, os.str(), t, last, traj);
}

} // namespace

Trajectory integrate(const Dynamics& dyn, const Eigen::VectorXd& y0, const StepperConfig& cfg) {
    validate(cfg);
    if (y0.size() != 2 * dyn.dim + 1)
        throw Error(ErrorKind::Shape, "initial state does not match the dynamics dimension");

    Trajectory traj;
    traj.form = dyn.form;
    traj.dim = dyn.dim;
    Recorder rec(dyn, traj);

    double t = 0.0;
    Eigen::VectorXd y = y0;
    try {
        rec.record(t, y);
    } catch (const Error& e) {
        fail(e.kind(), e.what(), t, y, traj);
    }

    long steps = 0;
    double h_adapt = cfg.dt;
    for (double b : segment_ends(cfg)) {
        const double a = t;
        try {
            if (cfg.method == Method::RK4) {
                const long nsteps = std::max(1L, static_cast<long>(std::ceil((b - a) / cfg.dt - 1e-9)));
                const double h = (b - a) / static_cast<double>(nsteps);
                for (long k = 1; k <= nsteps; ++k) {
                    Eigen::VectorXd next = rk4_step(dyn.derivative, y, h);
                    const double t_next = k == nsteps ? b : a + static_cast<double>(k) * h;
                    if (!next.allFinite()) fail(ErrorKind::Integration, "non-finite state", t_next, y, traj);
                    y = std::move(next);
                    t = t_next;
                    ++steps;
                    if (k == nsteps || steps % cfg.record_every == 0) rec.record(t, y);
                }
            } else {
                while (t < b) {
                    double h = std::min(h_adapt, b - t);
                    const bool lands = h == b - t;
                    Eigen::VectorXd err;
                    Eigen::VectorXd next = dopri_step(dyn.derivative, y, h, err);
                    double en = 0.0;
                    for (Eigen::Index i = 0; i < y.size(); ++i) {
                        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(next[i]));
                        en = std::max(en, std::abs(err[i]) / sc);
                    }
                    if (!next.allFinite() || !std::isfinite(en)) {
                        if (h < 1e-14 * (1.0 + std::abs(t)))
                            fail(ErrorKind::Integration, "non-finite state", t + h, y, traj);
                        h_adapt = 0.25 * h;
                        continue;
                    }
                    const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                    if (en <= 1.0) {
                        t = lands ? b : t + h;
                        y = std::move(next);
                        ++steps;
                        if (lands) h_adapt = std::max(h_adapt, h * factor);
                        else h_adapt = h * factor;
                        if (t == b || steps % cfg.record_every == 0) rec.record(t, y);
                    } else {
                        if (h < 1e-14 * (1.0 + std::abs(t)))
                            fail(ErrorKind::Integration, "step size underflow", t, y, traj);
                        h_adapt = h * factor;
                    }
                }
            }
        } catch (const IntegrationError&) {
            throw;
        } catch (const Error& e) {
            fail(e.kind(), e.what(), t, y, traj);
        }
    }
    return traj;
}

Trajectory integrate(const Dynamics& dyn, const StateP& st0, const StepperConfig& cfg) {
    if (dyn.form == Form::Newtonian)
        throw Error(ErrorKind::Config, "newtonian dynamics expects a velocity state");
    return integrate(dyn, pack(st0), cfg);
}

Trajectory integrate(const Dynamics& dyn, const StateU& st0, const StepperConfig& cfg) {
    if (dyn.form != Form::Newtonian)
        throw Error(ErrorKind::Config, "hamilton dynamics expects a momentum state");
    return integrate(dyn, pack(st0), cfg);
}

ConservationReport conservation_report(const Trajectory& traj) {
    ConservationReport r{kNaN, kNaN, kNaN};
    if (traj.monitors.empty()) return r;
    const Monitor& m0 = traj.monitors.front();
    for (const Monitor& m : traj.monitors) {
        if (std::isfinite(m0.H)) r.H_drift = std::isnan(r.H_drift) ? std::abs(m.H - m0.H)
                                                                  : std::max(r.H_drift, std::abs(m.H - m0.H));
        if (std::isfinite(m0.W)) r.W_drift = std::isnan(r.W_drift) ? std::abs(m.W - m0.W)
                                                                  : std::max(r.W_drift, std::abs(m.W - m0.W));
        if (std::isfinite(m.Omega))
            r.min_abs_Omega = std::isnan(r.min_abs_Omega) ? std::abs(m.Omega)
                                                          : std::min(r.min_abs_Omega, std::abs(m.Omega));
    }
    return r;
}

} // namespace nslab
