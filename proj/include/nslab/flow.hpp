#pragma once

#include "nslab/errors.hpp"
#include "nslab/forces.hpp"
#include "nslab/geometry.hpp"
#include "nslab/legendre.hpp"
#include "nslab/symbol.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nslab {

enum class Form { Hamilton, Modified, Newtonian };

const char* to_string(Form form);
Form form_from_string(const std::string& name);

struct PRates {
    Vector xdot;
    Covector pdot_raw;
    double sdot = 0.0;
};

struct URates {
    Vector xdot;
    Vector udot_raw;
    double sdot = 1.0;
};

// x' = dH/dp, p'_i = -grad_i H + Gamma^k_ij p_k x'^j, s' = Omega.
PRates rhs_hamilton(const PolySymbol& sym, const MetricChart& chart, const StateP& st);

// Hamilton rates divided by Omega; s' = 1. Throws TransversalityLost when
// |Omega| < omega_floor.
PRates rhs_modified(const PolySymbol& sym, const MetricChart& chart, const StateP& st,
                    double omega_floor);

// x' = u, u'^i = F^i - Gamma^i_jk u^j u^k, s' = 1.
URates rhs_newtonian(const ForceField& F, const MetricChart& chart, const StateU& st);

struct Monitor {
    double t = 0.0;
    double H = 0.0;
    double Omega = 0.0;
    double W = 0.0;
};

// Autonomous first-order system on the flat layout y = (x, p or u, s).
struct Dynamics {
    Form form = Form::Hamilton;
    int dim = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> derivative;
    // H, Omega, W at a state; entries that do not apply are NaN
    std::function<Monitor(const Eigen::VectorXd&)> monitor;
};

Dynamics hamilton_dynamics(PolySymbol sym, MetricChart chart);
Dynamics modified_dynamics(PolySymbol sym, MetricChart chart, double omega_floor);
// 1e-10 (1 + |Omega|) at the initial state
double default_omega_floor(const PolySymbol& sym, const StateP& st0);
Dynamics newtonian_dynamics(ForceField F, MetricChart chart);

Eigen::VectorXd pack(const StateP& st);
Eigen::VectorXd pack(const StateU& st);
StateP unpack_p(const Eigen::VectorXd& y);
StateU unpack_u(const Eigen::VectorXd& y);

enum class Method { RK4, RK45 };

struct StepperConfig {
    Method method = Method::RK4;
    double dt = 1e-3;      // RK4 step; initial step for RK45
    double atol = 1e-10;   // RK45 only
    double rtol = 1e-10;   // RK45 only
    double t_end = 1.0;
    int record_every = 1;
    // Times the stepper lands on exactly and always records.
    std::vector<double> landing_times;
};

struct Trajectory {
    Form form = Form::Hamilton;
    int dim = 0;
    std::vector<double> t;
    std::vector<Eigen::VectorXd> y;
    std::vector<Monitor> monitors;

    size_t size() const { return t.size(); }
    Point x(size_t i) const;
    double phase(size_t i) const;
    // Index of the recorded sample at time `time`, or -1.
    long find(double time) const;
};

// Integration failure carrying the last finite state and the samples recorded
// before it.
class IntegrationError : public Error {
public:
    IntegrationError(ErrorKind kind, const std::string& what, double t, Eigen::VectorXd last_good,
                     Trajectory partial)
        : Error(kind, what), t_(t), last_good_(std::move(last_good)), partial_(std::move(partial)) {}

    double t() const { return t_; }
    const Eigen::VectorXd& last_good() const { return last_good_; }
    const Trajectory& partial() const { return partial_; }

private:
    double t_;
    Eigen::VectorXd last_good_;
    Trajectory partial_;
};

Trajectory integrate(const Dynamics& dyn, const Eigen::VectorXd& y0, const StepperConfig& cfg);
Trajectory integrate(const Dynamics& dyn, const StateP& st0, const StepperConfig& cfg);
Trajectory integrate(const Dynamics& dyn, const StateU& st0, const StepperConfig& cfg);

struct ConservationReport {
    double H_drift = 0.0;      // NaN when H is not monitored
    double W_drift = 0.0;      // NaN when W is not monitored
    double min_abs_Omega = 0.0;
};

ConservationReport conservation_report(const Trajectory& traj);

} // namespace nslab
