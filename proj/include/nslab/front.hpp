#pragma once

#include "nslab/flow.hpp"
#include "nslab/forces.hpp"
#include "nslab/geometry.hpp"
#include "nslab/symbol.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nslab {

// One parameter axis. A periodic axis samples [lo, hi) with `count` points and
// wraps; otherwise [lo, hi] is sampled inclusively.
struct LatticeAxis {
    int count = 2;
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;

    double spacing() const;
    double at(int k) const;
};

// Rectangular lattice in n-1 parameters, flattened with the last axis fastest.
struct Lattice {
    std::vector<LatticeAxis> axes;
    // Chart-coordinate offset picked up when a periodic axis wraps once (for
    // instance 2 pi in an angular coordinate). Zero for non-periodic axes.
    std::vector<Eigen::VectorXd> wrap_shift;

    int rank() const { return static_cast<int>(axes.size()); }
    size_t size() const;
    std::vector<int> multi_index(size_t flat) const;
    size_t flat_index(const std::vector<int>& idx) const;
    std::vector<double> params(size_t flat) const;
};

using Embedding = std::function<Point(const std::vector<double>&)>;

struct FrontMesh {
    Lattice grid;
    std::vector<Point> points;
    std::vector<Vector> normals;  // metric-unit, consistently oriented
    std::vector<double> nu;       // NaN until solve_nu
    std::vector<double> phase;

    size_t size() const { return points.size(); }
};

// Discrete tangents per sample: tangents[i][a] = d x / d q^a at sample i.
std::vector<std::vector<Vector>> discrete_tangents(const Lattice& grid, const std::vector<Point>& points);

// Metric-unit normals orthogonal to `tangents`, oriented by `reference`: with a
// single reference vector the sample whose normal is best aligned with it
// fixes the sign and neighbours follow; with one reference per sample each
// normal is aligned with its own reference.
std::vector<Vector> unit_normals(const MetricChart& chart, const Lattice& grid, const std::vector<Point>& points,
                                 const std::vector<std::vector<Vector>>& tangents,
                                 const std::vector<Vector>& reference);

FrontMesh build_front(const MetricChart& chart, const Embedding& embed, Lattice grid, const Vector& orient_seed,
                      double s0 = 0.0);

enum class NuBranchKind { Positive, Negative, Nearest };

struct NuBranch {
    NuBranchKind kind = NuBranchKind::Positive;
    double guess = 0.0;  // Nearest only
};

NuBranch nu_branch_from_string(const std::string& name, double guess = 0.0);

struct RegularityFloors {
    double nu_floor = 1e-8;
    double omega_floor = 1e-10;
};

// Real roots of sum_r c[r] nu^r with |nu| >= floor, ascending.
std::vector<double> real_roots(const std::vector<double>& c, double floor);

// Per sample, nu with H(x, nu * lower(N)) = 0 on the requested branch.
FrontMesh solve_nu(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh, const NuBranch& branch,
                   const RegularityFloors& floors = {});

struct Snapshot {
    double t = 0.0;
    FrontMesh mesh;
    std::vector<Vector> velocities;  // ray velocity x' at each sample
    double normality = 0.0;
    double phase_spread = 0.0;
};

struct ShiftResult {
    Form form = Form::Hamilton;
    std::vector<Snapshot> fronts;
    std::vector<Trajectory> trajectories;
};

struct SampleFailure {
    size_t sample = 0;
    ErrorKind kind = ErrorKind::Integration;
    std::string message;
};

class ShiftError : public Error {
public:
    ShiftError(ErrorKind kind, const std::string& what, std::vector<SampleFailure> failures, ShiftResult partial)
        : Error(kind, what), failures_(std::move(failures)), partial_(std::move(partial)) {}

    const std::vector<SampleFailure>& failures() const { return failures_; }
    const ShiftResult& partial() const { return partial_; }

private:
    std::vector<SampleFailure> failures_;
    ShiftResult partial_;
};

// Hamilton or modified shift from p = nu * lower(N).
ShiftResult shift_front(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh, Form form,
                        StepperConfig cfg, const std::vector<double>& snapshot_times);

// Newtonian shift from the given initial velocities.
ShiftResult shift_front(const ForceField& F, const MetricChart& chart, const FrontMesh& mesh,
                        const std::vector<Vector>& u0, StepperConfig cfg,
                        const std::vector<double>& snapshot_times);

// u = v / Omega with v = dH/dp at p = nu * lower(N).
std::vector<Vector> newtonian_velocities(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh);
// u = |u| N with W(x, |u|) = level.
std::vector<Vector> newtonian_velocities(const WField& W, const MetricChart& chart, const FrontMesh& mesh,
                                         double level = 0.0);

// Worst cosine between a velocity and the front's discrete tangent directions.
double normality_deviation(const MetricChart& chart, const FrontMesh& front, const std::vector<Vector>& velocities);

double phase_spread(const FrontMesh& front);

} // namespace nslab
