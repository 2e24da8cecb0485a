#include "nslab/front.hpp"

#include "nslab/errors.hpp"
#include "nslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>

namespace nslab {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sample_tag(size_t i, const Point& x) {
    return "sample " + std::to_string(i) + " at x = " + to_string(x.values());
}
} // namespace

double LatticeAxis::spacing() const {
    return periodic ? (hi - lo) / count : (hi - lo) / (count - 1);
}

double LatticeAxis::at(int k) const { return lo + k * spacing(); }

size_t Lattice::size() const {
    size_t n = 1;
    for (const auto& a : axes) n *= static_cast<size_t>(a.count);
    return n;
}

std::vector<int> Lattice::multi_index(size_t flat) const {
    std::vector<int> idx(axes.size());
    for (int a = rank() - 1; a >= 0; --a) {
        const size_t c = static_cast<size_t>(axes[a].count);
        idx[a] = static_cast<int>(flat % c);
        flat /= c;
    }
    return idx;
}

size_t Lattice::flat_index(const std::vector<int>& idx) const {
    size_t flat = 0;
    for (int a = 0; a < rank(); ++a) flat = flat * static_cast<size_t>(axes[a].count) + static_cast<size_t>(idx[a]);
    return flat;
}

std::vector<double> Lattice::params(size_t flat) const {
    const std::vector<int> idx = multi_index(flat);
    std::vector<double> q(axes.size());
    for (int a = 0; a < rank(); ++a) q[a] = axes[a].at(idx[a]);
    return q;
}

std::vector<std::vector<Vector>> discrete_tangents(const Lattice& grid, const std::vector<Point>& points) {
    if (points.size() != grid.size())
        throw Error(ErrorKind::Shape, "front has " + std::to_string(points.size()) + " points, lattice has " +
                                          std::to_string(grid.size()));
    std::vector<std::vector<Vector>> out(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const std::vector<int> idx = grid.multi_index(i);
        out[i].reserve(grid.axes.size());
        for (int a = 0; a < grid.rank(); ++a) {
            const LatticeAxis& ax = grid.axes[a];
            const int N = ax.count;
            const int k = idx[a];
            const double h = ax.spacing();
            auto at = [&](int j) {
                std::vector<int> m = idx;
                m[a] = j;
                return points[grid.flat_index(m)].values();
            };
            Eigen::VectorXd d;
            if (ax.periodic) {
                const Eigen::VectorXd& shift = grid.wrap_shift[a];
                Eigen::VectorXd next = at((k + 1) % N);
                Eigen::VectorXd prev = at((k - 1 + N) % N);
                if (k + 1 == N) next += shift;
                if (k == 0) prev -= shift;
                d = (next - prev) / (2.0 * h);
            } else if (N == 2) {
                d = (at(1) - at(0)) / h;
            } else if (k == 0) {
                d = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
            } else if (k == N - 1) {
                d = (3.0 * at(N - 1) - 4.0 * at(N - 2) + at(N - 3)) / (2.0 * h);
            } else {
                d = (at(k + 1) - at(k - 1)) / (2.0 * h);
            }
            out[i].emplace_back(std::move(d));
        }
    }
    return out;
}

namespace {

// Unit normal up to sign by Gram-Schmidt in the metric g.
Eigen::VectorXd raw_normal(const Matrix& g, const std::vector<Vector>& tangents, const std::string& where) {
    const int n = static_cast<int>(g.rows());
    auto ip = [&g](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(g * b); };
    std::vector<Eigen::VectorXd> basis;
    for (const Vector& T : tangents) {
        Eigen::VectorXd w = T.values();
        const double len = std::sqrt(ip(w, w));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : basis) w -= ip(w, e) * e;
        const double rest = std::sqrt(ip(w, w));
        if (!(len > 0.0) || !(rest > 1e-10 * len))
            throw Error(ErrorKind::SingularParametrization, "singular parametrization: tangent frame degenerate at " + where);
        basis.push_back(w / rest);
    }
    Eigen::VectorXd best;
    double best_len = -1.0;
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd r = Eigen::VectorXd::Unit(n, k) / std::sqrt(g(k, k));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& e : basis) r -= ip(r, e) * e;
        const double len = std::sqrt(ip(r, r));
        if (len > best_len) {
            best_len = len;
            best = r;
        }
    }
    return best / best_len;
}

std::vector<size_t> lattice_neighbours(const Lattice& grid, size_t i) {
    std::vector<size_t> out;
    const std::vector<int> idx = grid.multi_index(i);
    for (int a = 0; a < grid.rank(); ++a) {
        const LatticeAxis& ax = grid.axes[a];
        for (int step : {-1, 1}) {
            int j = idx[a] + step;
            if (ax.periodic) j = (j + ax.count) % ax.count;
            else if (j < 0 || j >= ax.count) continue;
            std::vector<int> m = idx;
            m[a] = j;
            out.push_back(grid.flat_index(m));
        }
    }
    return out;
}

} // namespace

std::vector<Vector> unit_normals(const MetricChart& chart, const Lattice& grid, const std::vector<Point>& points,
                                 const std::vector<std::vector<Vector>>& tangents,
                                 const std::vector<Vector>& reference) {
    const size_t count = points.size();
    std::vector<Vector> normals(count);
    std::vector<Matrix> metric(count);
    for (size_t i = 0; i < count; ++i) {
        metric[i] = chart.metric(points[i]);
        normals[i] = Vector(raw_normal(metric[i], tangents[i], sample_tag(i, points[i])));
    }

    if (reference.size() == count) {
        for (size_t i = 0; i < count; ++i)
            if (normals[i].values().dot(metric[i] * reference[i].values()) < 0.0) normals[i] = -normals[i];
        return normals;
    }
    if (reference.size() != 1)
        throw Error(ErrorKind::Shape, "orientation needs one seed vector or one reference per sample");

    const Vector& seed = reference.front();
    chart.check_dim(seed.size(), "orientation seed");
    size_t anchor = 0;
    double best = -1.0;
    for (size_t i = 0; i < count; ++i) {
        const double seed_len = std::sqrt(seed.values().dot(metric[i] * seed.values()));
        const double c = seed_len > 0.0 ? std::abs(normals[i].values().dot(metric[i] * seed.values())) / seed_len : 0.0;
        if (c > best) {
            best = c;
            anchor = i;
        }
    }
    if (!(best > 1e-8))
        throw Error(ErrorKind::OrientationAmbiguity,
                    "orientation ambiguity: front normals are orthogonal to the orientation seed");
    if (normals[anchor].values().dot(metric[anchor] * seed.values()) < 0.0) normals[anchor] = -normals[anchor];

    std::vector<bool> done(count, false);
    std::deque<size_t> queue{anchor};
    done[anchor] = true;
    while (!queue.empty()) {
        const size_t i = queue.front();
        queue.pop_front();
        for (size_t j : lattice_neighbours(grid, i)) {
            if (done[j]) continue;
            if (normals[j].values().dot(metric[j] * normals[i].values()) < 0.0) normals[j] = -normals[j];
            done[j] = true;
            queue.push_back(j);
        }
    }
    return normals;
}

FrontMesh build_front(const MetricChart& chart, const Embedding& embed, Lattice grid, const Vector& orient_seed,
                      double s0) {
    const int n = chart.dim();
    if (grid.rank() != n - 1)
        throw Error(ErrorKind::Shape, "front lattice needs " + std::to_string(n - 1) + " parameter axes");
    for (const auto& ax : grid.axes) {
        if (ax.count < (ax.periodic ? 3 : 2))
            throw Error(ErrorKind::Config, "front lattice axis has too few samples");
        if (!(ax.hi > ax.lo)) throw Error(ErrorKind::Config, "front lattice axis has an empty range");
    }

    std::vector<double> base(grid.axes.size());
    for (int a = 0; a < grid.rank(); ++a) base[a] = grid.axes[a].lo;
    grid.wrap_shift.assign(grid.axes.size(), Eigen::VectorXd::Zero(n));
    for (int a = 0; a < grid.rank(); ++a) {
        if (!grid.axes[a].periodic) continue;
        std::vector<double> end = base;
        end[a] = grid.axes[a].hi;
        grid.wrap_shift[a] = embed(end).values() - embed(base).values();
    }

    FrontMesh mesh;
    mesh.points.reserve(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        Point x = embed(grid.params(i));
        chart.check_domain(x);
        mesh.points.push_back(std::move(x));
    }
    mesh.normals = unit_normals(chart, grid, mesh.points, discrete_tangents(grid, mesh.points), {orient_seed});
    mesh.nu.assign(mesh.points.size(), kNaN);
    mesh.phase.assign(mesh.points.size(), s0);
    mesh.grid = std::move(grid);
    return mesh;
}

NuBranch nu_branch_from_string(const std::string& name, double guess) {
    if (name == "positive") return {NuBranchKind::Positive, 0.0};
    if (name == "negative") return {NuBranchKind::Negative, 0.0};
    if (name == "nearest") return {NuBranchKind::Nearest, guess};
    throw Error(ErrorKind::Config, "unknown nu branch '" + name + "'");
}

namespace {

double horner(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
}

double horner_slope(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (size_t k = c.size(); k-- > 1;) r = r * x + static_cast<double>(k) * c[k];
    return r;
}

double refine_root(const std::vector<double>& c, double a, double b) {
    double fa = horner(c, a);
    for (int it = 0; it < 200 && std::abs(b - a) > 4e-16 * std::max(std::abs(a), std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = horner(c, m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    double x = 0.5 * (a + b);
    for (int it = 0; it < 3; ++it) {
        const double d = horner_slope(c, x);
        if (d == 0.0) break;
        const double next = x - horner(c, x) / d;
        if (!(std::abs(horner(c, next)) < std::abs(horner(c, x)))) break;
        x = next;
    }
    return x;
}

// Positive roots above `floor` of the polynomial with coefficients c.
void positive_roots(const std::vector<double>& c, double floor, double bound, std::vector<double>& out) {
    constexpr int kSteps = 4000;
    const double ratio = std::log(bound / floor);
    double prev_x = floor;
    double prev_f = horner(c, prev_x);
    if (prev_f == 0.0) out.push_back(prev_x);
    for (int k = 1; k <= kSteps; ++k) {
        const double x = floor * std::exp(ratio * k / kSteps);
        const double f = horner(c, x);
        if (f == 0.0) {
            out.push_back(x);
        } else if (prev_f != 0.0 && (prev_f < 0.0) != (f < 0.0)) {
            out.push_back(refine_root(c, prev_x, x));
        }
        prev_x = x;
        prev_f = f;
    }
}

} // namespace

std::vector<double> real_roots(const std::vector<double>& coeffs, double floor) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    std::vector<double> roots;
    if (c.size() <= 1) return roots;
    const double lead = c.back();
    double bound = 0.0;
    for (size_t k = 0; k + 1 < c.size(); ++k) bound = std::max(bound, std::abs(c[k] / lead));
    bound = 2.0 * (1.0 + bound);
    floor = std::max(floor, 1e-300);
    if (floor >= bound) return roots;

    positive_roots(c, floor, bound, roots);
    std::vector<double> mirrored = c;
    for (size_t k = 1; k < mirrored.size(); k += 2) mirrored[k] = -mirrored[k];
    std::vector<double> negative;
    positive_roots(mirrored, floor, bound, negative);
    for (double r : negative) roots.push_back(-r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

FrontMesh solve_nu(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh, const NuBranch& branch,
                   const RegularityFloors& floors) {
    FrontMesh out = mesh;
    for (size_t i = 0; i < mesh.size(); ++i) {
        const Point& x = mesh.points[i];
        const Covector n_low = lower(chart, x, mesh.normals[i]);
        const std::vector<SymTensor> a = sym.coefficients(x);
        std::vector<double> c(a.size());
        for (size_t r = 0; r < a.size(); ++r) c[r] = a[r].contract_tail(n_low.values(), static_cast<int>(r)).scalar();

        // Roots just under the floor are still found so that they can be
        // reported as irregular rather than skipped.
        const std::vector<double> roots = real_roots(c, 1e-3 * floors.nu_floor);
        double nu = kNaN;
        switch (branch.kind) {
        case NuBranchKind::Positive:
            for (double r : roots)
                if (r > 0.0) { nu = r; break; }
            break;
        case NuBranchKind::Negative:
            for (auto it = roots.rbegin(); it != roots.rend(); ++it)
                if (*it < 0.0) { nu = *it; break; }
            break;
        case NuBranchKind::Nearest:
            for (double r : roots)
                if (std::isnan(nu) || std::abs(r - branch.guess) < std::abs(nu - branch.guess)) nu = r;
            break;
        }
        if (std::isnan(nu))
            throw Error(ErrorKind::NoAdmissibleNu, "no admissible nu on the requested branch at " + sample_tag(i, x));
        if (std::abs(nu) < floors.nu_floor)
            throw Error(ErrorKind::IrregularBoundary,
                        "irregular boundary data: nu below floor (nu must not vanish) at " + sample_tag(i, x));
        const double Om = omega(sym, x, n_low * nu);
        if (!(std::abs(Om) >= floors.omega_floor))
            throw Error(ErrorKind::IrregularBoundary,
                        "irregular boundary data: transversality fails (Omega = 0) at " + sample_tag(i, x));
        out.nu[i] = nu;
    }
    return out;
}

namespace {

void check_snapshot_times(const std::vector<double>& times, const StepperConfig& cfg) {
    for (double t : times)
        if (!(t >= 0.0 && t <= cfg.t_end)) throw Error(ErrorKind::Config, "snapshot time outside [0, t_end]");
}

std::vector<double> snapshot_schedule(const std::vector<double>& times) {
    std::vector<double> out{0.0};
    for (double t : times) out.push_back(t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Integrates every sample, collecting failures rather than stopping at the
// first one.
std::vector<Trajectory> integrate_samples(size_t count, const std::function<Trajectory(size_t)>& run,
                                          ShiftResult& partial) {
    std::vector<Trajectory> trajs(count);
    std::vector<std::optional<SampleFailure>> failed(count);
    parallel_for(count, [&](size_t i) {
        try {
            trajs[i] = run(i);
        } catch (const IntegrationError& e) {
            trajs[i] = e.partial();
            failed[i] = SampleFailure{i, e.kind(), e.what()};
        } catch (const Error& e) {
            failed[i] = SampleFailure{i, e.kind(), e.what()};
        }
    });
    std::vector<SampleFailure> failures;
    for (auto& f : failed)
        if (f) failures.push_back(*f);
    if (!failures.empty()) {
        partial.trajectories = trajs;
        const SampleFailure& first = failures.front();
        throw ShiftError(first.kind,
                         std::to_string(failures.size()) + " of " + std::to_string(count) +
                             " samples failed; first: sample " + std::to_string(first.sample) + ": " + first.message,
                         failures, partial);
    }
    return trajs;
}

// Assembles the snapshot at time t from the per-sample trajectories.
Snapshot assemble(const MetricChart& chart, const FrontMesh& previous, const std::vector<Trajectory>& trajs, double t,
                  const std::function<Vector(const Eigen::VectorXd&)>& velocity,
                  const std::function<double(const Eigen::VectorXd&, const Vector&)>& nu_of) {
    Snapshot snap;
    snap.t = t;
    FrontMesh& m = snap.mesh;
    m.grid = previous.grid;
    const size_t count = trajs.size();
    std::vector<const Eigen::VectorXd*> states(count);
    for (size_t i = 0; i < count; ++i) {
        const long k = trajs[i].find(t);
        if (k < 0) throw Error(ErrorKind::Integration, "snapshot time missing from trajectory of sample " + std::to_string(i));
        states[i] = &trajs[i].y[static_cast<size_t>(k)];
        m.points.emplace_back(states[i]->head(trajs[i].dim));
        m.phase.push_back(trajs[i].phase(static_cast<size_t>(k)));
        snap.velocities.push_back(velocity(*states[i]));
    }
    m.normals = unit_normals(chart, m.grid, m.points, discrete_tangents(m.grid, m.points), previous.normals);
    for (size_t i = 0; i < count; ++i) m.nu.push_back(nu_of(*states[i], m.normals[i]));
    snap.normality = normality_deviation(chart, m, snap.velocities);
    snap.phase_spread = phase_spread(m);
    return snap;
}

ShiftResult run_shift(const MetricChart& chart, const FrontMesh& mesh, Form form, const StepperConfig& cfg,
                      const std::vector<double>& snapshot_times, const std::function<Eigen::VectorXd(size_t)>& start,
                      const std::function<Dynamics(size_t)>& dynamics,
                      const std::function<Vector(const Eigen::VectorXd&)>& velocity,
                      const std::function<double(const Eigen::VectorXd&, const Vector&)>& nu_of) {
    check_snapshot_times(snapshot_times, cfg);
    StepperConfig run_cfg = cfg;
    run_cfg.landing_times = snapshot_times;

    ShiftResult result;
    result.form = form;
    {
        Snapshot first;
        first.mesh = mesh;
        for (size_t i = 0; i < mesh.size(); ++i) first.velocities.push_back(velocity(start(i)));
        first.normality = normality_deviation(chart, mesh, first.velocities);
        first.phase_spread = phase_spread(mesh);
        result.fronts.push_back(std::move(first));
    }

    result.trajectories = integrate_samples(
        mesh.size(), [&](size_t i) { return integrate(dynamics(i), start(i), run_cfg); }, result);

    for (double t : snapshot_schedule(snapshot_times)) {
        if (t == 0.0) continue;
        Snapshot snap = assemble(chart, result.fronts.back().mesh, result.trajectories, t, velocity, nu_of);
        result.fronts.push_back(std::move(snap));
    }
    return result;
}

} // namespace

ShiftResult shift_front(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh, Form form,
                        StepperConfig cfg, const std::vector<double>& snapshot_times) {
    if (form == Form::Newtonian)
        throw Error(ErrorKind::Config, "newtonian shift needs a force field and initial velocities");
    for (size_t i = 0; i < mesh.size(); ++i)
        if (!std::isfinite(mesh.nu[i]))
            throw Error(ErrorKind::Config, "nu not solved at " + sample_tag(i, mesh.points[i]));

    std::vector<Eigen::VectorXd> y0(mesh.size());
    for (size_t i = 0; i < mesh.size(); ++i) {
        const Covector p = lower(chart, mesh.points[i], mesh.normals[i]) * mesh.nu[i];
        y0[i] = pack(StateP{mesh.points[i], p, mesh.phase[i]});
    }
    auto dynamics = [&](size_t i) {
        if (form == Form::Hamilton) return hamilton_dynamics(sym, chart);
        return modified_dynamics(sym, chart, default_omega_floor(sym, unpack_p(y0[i])));
    };
    auto velocity = [&](const Eigen::VectorXd& y) {
        const StateP st = unpack_p(y);
        Vector v = grad_p(sym, st.x, st.p);
        if (form == Form::Modified) v /= pair(st.p, v);
        return v;
    };
    auto nu_of = [](const Eigen::VectorXd& y, const Vector& N) { return pair(unpack_p(y).p, N); };
    return run_shift(chart, mesh, form, cfg, snapshot_times, [&](size_t i) { return y0[i]; }, dynamics, velocity,
                     nu_of);
}

ShiftResult shift_front(const ForceField& F, const MetricChart& chart, const FrontMesh& mesh,
                        const std::vector<Vector>& u0, StepperConfig cfg,
                        const std::vector<double>& snapshot_times) {
    if (u0.size() != mesh.size()) throw Error(ErrorKind::Shape, "one initial velocity per front sample required");
    std::vector<Eigen::VectorXd> y0(mesh.size());
    for (size_t i = 0; i < mesh.size(); ++i) y0[i] = pack(StateU{mesh.points[i], u0[i], mesh.phase[i]});
    const Dynamics dyn = newtonian_dynamics(F, chart);
    auto velocity = [](const Eigen::VectorXd& y) { return unpack_u(y).u; };
    auto nu_of = [](const Eigen::VectorXd&, const Vector&) { return kNaN; };
    return run_shift(chart, mesh, Form::Newtonian, cfg, snapshot_times, [&](size_t i) { return y0[i]; },
                     [&](size_t) { return dyn; }, velocity, nu_of);
}

std::vector<Vector> newtonian_velocities(const PolySymbol& sym, const MetricChart& chart, const FrontMesh& mesh) {
    std::vector<Vector> out;
    for (size_t i = 0; i < mesh.size(); ++i) {
        if (!std::isfinite(mesh.nu[i]))
            throw Error(ErrorKind::Config, "nu not solved at " + sample_tag(i, mesh.points[i]));
        const Covector p = lower(chart, mesh.points[i], mesh.normals[i]) * mesh.nu[i];
        const Vector v = grad_p(sym, mesh.points[i], p);
        out.push_back(v / pair(p, v));
    }
    return out;
}

std::vector<Vector> newtonian_velocities(const WField& W, const MetricChart& chart, const FrontMesh& mesh,
                                         double level) {
    constexpr double kMin = 1e-12, kMax = 1e12;
    std::vector<Vector> out;
    for (size_t i = 0; i < mesh.size(); ++i) {
        const Point& x = mesh.points[i];
        auto f = [&](double s) { return W.W(x, s) - level; };
        double a = 1.0, fa = f(a);
        double b = a, fb = fa;
        if (fa != 0.0) {
            const bool up = (fa < 0.0) == (W.W1(x, a) > 0.0);
            while ((fa < 0.0) == (fb < 0.0) && fb != 0.0) {
                a = b;
                fa = fb;
                b = up ? 2.0 * b : 0.5 * b;
                if (b < kMin || b > kMax)
                    throw Error(ErrorKind::VelocityOutOfRange,
                                "velocity out of range: no speed reaches the W level at " + sample_tag(i, x));
                fb = f(b);
            }
        }
        double lo = std::min(a, b), hi = std::max(a, b);
        double flo = f(lo);
        double s = fb == 0.0 ? b : 0.5 * (lo + hi);
        if (fa == 0.0) s = a;
        else if (fb != 0.0) {
            for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                s = 0.5 * (lo + hi);
                const double fs = f(s);
                if (fs == 0.0) break;
                if ((fs < 0.0) == (flo < 0.0)) {
                    lo = s;
                    flo = fs;
                } else {
                    hi = s;
                }
            }
        }
        const double len = norm(chart, x, mesh.normals[i]);
        out.push_back(mesh.normals[i] * (s / len));
    }
    return out;
}

double normality_deviation(const MetricChart& chart, const FrontMesh& front, const std::vector<Vector>& velocities) {
    if (velocities.size() != front.size())
        throw Error(ErrorKind::Shape, "one velocity per front sample required");
    const auto tangents = discrete_tangents(front.grid, front.points);
    double worst = 0.0;
    for (size_t i = 0; i < front.size(); ++i) {
        const Matrix g = chart.metric(front.points[i]);
        const Eigen::VectorXd& u = velocities[i].values();
        const double ulen = std::sqrt(u.dot(g * u));
        if (!(ulen > 0.0)) throw Error(ErrorKind::ZeroVelocity, "zero velocity at " + sample_tag(i, front.points[i]));
        for (const Vector& T : tangents[i]) {
            const double tlen = std::sqrt(T.values().dot(g * T.values()));
            if (!(tlen > 0.0))
                throw Error(ErrorKind::SingularParametrization,
                            "singular parametrization: zero tangent at " + sample_tag(i, front.points[i]));
            worst = std::max(worst, std::abs(u.dot(g * T.values())) / (ulen * tlen));
        }
    }
    return worst;
}

double phase_spread(const FrontMesh& front) {
    if (front.phase.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(front.phase.begin(), front.phase.end());
    return *hi - *lo;
}

} // namespace nslab
