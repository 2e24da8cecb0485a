#include "nslab/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace nslab {

using nlohmann::json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string("stage ") + name + ": " + e.what());
    }
}

void merge(ConservationReport& into, const ConservationReport& r) {
    auto worst = [](double a, double b, bool larger) {
        if (std::isnan(a)) return b;
        if (std::isnan(b)) return a;
        return larger ? std::max(a, b) : std::min(a, b);
    };
    into.H_drift = worst(into.H_drift, r.H_drift, true);
    into.W_drift = worst(into.W_drift, r.W_drift, true);
    into.min_abs_Omega = worst(into.min_abs_Omega, r.min_abs_Omega, false);
}

FrontMesh configured_front(const SimConfig& cfg) {
    return stage("build_front", [&] {
        return build_front(*cfg.chart, cfg.front.embed, cfg.front.grid, cfg.front.orient_seed, cfg.front.s0);
    });
}

} // namespace

RunOutcome run(const SimConfig& cfg) {
    const MetricChart& chart = *cfg.chart;
    RunOutcome out;
    FrontMesh mesh = configured_front(cfg);
    if (cfg.source == SourceKind::Symbol)
        mesh = stage("solve_nu", [&] { return solve_nu(*cfg.symbol, chart, mesh, cfg.front.branch); });

    const FlowSpec& flow = cfg.flow;
    if (flow.form == Form::Newtonian) {
        const ForceField F = stage("force", [&] { return configured_force(cfg); });
        const std::vector<Vector> u0 = stage("initial_velocity", [&] {
            return cfg.source == SourceKind::Symbol ? newtonian_velocities(*cfg.symbol, chart, mesh)
                                                    : newtonian_velocities(F.source, chart, mesh, flow.w_level);
        });
        out.result = stage("shift_front", [&] { return shift_front(F, chart, mesh, u0, flow.stepper, flow.snapshot_times); });
        if (cfg.h_expr && cfg.dim == 2)
            out.notes.push_back("general normal-shift force evaluated for n = 2, below the dimension n >= 3 for "
                                "which its form is established");
    } else {
        out.result = stage("shift_front", [&] {
            return shift_front(*cfg.symbol, chart, mesh, flow.form, flow.stepper, flow.snapshot_times);
        });
    }
    out.conservation = ConservationReport{std::numeric_limits<double>::quiet_NaN(),
                                          std::numeric_limits<double>::quiet_NaN(),
                                          std::numeric_limits<double>::quiet_NaN()};
    for (const Trajectory& t : out.result.trajectories) merge(out.conservation, conservation_report(t));
    return out;
}

namespace {

class Table {
public:
    explicit Table(std::vector<std::string> header) {
        for (size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
        text_ += '\n';
    }
    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) text_ += (i ? "," : "") + format_real(values[i]);
        text_ += '\n';
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

std::vector<std::string> names(const std::string& stem, int count) {
    std::vector<std::string> out;
    for (int i = 1; i <= count; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts) {
    std::vector<std::string> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    f << content;
    f.close();
    if (!f) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

void export_outputs(const SimConfig& cfg, const RunOutcome& outcome, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Io, "cannot create output directory '" + dir + "'");

    const int n = cfg.dim;
    const ShiftResult& res = outcome.result;
    const std::string state_stem = res.form == Form::Newtonian ? "u" : "p";

    if (cfg.output.csv) {
        Table fronts(concat({{"t", "sample_index"}, names("q", n - 1), names("x", n), names("N", n), {"nu", "phase"}}));
        for (const Snapshot& s : res.fronts) {
            for (size_t i = 0; i < s.mesh.size(); ++i) {
                std::vector<double> row{s.t, static_cast<double>(i)};
                for (double q : s.mesh.grid.params(i)) row.push_back(q);
                for (int k = 0; k < n; ++k) row.push_back(s.mesh.points[i][k]);
                for (int k = 0; k < n; ++k) row.push_back(s.mesh.normals[i][k]);
                row.push_back(s.mesh.nu[i]);
                row.push_back(s.mesh.phase[i]);
                fronts.row(row);
            }
        }
        write_file(fs::path(dir) / "fronts.csv", fronts.str());

        if (cfg.output.trajectories) {
            Table traj(concat({{"t", "sample_index"}, names("x", n), names(state_stem, n), {"s", "H", "Omega", "W"}}));
            for (size_t i = 0; i < res.trajectories.size(); ++i) {
                const Trajectory& tr = res.trajectories[i];
                for (size_t k = 0; k < tr.size(); ++k) {
                    std::vector<double> row{tr.t[k], static_cast<double>(i)};
                    for (Eigen::Index c = 0; c < tr.y[k].size(); ++c) row.push_back(tr.y[k][c]);
                    row.push_back(tr.monitors[k].H);
                    row.push_back(tr.monitors[k].Omega);
                    row.push_back(tr.monitors[k].W);
                    traj.row(row);
                }
            }
            write_file(fs::path(dir) / "trajectories.csv", traj.str());
        }
    }

    if (cfg.output.dat) {
        std::string dat = "# gnuplot data: one block per snapshot (use 'index k'); columns";
        for (const auto& c : names("x", n)) dat += " " + c;
        dat += " phase\n";
        for (const Snapshot& s : res.fronts) {
            dat += "# t = " + format_real(s.t) + "\n";
            for (size_t i = 0; i < s.mesh.size(); ++i) {
                for (int k = 0; k < n; ++k) dat += format_real(s.mesh.points[i][k]) + " ";
                dat += format_real(s.mesh.phase[i]) + "\n";
            }
            dat += "\n\n";
        }
        write_file(fs::path(dir) / "fronts.dat", dat);
    }

    json snapshots = json::array();
    for (const Snapshot& s : res.fronts)
        snapshots.push_back({{"t", s.t},
                             {"phase_spread", real_or_null(s.phase_spread)},
                             {"normality_deviation", real_or_null(s.normality)}});
    json report = {
        {"tool", kToolName},
        {"version", kToolVersion},
        {"config", cfg.raw},
        {"form", to_string(res.form)},
        {"diagnostics",
         {{"snapshots", snapshots},
          {"conservation",
           {{"max_H_drift", real_or_null(outcome.conservation.H_drift)},
            {"max_W_drift", real_or_null(outcome.conservation.W_drift)},
            {"min_abs_Omega", real_or_null(outcome.conservation.min_abs_Omega)}}}}},
        {"notes", outcome.notes},
    };
    write_file(fs::path(dir) / "report.json", report.dump(2) + "\n");
}

std::string nu_table(const SimConfig& cfg) {
    if (cfg.source != SourceKind::Symbol)
        throw Error(ErrorKind::Config, "config error: nu needs a symbol source");
    const int n = cfg.dim;
    FrontMesh mesh = configured_front(cfg);
    mesh = stage("solve_nu", [&] { return solve_nu(*cfg.symbol, *cfg.chart, mesh, cfg.front.branch); });
    Table t(concat({{"sample_index"}, names("q", n - 1), names("x", n), names("N", n), {"nu", "Omega"}}));
    for (size_t i = 0; i < mesh.size(); ++i) {
        std::vector<double> row{static_cast<double>(i)};
        for (double q : mesh.grid.params(i)) row.push_back(q);
        for (int k = 0; k < n; ++k) row.push_back(mesh.points[i][k]);
        for (int k = 0; k < n; ++k) row.push_back(mesh.normals[i][k]);
        row.push_back(mesh.nu[i]);
        const Covector p = lower(*cfg.chart, mesh.points[i], mesh.normals[i]) * mesh.nu[i];
        row.push_back(omega(*cfg.symbol, mesh.points[i], p));
        t.row(row);
    }
    return t.str();
}

std::vector<GridAxis> parse_state_grid(const std::string& spec, int dim) {
    std::vector<GridAxis> by_slot(static_cast<size_t>(2 * dim));
    std::vector<bool> seen(static_cast<size_t>(2 * dim), false);
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::Config, "grid axis '" + item + "' lacks '='");
        const std::string name = item.substr(0, eq);
        int slot = -1;
        if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'u')) {
            try {
                size_t used = 0;
                const int k = std::stoi(name.substr(1), &used);
                if (used == name.size() - 1 && k >= 1 && k <= dim) slot = (name[0] == 'x' ? 0 : dim) + k - 1;
            } catch (const std::exception&) {
            }
        }
        if (slot < 0) throw Error(ErrorKind::Config, "unknown grid axis '" + name + "'");
        if (seen[static_cast<size_t>(slot)]) throw Error(ErrorKind::Config, "grid axis '" + name + "' given twice");
        GridAxis ax;
        ax.name = name;
        const std::string range = item.substr(eq + 1);
        char tail = 0;
        if (std::sscanf(range.c_str(), "%lf:%lf:%d%c", &ax.lo, &ax.hi, &ax.count, &tail) != 3 || ax.count < 1 ||
            !std::isfinite(ax.lo) || !std::isfinite(ax.hi))
            throw Error(ErrorKind::Config, "grid axis '" + name + "' must read lo:hi:N with N >= 1");
        by_slot[static_cast<size_t>(slot)] = ax;
        seen[static_cast<size_t>(slot)] = true;
    }
    for (size_t s = 0; s < seen.size(); ++s)
        if (!seen[s])
            throw Error(ErrorKind::Config, "grid must cover every component; missing " +
                                               std::string(s < static_cast<size_t>(dim) ? "x" : "u") +
                                               std::to_string(s % static_cast<size_t>(dim) + 1));
    return by_slot;
}

std::string force_table(const SimConfig& cfg, const std::vector<GridAxis>& grid) {
    const int n = cfg.dim;
    const MetricChart& chart = *cfg.chart;
    const WField W = stage("force", [&] { return configured_w(cfg); });
    HFunction h = hfunctions::zero();
    if (cfg.h_expr) {
        const Expression e = *cfg.h_expr;
        h = [e](double w) {
            Bindings b;
            b.w() = w;
            return e.eval(b);
        };
    }
    Table t(concat({names("x", n), names("u", n), {"W"}, names("F_wavefront_", n), names("F_normal_shift_", n)}));
    std::vector<int> idx(grid.size(), 0);
    for (;;) {
        Eigen::VectorXd state(2 * n);
        for (size_t a = 0; a < grid.size(); ++a) {
            const GridAxis& ax = grid[a];
            state[static_cast<Eigen::Index>(a)] =
                ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * idx[a] / (ax.count - 1);
        }
        const StateU st{Point(state.head(n)), Vector(state.tail(n)), 0.0};
        const Covector fw = stage("force", [&] { return force_wavefront(W, chart, st); });
        const Covector fn = stage("force", [&] { return force_normal_shift(W, h, chart, st); });
        std::vector<double> row(state.data(), state.data() + state.size());
        row.push_back(W.W(st.x, norm(chart, st.x, st.u)));
        for (int k = 0; k < n; ++k) row.push_back(fw[k]);
        for (int k = 0; k < n; ++k) row.push_back(fn[k]);
        t.row(row);

        size_t a = grid.size();
        while (a > 0) {
            --a;
            if (++idx[a] < grid[a].count) break;
            idx[a] = 0;
            if (a == 0) return t.str();
        }
        if (grid.empty()) return t.str();
    }
}

} // namespace nslab
