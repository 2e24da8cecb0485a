#include "nslab/config.hpp"

#include "nslab/fd.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace nslab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::Config, "config error in " + where + ": " + what);
}

void allow_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) bad(where, "unknown key '" + item.key() + "'");
}

const json& need(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) bad(where, std::string("missing key '") + key + "'");
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(where, "expected a finite number");
    return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

Eigen::VectorXd real_list(const json& v, int size, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != size)
        bad(where, "expected an array of " + std::to_string(size) + " numbers");
    Eigen::VectorXd out(size);
    for (int i = 0; i < size; ++i) out[i] = number(v[static_cast<size_t>(i)], where);
    return out;
}

// Expression from a JSON number or string, restricted to the given slots.
Expression expression(const json& v, const std::string& where, const std::function<bool(int)>& allowed) {
    Expression e = Expression::constant(0.0);
    if (v.is_number()) {
        e = Expression::constant(number(v, where));
    } else if (v.is_string()) {
        try {
            e = Expression::parse(v.get<std::string>());
        } catch (const ParseError& err) {
            throw ParseError(where + ": " + err.what(), err.position(), err.line(), err.column(), err.expected());
        }
    } else {
        bad(where, "expected an expression string or a number");
    }
    for (const std::string& name : e.variables())
        if (!allowed(variable_slot(name))) bad(where, "variable '" + name + "' is not available here");
    return e;
}

std::function<bool(int)> coords_only(int dim) {
    return [dim](int s) { return s >= 0 && s < dim; };
}

std::function<bool(int)> coords_and(int dim, int extra) {
    return [dim, extra](int s) { return (s >= 0 && s < dim) || s == extra; };
}

DomainBox box_of(const json& v, int dim, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim) bad(where, "expected one [lo, hi] pair per axis");
    DomainBox box;
    for (int i = 0; i < dim; ++i) {
        const Eigen::VectorXd pair = real_list(v[static_cast<size_t>(i)], 2, where);
        if (!(pair[0] < pair[1])) bad(where, "empty interval");
        box.bounds.emplace_back(pair[0], pair[1]);
    }
    return box;
}

MetricChart chart_of(const json& j, int dim) {
    const std::string where = "chart";
    const std::string family = text(need(j, "family", where), where + ".family");
    if (family == "euclidean") {
        allow_keys(j, {"family", "half_width"}, where);
        return charts::euclidean(dim, number_or(j, "half_width", 1e3, where));
    }
    if (family == "polar" || family == "sphere") {
        allow_keys(j, {"family"}, where);
        if (dim != 2) bad(where, family + " chart needs dim = 2");
        return family == "polar" ? charts::polar() : charts::sphere();
    }
    if (family == "diagonal") {
        allow_keys(j, {"family", "entries", "domain"}, where);
        const json& entries = need(j, "entries", where);
        if (!entries.is_array() || static_cast<int>(entries.size()) != dim) bad(where, "expected dim diagonal entries");
        std::vector<ScalarField> fields;
        for (int i = 0; i < dim; ++i)
            fields.push_back(field_from_expression(
                expression(entries[static_cast<size_t>(i)], where + ".entries", coords_only(dim)), dim));
        return charts::diagonal(fields, box_of(need(j, "domain", where), dim, where + ".domain"));
    }
    if (family == "conformal") {
        allow_keys(j, {"family", "phi", "domain"}, where);
        const Expression phi = expression(need(j, "phi", where), where + ".phi", coords_only(dim));
        return charts::conformal(dim, field_from_expression(phi, dim),
                                 box_of(need(j, "domain", where), dim, where + ".domain"));
    }
    bad(where, "unknown chart family '" + family + "'");
}

SymTensor tensor_from(int dim, int rank, const Bindings& b, const std::vector<Expression>& flat) {
    SymTensor t(dim, rank);
    for (size_t k = 0; k < t.size(); ++k) t[k] = flat[k].eval(b);
    return t;
}

void flatten(const json& v, int dim, int depth, const std::string& where, std::vector<Expression>& out) {
    if (depth == 0) {
        out.push_back(expression(v, where, coords_only(dim)));
        return;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != dim) bad(where, "coefficient array has the wrong shape");
    for (const json& item : v) flatten(item, dim, depth - 1, where, out);
}

void symbol_of(const json& j, SimConfig& cfg) {
    const std::string where = "symbol";
    const int dim = cfg.dim;
    const std::string family = text(need(j, "family", where), where + ".family");
    cfg.symbol_family = family;
    auto constant = [&](const json& obj) {
        return obj.contains("constant")
                   ? field_from_expression(expression(obj.at("constant"), where + ".constant", coords_only(dim)), dim)
                   : ScalarField::constant(0.0);
    };
    if (family == "index_medium") {
        allow_keys(j, {"family", "index"}, where);
        cfg.index_expr = expression(need(j, "index", where), where + ".index", coords_only(dim));
        cfg.symbol = symbols::index_medium(dim, field_from_expression(*cfg.index_expr, dim));
    } else if (family == "quadratic") {
        allow_keys(j, {"family", "scale", "constant"}, where);
        cfg.symbol = symbols::quadratic(dim, number_or(j, "scale", 1.0, where), constant(j));
    } else if (family == "quartic") {
        allow_keys(j, {"family", "constant"}, where);
        cfg.symbol = symbols::quartic(dim, constant(j));
    } else if (family == "inverse_metric") {
        allow_keys(j, {"family", "constant"}, where);
        cfg.symbol = symbols::inverse_metric(*cfg.chart, constant(j));
    } else if (family == "polynomial") {
        allow_keys(j, {"family", "coefficients"}, where);
        const json& coeffs = need(j, "coefficients", where);
        if (!coeffs.is_array() || coeffs.empty()) bad(where, "coefficients must be a non-empty array");
        std::vector<PolySymbol::Term> terms;
        for (size_t r = 0; r < coeffs.size(); ++r) {
            std::vector<Expression> flat;
            flatten(coeffs[r], dim, static_cast<int>(r), where + ".coefficients[" + std::to_string(r) + "]", flat);
            const int rank = static_cast<int>(r);
            PolySymbol::Term term;
            term.coeff = [flat, dim, rank](const Point& x) {
                Bindings b;
                for (int i = 0; i < dim; ++i) b.x(i) = x[i];
                return tensor_from(dim, rank, b, flat);
            };
            terms.push_back(std::move(term));
        }
        cfg.symbol = PolySymbol("polynomial", dim, std::move(terms));
    } else {
        bad(where, "unknown symbol family '" + family + "'");
    }
}

std::vector<double> samples_per_axis(const json& v, int axes, const std::string& where) {
    std::vector<double> out;
    if (v.is_number_integer()) {
        out.assign(static_cast<size_t>(axes), static_cast<double>(v.get<int>()));
    } else if (v.is_array() && static_cast<int>(v.size()) == axes) {
        for (const json& item : v) out.push_back(integer(item, where));
    } else {
        bad(where, "expected an integer or one integer per parameter axis");
    }
    return out;
}

void front_of(const json& j, SimConfig& cfg) {
    const std::string where = "front";
    const int dim = cfg.dim;
    FrontSpec& f = cfg.front;
    f.family = text(need(j, "family", where), where + ".family");
    Eigen::VectorXd default_seed = Eigen::VectorXd::Zero(dim);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    if (f.family == "circle") {
        allow_keys(j, {"family", "center", "radius", "samples", "orient_seed", "nu_branch", "nu_guess", "s0"}, where);
        if (dim != 2) bad(where, "circle front needs dim = 2");
        const Eigen::VectorXd c = j.contains("center") ? real_list(j.at("center"), 2, where + ".center")
                                                       : Eigen::VectorXd::Zero(2);
        const double r = number_or(j, "radius", 1.0, where);
        if (!(r > 0.0)) bad(where, "radius must be positive");
        f.grid.axes = {LatticeAxis{integer(need(j, "samples", where), where + ".samples"), 0.0, two_pi, true}};
        f.embed = [c, r](const std::vector<double>& q) {
            return Point{c[0] + r * std::cos(q[0]), c[1] + r * std::sin(q[0])};
        };
        default_seed[0] = 1.0;
    } else if (f.family == "latitude") {
        allow_keys(j, {"family", "theta", "samples", "orient_seed", "nu_branch", "nu_guess", "s0"}, where);
        if (cfg.chart->name() != "sphere") bad(where, "latitude front needs the sphere chart");
        const double theta = number(need(j, "theta", where), where + ".theta");
        f.grid.axes = {LatticeAxis{integer(need(j, "samples", where), where + ".samples"), 0.0, two_pi, true}};
        f.embed = [theta](const std::vector<double>& q) { return Point{theta, q[0]}; };
        default_seed[0] = 1.0;
    } else if (f.family == "plane") {
        allow_keys(j, {"family", "origin", "spans", "samples", "orient_seed", "nu_branch", "nu_guess", "s0"}, where);
        const Eigen::VectorXd origin = real_list(need(j, "origin", where), dim, where + ".origin");
        const json& spans_json = need(j, "spans", where);
        if (!spans_json.is_array() || static_cast<int>(spans_json.size()) != dim - 1)
            bad(where, "plane needs dim - 1 span vectors");
        std::vector<Eigen::VectorXd> spans;
        for (const json& s : spans_json) spans.push_back(real_list(s, dim, where + ".spans"));
        const auto counts = samples_per_axis(need(j, "samples", where), dim - 1, where + ".samples");
        for (double c : counts) f.grid.axes.push_back(LatticeAxis{static_cast<int>(c), -1.0, 1.0, false});
        f.embed = [origin, spans](const std::vector<double>& q) {
            Eigen::VectorXd x = origin;
            for (size_t a = 0; a < spans.size(); ++a) x += q[a] * spans[a];
            return Point(x);
        };
    } else if (f.family == "expression") {
        allow_keys(j, {"family", "coords", "axes", "orient_seed", "nu_branch", "nu_guess", "s0"}, where);
        const json& coords = need(j, "coords", where);
        if (!coords.is_array() || static_cast<int>(coords.size()) != dim) bad(where, "expected dim coordinate expressions");
        const int rank = dim - 1;
        auto params_only = [rank](int s) { return s >= Bindings::kCoords && s < Bindings::kCoords + rank; };
        std::vector<Expression> exprs;
        for (const json& c : coords) exprs.push_back(expression(c, where + ".coords", params_only));
        const json& axes = need(j, "axes", where);
        if (!axes.is_array() || static_cast<int>(axes.size()) != rank) bad(where, "expected dim - 1 parameter axes");
        for (const json& a : axes) {
            allow_keys(a, {"lo", "hi", "samples", "periodic"}, where + ".axes");
            LatticeAxis ax;
            ax.lo = number(need(a, "lo", where), where + ".axes.lo");
            ax.hi = number(need(a, "hi", where), where + ".axes.hi");
            ax.count = integer(need(a, "samples", where), where + ".axes.samples");
            ax.periodic = a.contains("periodic") && a.at("periodic").is_boolean() && a.at("periodic").get<bool>();
            f.grid.axes.push_back(ax);
        }
        f.embed = [exprs, dim, rank](const std::vector<double>& q) {
            Bindings b;
            for (int a = 0; a < rank; ++a) b.q(a) = q[static_cast<size_t>(a)];
            Eigen::VectorXd x(dim);
            for (int i = 0; i < dim; ++i) x[i] = exprs[static_cast<size_t>(i)].eval(b);
            return Point(x);
        };
    } else {
        bad(where, "unknown front family '" + f.family + "'");
    }

    if (j.contains("orient_seed")) {
        f.orient_seed = Vector(real_list(j.at("orient_seed"), dim, where + ".orient_seed"));
    } else if (default_seed.norm() > 0.0) {
        f.orient_seed = Vector(default_seed);
    } else {
        bad(where, "orient_seed is required for this front family");
    }
    const std::string branch = j.contains("nu_branch") ? text(j.at("nu_branch"), where + ".nu_branch") : "positive";
    f.branch = nu_branch_from_string(branch, number_or(j, "nu_guess", 0.0, where));
    f.s0 = number_or(j, "s0", 0.0, where);
}

void flow_of(const json& j, SimConfig& cfg) {
    const std::string where = "flow";
    allow_keys(j, {"form", "method", "dt", "atol", "rtol", "t_end", "record_every", "snapshot_times", "w_level"},
               where);
    FlowSpec& f = cfg.flow;
    f.form = form_from_string(text(need(j, "form", where), where + ".form"));
    const std::string method = j.contains("method") ? text(j.at("method"), where + ".method") : "rk4";
    if (method == "rk4") f.stepper.method = Method::RK4;
    else if (method == "rk45") f.stepper.method = Method::RK45;
    else bad(where, "unknown method '" + method + "'");
    f.stepper.dt = number_or(j, "dt", 1e-3, where);
    f.stepper.atol = number_or(j, "atol", 1e-10, where);
    f.stepper.rtol = number_or(j, "rtol", 1e-10, where);
    f.stepper.t_end = number(need(j, "t_end", where), where + ".t_end");
    f.stepper.record_every = j.contains("record_every") ? integer(j.at("record_every"), where + ".record_every") : 1;
    if (j.contains("snapshot_times")) {
        const json& times = j.at("snapshot_times");
        if (!times.is_array()) bad(where, "snapshot_times must be an array");
        for (const json& t : times) f.snapshot_times.push_back(number(t, where + ".snapshot_times"));
    } else {
        f.snapshot_times = {f.stepper.t_end};
    }
    f.w_level = number_or(j, "w_level", 0.0, where);
}

void output_of(const json& j, SimConfig& cfg) {
    const std::string where = "output";
    allow_keys(j, {"formats", "trajectories"}, where);
    if (j.contains("formats")) {
        const json& formats = j.at("formats");
        if (!formats.is_array()) bad(where, "formats must be an array");
        cfg.output.csv = cfg.output.dat = false;
        for (const json& f : formats) {
            const std::string name = text(f, where + ".formats");
            if (name == "csv") cfg.output.csv = true;
            else if (name == "dat") cfg.output.dat = true;
            else bad(where, "unknown format '" + name + "'");
        }
    }
    if (j.contains("trajectories")) {
        if (!j.at("trajectories").is_boolean()) bad(where, "trajectories must be true or false");
        cfg.output.trajectories = j.at("trajectories").get<bool>();
    }
}

} // namespace

ScalarField field_from_expression(const Expression& e, int dim) {
    ScalarField f;
    f.value = [e, dim](const Point& x) {
        Bindings b;
        for (int i = 0; i < dim; ++i) b.x(i) = x[i];
        return e.eval(b);
    };
    return f;
}

SimConfig parse_config(const json& j) {
    allow_keys(j, {"dim", "chart", "symbol", "lagrangian", "W", "h", "front", "flow", "output"}, "config");
    SimConfig cfg;
    cfg.raw = j;
    cfg.dim = integer(need(j, "dim", "config"), "dim");
    if (cfg.dim < 2 || cfg.dim > Bindings::kCoords) bad("dim", "must lie in [2, 16]");

    const int sources = static_cast<int>(j.contains("symbol")) + static_cast<int>(j.contains("lagrangian")) +
                        static_cast<int>(j.contains("W"));
    if (sources != 1) bad("config", "exactly one of symbol, lagrangian, W must be given");

    cfg.chart = chart_of(need(j, "chart", "config"), cfg.dim);

    if (j.contains("symbol")) {
        cfg.source = SourceKind::Symbol;
        symbol_of(j.at("symbol"), cfg);
    } else if (j.contains("lagrangian")) {
        cfg.source = SourceKind::Lagrangian;
        allow_keys(j.at("lagrangian"), {"L"}, "lagrangian");
        cfg.lagrangian_expr = expression(need(j.at("lagrangian"), "L", "lagrangian"), "lagrangian.L",
                                         coords_and(cfg.dim, Bindings::kSlotV));
    } else {
        cfg.source = SourceKind::W;
        allow_keys(j.at("W"), {"W", "epsilon"}, "W");
        cfg.w_expr = expression(need(j.at("W"), "W", "W"), "W.W", coords_and(cfg.dim, Bindings::kSlotU));
        cfg.w_epsilon = j.at("W").contains("epsilon") ? integer(j.at("W").at("epsilon"), "W.epsilon") : 1;
        if (cfg.w_epsilon != 1 && cfg.w_epsilon != -1) bad("W.epsilon", "must be 1 or -1");
    }
    if (j.contains("h")) cfg.h_expr = expression(j.at("h"), "h", [](int s) { return s == Bindings::kSlotW; });

    front_of(need(j, "front", "config"), cfg);
    flow_of(need(j, "flow", "config"), cfg);
    if (j.contains("output")) output_of(j.at("output"), cfg);

    if (cfg.source != SourceKind::Symbol && cfg.flow.form != Form::Newtonian)
        bad("flow.form", "a lagrangian or W source supports only the newtonian form");
    if (cfg.h_expr && cfg.flow.form != Form::Newtonian) bad("h", "h applies only to the newtonian form");
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot read config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, "config error: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

namespace {

SphericalLagrangian lagrangian_from_expression(const Expression& e, int dim) {
    auto L = [e, dim](const Point& x, double v) {
        Bindings b;
        for (int i = 0; i < dim; ++i) b.x(i) = x[i];
        b.v() = v;
        return e.eval(b);
    };
    SphericalLagrangian lag;
    lag.L = L;
    lag.L1 = [L](const Point& x, double v) { return fd::derivative([&](double s) { return L(x, s); }, v); };
    lag.L2 = [L](const Point& x, double v) {
        const double h = 1e-4 * (1.0 + std::abs(v));
        return (L(x, v + h) - 2.0 * L(x, v) + L(x, v - h)) / (h * h);
    };
    lag.gradx_L = [L](const Point& x, double v) {
        return Covector(fd::gradient([&](const Eigen::VectorXd& y) { return L(Point(y), v); }, x.values()));
    };
    auto L1 = lag.L1;
    lag.gradx_L1 = [L1](const Point& x, double v) {
        return Covector(fd::gradient([&](const Eigen::VectorXd& y) { return L1(Point(y), v); }, x.values()));
    };
    return lag;
}

Point reference_point(const SimConfig& cfg) {
    std::vector<double> q;
    for (const auto& ax : cfg.front.grid.axes) q.push_back(ax.lo);
    return cfg.front.embed(q);
}

} // namespace

WField configured_w(const SimConfig& cfg) {
    switch (cfg.source) {
    case SourceKind::W: {
        const Expression e = *cfg.w_expr;
        const int dim = cfg.dim;
        return wfields::from_function(
            [e, dim](const Point& x, double u) {
                Bindings b;
                for (int i = 0; i < dim; ++i) b.x(i) = x[i];
                b.u() = u;
                return e.eval(b);
            },
            cfg.w_epsilon);
    }
    case SourceKind::Lagrangian:
        return build_W(lagrangian_from_expression(*cfg.lagrangian_expr, cfg.dim), reference_point(cfg));
    case SourceKind::Symbol:
        if (cfg.symbol_family == "index_medium")
            return wfields::index_medium(field_from_expression(*cfg.index_expr, cfg.dim));
        {
            const Point ref = reference_point(cfg);
            return build_W(spherical_from_symbol(*cfg.symbol, *cfg.chart, {ref}), ref);
        }
    }
    throw Error(ErrorKind::Config, "no W source configured");
}

ForceField configured_force(const SimConfig& cfg) {
    WField W = configured_w(cfg);
    if (!cfg.h_expr) return wavefront_force(std::move(W), *cfg.chart);
    const Expression h = *cfg.h_expr;
    HFunction hf = [h](double w) {
        Bindings b;
        b.w() = w;
        return h.eval(b);
    };
    return normal_shift_force(std::move(W), std::move(hf), *cfg.chart);
}

} // namespace nslab
