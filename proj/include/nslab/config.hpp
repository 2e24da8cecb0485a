#pragma once

#include "nslab/expression.hpp"
#include "nslab/flow.hpp"
#include "nslab/forces.hpp"
#include "nslab/front.hpp"
#include "nslab/geometry.hpp"
#include "nslab/legendre.hpp"
#include "nslab/symbol.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nslab {

enum class SourceKind { Symbol, Lagrangian, W };

struct FrontSpec {
    std::string family;
    Embedding embed;
    Lattice grid;
    Vector orient_seed;
    NuBranch branch;
    double s0 = 0.0;
};

struct FlowSpec {
    Form form = Form::Modified;
    StepperConfig stepper;
    std::vector<double> snapshot_times;
    double w_level = 0.0;
};

struct OutputSpec {
    bool csv = true;
    bool dat = true;
    bool trajectories = true;
};

// Validated simulation configuration with every model object built.
struct SimConfig {
    nlohmann::json raw;
    int dim = 0;
    std::optional<MetricChart> chart;
    SourceKind source = SourceKind::Symbol;
    std::optional<PolySymbol> symbol;
    std::string symbol_family;
    std::optional<Expression> index_expr;  // index_medium symbols only
    std::optional<Expression> lagrangian_expr;
    std::optional<Expression> w_expr;
    int w_epsilon = 1;
    std::optional<Expression> h_expr;
    FrontSpec front;
    FlowSpec flow;
    OutputSpec output;
};

// Schema errors throw ErrorKind::Config, malformed expressions ErrorKind::Parse.
SimConfig parse_config(const nlohmann::json& j);
// Adds ErrorKind::Io for unreadable files and reports JSON syntax errors as Config.
SimConfig load_config(const std::string& path);

// Scalar field x -> e(x) on an n-dimensional chart, gradient by central differences.
ScalarField field_from_expression(const Expression& e, int dim);

// W field of the configured source; built from the symbol's Lagrange function
// when the source is a symbol.
WField configured_w(const SimConfig& cfg);
// Force of the Newtonian form: wave-front force, or the general normal-shift
// force when h is configured.
ForceField configured_force(const SimConfig& cfg);

} // namespace nslab
