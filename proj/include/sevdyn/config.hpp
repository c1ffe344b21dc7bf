#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sevdyn/first_passage.hpp"
#include "sevdyn/model.hpp"
#include "sevdyn/sde.hpp"

namespace sevdyn {

struct GridConfig {
    int n_cells = 2000;
};

struct PassageConfig {
    FirstPassageSpec spec;
    double horizon = 0.0;
};

struct SweepConfig {
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
};

struct ScalingConfig {
    std::vector<double> deltas;  ///< Delta = alpha - beta offsets from model.beta
};

struct EvolveConfig {
    std::string init = "delta";  ///< "uniform" or "delta"
    double x0 = 0.1;
    double dt = 0.1;
    long n_steps = 5000;
};

struct FitConfig {
    std::string input;  ///< CSV path: `t,x`, `traj_id,t,x` or `x,dx,dt`
    long max_iter = 4000;
    double tol = 1e-9;
};

/// Parsed and validated run configuration. Blocks that a subcommand does not
/// need may be absent; subcommands check for what they require.
struct RunConfig {
    ModelParams model;
    SimConfig sim;
    GridConfig grid;
    std::optional<PassageConfig> passage;
    std::optional<SweepConfig> sweep;
    std::optional<ScalingConfig> scaling;
    EvolveConfig evolve;
    std::optional<FitConfig> fit;
    std::string output_dir = "out";
    int threads = 0;  ///< 0 = hardware concurrency
};

/// Parses and validates a JSON document (text form). Throws ValidationError
/// whose message starts with the dotted path of the first failing field.
RunConfig parse_config(const std::string& json_text);

/// Loads a config file and applies `--key value` dotted-path overrides before
/// validation. Values are parsed as JSON literals, falling back to strings.
RunConfig load_config(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides);

}  // namespace sevdyn
