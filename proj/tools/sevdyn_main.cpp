#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sevdyn/calibration.hpp"
#include "sevdyn/config.hpp"
#include "sevdyn/criticality.hpp"
#include "sevdyn/errors.hpp"
#include "sevdyn/first_passage.hpp"
#include "sevdyn/fokker_planck.hpp"
#include "sevdyn/io.hpp"
#include "sevdyn/model.hpp"
#include "sevdyn/sde.hpp"
#include "sevdyn/verifier.hpp"
#include "sevdyn/version.hpp"

namespace {

using nlohmann::json;
using namespace sevdyn;

constexpr const char* kUsage =
    "usage: sevdyn <subcommand> --config <path> [--key value ...]\n"
    "\n"
    "subcommands:\n"
    "  simulate       integrate trajectories           -> trajectory.csv\n"
    "  evolve         advance the probability density  -> density.csv\n"
    "  stationary     closed-form stationary density   -> stationary.csv\n"
    "  mfpt           mean first-passage time (both)   -> mfpt.json\n"
    "  phase-diagram  regime/relaxation sweep          -> phase.csv\n"
    "  scaling        relaxation-time power-law fit    -> scaling.json\n"
    "  fit            calibrate parameters from CSV    -> fit.json\n"
    "  certify        stability certificate            -> certificate.json\n"
    "\n"
    "Dotted --key value pairs override config fields, e.g. --sim.seed 7\n"
    "or --model.alpha 0.45. --threads N caps worker threads.\n";

std::string out_path(const RunConfig& cfg, const char* name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void emit_summary(const json& j) { std::cout << j.dump() << "\n"; }

FirstPassageSpec require_passage(const RunConfig& cfg) {
    if (!cfg.passage.has_value()) {
        throw ValidationError("passage: block required by this subcommand is missing");
    }
    return cfg.passage->spec;
}

int cmd_simulate(const RunConfig& cfg) {
    std::ostringstream os;
    json summary{{"command", "simulate"}, {"n_traj", cfg.sim.n_traj}};
    if (cfg.sim.n_traj == 1) {
        const Trajectory t = simulate_trajectory(cfg.model, cfg.sim);
        write_trajectory_csv(t, os);
        summary["terminal_x"] = t.values.back();
    } else {
        const Ensemble e = simulate_ensemble(cfg.model, cfg.sim, cfg.threads);
        write_ensemble_csv(e, os);
        double m = 0.0;
        for (const Trajectory& t : e.trajectories) m += t.values.back();
        summary["terminal_mean"] = m / cfg.sim.n_traj;
    }
    const std::string path = out_path(cfg, "trajectory.csv");
    write_text_file(path, os.str());
    summary["file"] = path;
    emit_summary(summary);
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    DensityGrid init = cfg.evolve.init == "uniform"
        ? DensityGrid::uniform(cfg.grid.n_cells)
        : DensityGrid::point_mass(cfg.grid.n_cells, cfg.evolve.x0);
    const DensityGrid out = evolve_density(cfg.model, init, cfg.evolve.dt, cfg.evolve.n_steps);
    std::ostringstream os;
    write_density_csv(out, os);
    const std::string path = out_path(cfg, "density.csv");
    write_text_file(path, os.str());
    double total = 0.0;
    for (double m : out.mass) total += m;
    emit_summary({{"command", "evolve"}, {"file", path}, {"time", out.time},
                  {"total_mass", total}, {"mean", out.mean()}});
    return 0;
}

int cmd_stationary(const RunConfig& cfg) {
    const StationaryDensity sd = stationary_density(cfg.model, cfg.grid.n_cells);
    std::ostringstream os;
    write_stationary_csv(sd, cfg.model, os);
    const std::string path = out_path(cfg, "stationary.csv");
    write_text_file(path, os.str());
    const ModeReport modes = detect_modes(sd);
    json m = json::array();
    for (double x : modes.mode_locations) m.push_back(x);
    emit_summary({{"command", "stationary"}, {"file", path}, {"modes", m},
                  {"is_bimodal", modes.is_bimodal}});
    return 0;
}

int cmd_mfpt(const RunConfig& cfg) {
    const FirstPassageSpec spec = require_passage(cfg);
    const QuadratureMfpt q = mfpt_quadrature(cfg.model, spec, 1024);
    const FptResult mc = mfpt_monte_carlo(cfg.model, spec, cfg.sim, cfg.threads);
    json out{
        {"quadrature", json::parse(mfpt_json_record(q, cfg.model, spec))},
        {"monte_carlo", json::parse(mfpt_json_record(mc, cfg.model, spec))},
    };
    const std::string path = out_path(cfg, "mfpt.json");
    write_text_file(path, out.dump(2) + "\n");
    emit_summary({{"command", "mfpt"}, {"file", path},
                  {"quadrature_mean", q.effectively_infinite ? json("inf") : json(q.mean_fpt)},
                  {"monte_carlo_mean", mc.mean_fpt ? json(*mc.mean_fpt) : json("censored")},
                  {"censored_fraction", mc.censored_fraction()}});
    return 0;
}

int cmd_phase_diagram(const RunConfig& cfg) {
    if (!cfg.sweep.has_value()) {
        throw ValidationError("sweep: block required by phase-diagram is missing");
    }
    const PhaseDiagram d = phase_diagram(cfg.sweep->alpha_grid, cfg.sweep->beta_grid,
                                         cfg.model.gamma, cfg.model.sigma0, cfg.model.sigma1,
                                         cfg.grid.n_cells, cfg.threads);
    std::ostringstream os;
    write_phase_csv(d, os);
    const std::string path = out_path(cfg, "phase.csv");
    write_text_file(path, os.str());
    long failures = 0;
    for (const PhaseCell& c : d.cells) failures += c.error.empty() ? 0 : 1;
    emit_summary({{"command", "phase-diagram"}, {"file", path},
                  {"cells", d.cells.size()}, {"failed_cells", failures}});
    return 0;
}

int cmd_scaling(const RunConfig& cfg) {
    if (!cfg.scaling.has_value()) {
        throw ValidationError("scaling: block required by this subcommand is missing");
    }
    std::vector<double> taus;
    for (double delta : cfg.scaling->deltas) {
        ModelParams p = cfg.model;
        p.alpha = cfg.model.beta + delta;
        if (p.alpha < 0.0) {
            throw ValidationError("scaling.deltas: beta + delta must stay nonnegative");
        }
        taus.push_back(relaxation_time(p, cfg.grid.n_cells).tau);
    }
    const ScalingFit fit = fit_scaling_exponent(cfg.scaling->deltas, taus);
    const std::string path = out_path(cfg, "scaling.json");
    write_text_file(path, scaling_json(fit) + "\n");
    emit_summary({{"command", "scaling"}, {"file", path}, {"exponent", fit.exponent},
                  {"r_squared", fit.r_squared}});
    return 0;
}

int cmd_fit(const RunConfig& cfg) {
    if (!cfg.fit.has_value()) {
        throw ValidationError("fit: block required by this subcommand is missing");
    }
    std::ifstream in(cfg.fit->input);
    if (!in) throw ValidationError("fit.input: cannot read " + cfg.fit->input);
    IncrementDataset data = read_increment_csv(in);
    data = filter_interior(data, cfg.model);
    const FitResult r = fit_params(data, cfg.model, cfg.fit->max_iter, cfg.fit->tol);
    const std::string path = out_path(cfg, "fit.json");
    write_text_file(path, fit_json(r) + "\n");
    emit_summary({{"command", "fit"}, {"file", path}, {"converged", r.converged},
                  {"log_likelihood", r.log_likelihood},
                  {"params", {{"alpha", r.params.alpha}, {"beta", r.params.beta},
                              {"gamma", r.params.gamma}, {"sigma0", r.params.sigma0},
                              {"sigma1", r.params.sigma1}}}});
    return 0;
}

int cmd_certify(const RunConfig& cfg) {
    const FirstPassageSpec spec = require_passage(cfg);
    const double horizon = cfg.passage->horizon;
    if (!(horizon > 0.0)) throw ValidationError("passage.horizon: must be positive");
    const Certificate c = certify(cfg.model, spec.x_harm, spec.x_start, horizon);
    const std::string path = out_path(cfg, "certificate.json");
    write_text_file(path, certificate_json(c) + "\n");
    emit_summary({{"command", "certify"}, {"file", path}, {"verdict", to_string(c.verdict)}});
    return 0;
}

int run(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << kUsage;
        return 1;
    }
    const std::string sub = argv[1];
    if (sub == "--help" || sub == "-h" || sub == "help") {
        std::cout << kUsage;
        return 0;
    }
    if (sub == "--version") {
        std::cout << "sevdyn " << kVersion << "\n";
        return 0;
    }

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    for (int i = 2; i < argc; ++i) {
        std::string key = argv[i];
        if (key.rfind("--", 0) != 0) {
            std::cerr << "unexpected argument: " << key << "\n" << kUsage;
            return 1;
        }
        key = key.substr(2);
        if (i + 1 >= argc) {
            std::cerr << "missing value for --" << key << "\n";
            return 1;
        }
        const std::string value = argv[++i];
        if (key == "config") {
            config_path = value;
        } else {
            overrides.emplace_back(key, value);
        }
    }
    if (config_path.empty()) {
        std::cerr << "a --config <path> flag is required\n" << kUsage;
        return 1;
    }

    const RunConfig cfg = load_config(config_path, overrides);
    if (sub == "simulate") return cmd_simulate(cfg);
    if (sub == "evolve") return cmd_evolve(cfg);
    if (sub == "stationary") return cmd_stationary(cfg);
    if (sub == "mfpt") return cmd_mfpt(cfg);
    if (sub == "phase-diagram") return cmd_phase_diagram(cfg);
    if (sub == "scaling") return cmd_scaling(cfg);
    if (sub == "fit") return cmd_fit(cfg);
    if (sub == "certify") return cmd_certify(cfg);
    std::cerr << "unknown subcommand: " << sub << "\n" << kUsage;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ValidationError& ex) {
        std::cerr << "validation error: " << ex.what() << "\n";
        return 1;
    } catch (const NumericalError& ex) {
        std::cerr << "numerical error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
