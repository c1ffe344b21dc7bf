#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sevdyn/model.hpp"

namespace sevdyn {

struct SimConfig {
    double dt = 0.01;            ///< time step, > 0
    long n_steps = 10000;        ///< >= 1
    Severity x0 = 0.1;           ///< initial condition in [0,1]
    std::uint64_t seed = 1;      ///< generator seed (base seed for ensembles)
    long n_traj = 1;             ///< ensemble size, >= 1
    long record_stride = 1;      ///< store every k-th sample, >= 1

    void validate() const;
};

/// A recorded sample path. times[k] = k * dt * record_stride; values[0] = x0.
struct Trajectory {
    std::vector<double> times;
    std::vector<Severity> values;
    std::uint64_t seed = 0;
    ModelParams params;
};

/// Independent trajectories; trajectory i was generated with base_seed + i.
struct Ensemble {
    std::vector<Trajectory> trajectories;
    std::uint64_t base_seed = 0;
};

/// Folds a raw value into [0,1] by repeated reflection:
/// x < 0 -> -x, x > 1 -> 2 - x. Total for any finite input.
double reflect_unit(double x);

/// Raw Euler-Maruyama increment, no boundary handling:
/// x + mu(x) dt + sigma(x) sqrt(dt) eta.
double em_step_raw(const ModelParams& p, Severity x, double dt, double eta);

/// One reflected Euler-Maruyama step; eta is a standard-normal draw supplied
/// by the caller.
Severity em_step(const ModelParams& p, Severity x, double dt, double eta);

/// Iterates em_step from cfg.x0 with draws from NormalSampler(cfg.seed).
/// Identical (p, cfg) yield bit-identical trajectories.
Trajectory simulate_trajectory(const ModelParams& p, const SimConfig& cfg);

/// cfg.n_traj trajectories, trajectory i seeded with cfg.seed + i. The result
/// is independent of execution order; n_threads = 0 picks the hardware count.
Ensemble simulate_ensemble(const ModelParams& p, const SimConfig& cfg, int n_threads = 0);

/// CSV export, header `t,x`, 17 significant digits.
void write_trajectory_csv(const Trajectory& t, std::ostream& os);

/// CSV export with a leading traj_id column.
void write_ensemble_csv(const Ensemble& e, std::ostream& os);

}  // namespace sevdyn
