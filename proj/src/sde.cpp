#include "sevdyn/sde.hpp"

#include <cmath>
#include <ostream>

#include "sevdyn/errors.hpp"
#include "sevdyn/io.hpp"
#include "sevdyn/numeric.hpp"
#include "sevdyn/rng.hpp"

namespace sevdyn {

void SimConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim.dt must be positive");
    if (n_steps < 1) throw ValidationError("sim.n_steps must be >= 1");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw ValidationError("sim.x0 must lie in [0,1]");
    if (n_traj < 1) throw ValidationError("sim.n_traj must be >= 1");
    if (record_stride < 1) throw ValidationError("sim.record_stride must be >= 1");
}

double reflect_unit(double x) {
    if (x >= 0.0 && x <= 1.0) return x;
    if (x > 3.0 || x < -3.0) {
        // Far outside: fold by the period-2 triangle wave first.
        x = std::fmod(x, 2.0);
        if (x < 0.0) x += 2.0;
    }
    while (x < 0.0 || x > 1.0) {
        x = (x < 0.0) ? -x : 2.0 - x;
    }
    return x;
}

double em_step_raw(const ModelParams& p, Severity x, double dt, double eta) {
    return x + drift(p, x) * dt + diffusion(p, x) * std::sqrt(dt) * eta;
}

Severity em_step(const ModelParams& p, Severity x, double dt, double eta) {
    return reflect_unit(em_step_raw(p, x, dt, eta));
}

Trajectory simulate_trajectory(const ModelParams& p, const SimConfig& cfg) {
    p.validate();
    cfg.validate();
    const long n_rec = cfg.n_steps / cfg.record_stride + 1;
    Trajectory out;
    out.seed = cfg.seed;
    out.params = p;
    out.times.resize(n_rec);
    out.values.resize(n_rec);
    for (long k = 0; k < n_rec; ++k) {
        out.times[k] = static_cast<double>(k) * cfg.dt * static_cast<double>(cfg.record_stride);
    }
    NormalSampler rng(cfg.seed);
    Severity x = cfg.x0;
    out.values[0] = x;
    for (long s = 1; s <= cfg.n_steps; ++s) {
        x = em_step(p, x, cfg.dt, rng.next());
        if (s % cfg.record_stride == 0) out.values[s / cfg.record_stride] = x;
    }
    return out;
}

Ensemble simulate_ensemble(const ModelParams& p, const SimConfig& cfg, int n_threads) {
    p.validate();
    cfg.validate();
    Ensemble out;
    out.base_seed = cfg.seed;
    out.trajectories.resize(cfg.n_traj);
    parallel_for_blocks(static_cast<std::size_t>(cfg.n_traj), n_threads,
                        [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            SimConfig one = cfg;
            one.seed = cfg.seed + i;
            one.n_traj = 1;
            out.trajectories[i] = simulate_trajectory(p, one);
        }
    });
    return out;
}

void write_trajectory_csv(const Trajectory& t, std::ostream& os) {
    os << "t,x\n";
    for (std::size_t k = 0; k < t.times.size(); ++k) {
        os << format_g17(t.times[k]) << ',' << format_g17(t.values[k]) << '\n';
    }
}

void write_ensemble_csv(const Ensemble& e, std::ostream& os) {
    os << "traj_id,t,x\n";
    for (std::size_t i = 0; i < e.trajectories.size(); ++i) {
        const Trajectory& t = e.trajectories[i];
        for (std::size_t k = 0; k < t.times.size(); ++k) {
            os << i << ',' << format_g17(t.times[k]) << ',' << format_g17(t.values[k]) << '\n';
        }
    }
}

}  // namespace sevdyn
