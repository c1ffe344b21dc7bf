#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sevdyn/model.hpp"
#include "sevdyn/sde.hpp"

namespace sevdyn {

/// One observed transition: state x, increment dx over elapsed dt.
struct IncrementRecord {
    double x = 0.0;
    double dx = 0.0;
    double dt = 0.0;
};

struct IncrementDataset {
    std::vector<IncrementRecord> records;

    void validate() const;
    std::size_t size() const { return records.size(); }
};

/// Raw increments (x_k, x_{k+1}-x_k, t_{k+1}-t_k) from a recorded trajectory.
IncrementDataset increments_from_trajectory(const Trajectory& t);
IncrementDataset increments_from_ensemble(const Ensemble& e);

/// Drops records whose state lies within 2 sigma(x) sqrt(dt) of either
/// boundary, where the reflected increment distribution is no longer
/// Gaussian. sigma is evaluated under the supplied reference parameters.
IncrementDataset filter_interior(const IncrementDataset& data, const ModelParams& reference);

/// Gaussian pseudo-likelihood of the Euler increments:
/// sum_i [ -1/2 log(2 pi sigma^2(x_i) dt_i) - (dx_i - mu(x_i) dt_i)^2 / (2 sigma^2(x_i) dt_i) ].
/// Summed pairwise in a fixed order, so the value is reproducible.
double pseudo_log_likelihood(const ModelParams& p, const IncrementDataset& data);

struct FitResult {
    ModelParams params;
    double log_likelihood = 0.0;
    bool converged = false;
    long n_iterations = 0;
    std::vector<double> objective_trace;  ///< best log-likelihood per iteration
};

/// Default starting point when the caller supplies none.
inline constexpr ModelParams kDefaultFitInit{0.1, 0.1, 0.01, 0.05, 0.05};

/// Maximizes the pseudo-likelihood over the box alpha,beta,gamma,sigma1 >= 0,
/// sigma0 >= 1e-6 with a Nelder-Mead direct search projected onto the box.
/// Deterministic given (data, init, max_iter, tol). Requires >= 100 records.
FitResult fit_params(const IncrementDataset& data, const ModelParams& init = kDefaultFitInit,
                     long max_iter = 4000, double tol = 1e-9);

/// Reads increment data from CSV. Accepts three headers:
///   `t,x`          a single trajectory; increments derived internally
///   `traj_id,t,x`  an ensemble; increments never span trajectories
///   `x,dx,dt`      pre-computed increments
IncrementDataset read_increment_csv(std::istream& is);

std::string fit_json(const FitResult& r);

}  // namespace sevdyn
