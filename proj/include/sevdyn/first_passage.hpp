#pragma once

#include <optional>
#include <string>

#include "sevdyn/model.hpp"
#include "sevdyn/sde.hpp"

namespace sevdyn {

struct FirstPassageSpec {
    double x_harm = 0.7;   ///< absorbing harm threshold, in (0,1)
    double x_start = 0.0;  ///< start point, 0 <= x_start < x_harm
    double t_max = 1e4;    ///< Monte Carlo censoring horizon, > 0

    void validate() const;
};

/// Quadrature result. When the exponent integral exceeds the representable
/// range the mean is +inf with `effectively_infinite` set; log_mean_fpt is
/// always the usable log-scale estimate.
struct QuadratureMfpt {
    double mean_fpt = 0.0;
    bool effectively_infinite = false;
    double log_mean_fpt = 0.0;
};

/// Mean first-passage time to x_harm from x_start, reflecting at 0, by the
/// double-integral representation
///   T(x) = 2 int_x^{x_harm} psi(y)^{-1} int_0^y psi(z)/sigma^2(z) dz dy,
///   psi(y) = exp(2 int_0^y mu/sigma^2 dz),
/// evaluated with nested trapezoidal quadrature carried in the log domain.
QuadratureMfpt mfpt_quadrature(const ModelParams& p, const FirstPassageSpec& spec,
                               int n_nodes);

struct FptResult {
    std::optional<double> mean_fpt;  ///< over uncensored hits; nullopt if none
    long n_samples = 0;
    long n_censored = 0;
    double std_error = 0.0;

    double censored_fraction() const {
        return n_samples > 0 ? static_cast<double>(n_censored) / n_samples : 0.0;
    }
};

/// Empirical MFPT: cfg.n_traj trajectories from spec.x_start with absorption
/// on the first raw step reaching x >= x_harm (hit time (k+1) dt, no
/// interpolation) and reflection at 0; censored at spec.t_max. Trajectory i
/// uses seed cfg.seed + i; results are independent of the thread count.
FptResult mfpt_monte_carlo(const ModelParams& p, const FirstPassageSpec& spec,
                           const SimConfig& cfg, int n_threads = 0);

/// JSON record with mean_fpt, std_error, n_samples, n_censored, method and a
/// parameter echo. method is "quadrature" or "monte_carlo".
std::string mfpt_json_record(const QuadratureMfpt& q, const ModelParams& p,
                             const FirstPassageSpec& spec);
std::string mfpt_json_record(const FptResult& r, const ModelParams& p,
                             const FirstPassageSpec& spec);

}  // namespace sevdyn
