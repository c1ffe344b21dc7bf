#pragma once

#include <string>
#include <vector>

namespace sevdyn {

/// Instantaneous severity level, dimensionless in [0,1].
using Severity = double;

/// The five scalars defining drift and diffusion:
///   mu(x)    = alpha x (1-x) - beta x^2 + gamma
///   sigma(x) = sigma0 + sigma1 x
struct ModelParams {
    double alpha = 0.0;   ///< self-reinforcement rate, >= 0
    double beta = 0.0;    ///< alignment damping rate, >= 0
    double gamma = 0.0;   ///< baseline emergence rate, >= 0
    double sigma0 = 0.0;  ///< baseline noise amplitude, strictly > 0
    double sigma1 = 0.0;  ///< severity-proportional noise amplitude, >= 0

    /// Throws ValidationError naming the offending field. sigma0 must be
    /// strictly positive: the stationary closed form and the MFPT quadrature
    /// divide by sigma^2(x).
    void validate() const;
};

/// mu(x) = alpha x (1-x) - beta x^2 + gamma. Pure, total on [0,1].
double drift(const ModelParams& p, Severity x);

/// d mu / dx = alpha - 2 (alpha+beta) x.
double drift_slope(const ModelParams& p, Severity x);

/// sigma(x) = sigma0 + sigma1 x, strictly positive for valid params.
double diffusion(const ModelParams& p, Severity x);

/// V(x) = -(alpha/2) x^2 + ((alpha+beta)/3) x^3 - gamma x,
/// the antiderivative of -mu with V(0) = 0.
double potential(const ModelParams& p, Severity x);

enum class Stability {
    kStable,          ///< drift slope < -tol
    kUnstable,        ///< drift slope > +tol
    kMarginalStable,  ///< |slope| <= tol, curvature pulls back from above
    kMarginal,        ///< |slope| <= tol, curvature indeterminate
};

struct FixedPoint {
    double x = 0.0;
    Stability stability = Stability::kMarginal;
};

struct FixedPointSet {
    std::vector<FixedPoint> roots;  ///< ascending, each with |mu(root)| <= tol
    /// alpha + beta = 0 and gamma = 0: the drift vanishes identically and
    /// every point of [0,1] is marginal; roots is left empty.
    bool drift_identically_zero = false;
};

/// All real roots of mu(x) = 0 in [0,1] with stability labels, via the
/// closed-form quadratic (alpha+beta) x^2 - alpha x - gamma = 0. Degenerate
/// alpha+beta = 0 means constant drift: empty set for gamma > 0, the
/// whole-interval marginal indicator for gamma = 0.
FixedPointSet find_fixed_points(const ModelParams& p, double tol);

/// Largest root classified stable (or marginally stable), if any.
/// This is the operative threshold used downstream; the dashed thresholds in
/// phase-portrait plots of this family coincide with it.
bool stable_drift_root(const ModelParams& p, double* root_out);

/// (alpha - beta) / (alpha + beta), returned unclipped: it can fall outside
/// [0,1] and generally does not coincide with the drift root. Exposed for
/// reference alongside the drift-root threshold; downstream analysis uses the
/// drift root. Throws ValidationError when alpha + beta = 0.
double paper_critical_threshold(const ModelParams& p);

enum class Regime { kSubcritical, kSupercritical, kNearCritical };

inline constexpr double kDefaultEpsCrit = 0.02;

/// SUBCRITICAL if beta - alpha > eps, SUPERCRITICAL if alpha - beta > eps,
/// NEAR_CRITICAL otherwise. Depends only on alpha - beta and eps_crit.
Regime classify_regime(const ModelParams& p, double eps_crit = kDefaultEpsCrit);

std::string to_string(Regime r);
std::string to_string(Stability s);

}  // namespace sevdyn
