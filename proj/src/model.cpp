#include "sevdyn/model.hpp"

#include <algorithm>
#include <cmath>

#include "sevdyn/errors.hpp"

namespace sevdyn {

void ModelParams::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string("model.") + name + " must be a finite nonnegative real");
        }
    };
    nonneg(alpha, "alpha");
    nonneg(beta, "beta");
    nonneg(gamma, "gamma");
    nonneg(sigma1, "sigma1");
    if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
        throw ValidationError("model.sigma0 must be strictly positive (nondegenerate diffusion on [0,1])");
    }
}

double drift(const ModelParams& p, Severity x) {
    return p.alpha * x * (1.0 - x) - p.beta * x * x + p.gamma;
}

double drift_slope(const ModelParams& p, Severity x) {
    return p.alpha - 2.0 * (p.alpha + p.beta) * x;
}

double diffusion(const ModelParams& p, Severity x) {
    return p.sigma0 + p.sigma1 * x;
}

double potential(const ModelParams& p, Severity x) {
    return -0.5 * p.alpha * x * x + (p.alpha + p.beta) / 3.0 * x * x * x - p.gamma * x;
}

namespace {

Stability classify_root(const ModelParams& p, double r, double tol) {
    const double slope = drift_slope(p, r);
    if (slope < -tol) return Stability::kStable;
    if (slope > tol) return Stability::kUnstable;
    // second-order sign: mu'' = -2(alpha+beta)
    if (p.alpha + p.beta > 0.0) return Stability::kMarginalStable;
    return Stability::kMarginal;
}

}  // namespace

FixedPointSet find_fixed_points(const ModelParams& p, double tol) {
    if (!(tol > 0.0)) throw ValidationError("find_fixed_points: tol must be positive");
    FixedPointSet out;

    const double a = p.alpha + p.beta;
    if (a == 0.0) {
        // alpha = beta = 0: drift is the constant gamma.
        out.drift_identically_zero = (p.gamma == 0.0);
        return out;
    }

    // mu(x) = -a x^2 + alpha x + gamma; roots of a x^2 - alpha x - gamma = 0.
    const double disc = p.alpha * p.alpha + 4.0 * a * p.gamma;
    const double sq = std::sqrt(disc);
    // Stable quadratic evaluation: the large-magnitude root first.
    const double r_hi = (p.alpha + sq) / (2.0 * a);
    const double r_lo = (sq > 0.0) ? -p.gamma / (a * r_hi) : r_hi;

    const double slack = 1e-12;
    for (double r : {r_lo, r_hi}) {
        if (r < -slack || r > 1.0 + slack) continue;
        r = std::clamp(r, 0.0, 1.0);
        // One Newton polish so |mu(r)| <= tol holds comfortably.
        const double s = drift_slope(p, r);
        if (std::abs(s) > tol) r = std::clamp(r - drift(p, r) / s, 0.0, 1.0);
        if (!out.roots.empty() && std::abs(out.roots.back().x - r) <= slack) continue;
        out.roots.push_back({r, classify_root(p, r, tol)});
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const FixedPoint& u, const FixedPoint& v) { return u.x < v.x; });
    return out;
}

bool stable_drift_root(const ModelParams& p, double* root_out) {
    const FixedPointSet fps = find_fixed_points(p, 1e-10);
    for (auto it = fps.roots.rbegin(); it != fps.roots.rend(); ++it) {
        if (it->stability == Stability::kStable || it->stability == Stability::kMarginalStable) {
            if (root_out != nullptr) *root_out = it->x;
            return true;
        }
    }
    return false;
}

double paper_critical_threshold(const ModelParams& p) {
    const double a = p.alpha + p.beta;
    if (a == 0.0) {
        throw ValidationError("paper_critical_threshold undefined: alpha + beta = 0");
    }
    return (p.alpha - p.beta) / a;
}

Regime classify_regime(const ModelParams& p, double eps_crit) {
    if (!(eps_crit > 0.0)) throw ValidationError("classify_regime: eps_crit must be positive");
    const double delta = p.alpha - p.beta;
    if (-delta > eps_crit) return Regime::kSubcritical;
    if (delta > eps_crit) return Regime::kSupercritical;
    return Regime::kNearCritical;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::kSubcritical: return "SUBCRITICAL";
        case Regime::kSupercritical: return "SUPERCRITICAL";
        case Regime::kNearCritical: return "NEAR_CRITICAL";
    }
    return "UNKNOWN";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::kStable: return "stable";
        case Stability::kUnstable: return "unstable";
        case Stability::kMarginalStable: return "marginal_stable";
        case Stability::kMarginal: return "marginal";
    }
    return "unknown";
}

}  // namespace sevdyn
