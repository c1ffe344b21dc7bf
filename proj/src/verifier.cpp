#include "sevdyn/verifier.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "sevdyn/errors.hpp"
#include "sevdyn/first_passage.hpp"
#include "sevdyn/fokker_planck.hpp"
#include "sevdyn/version.hpp"

namespace sevdyn {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::kAlignedSubcritical: return "ALIGNED_SUBCRITICAL";
        case Verdict::kRunawaySupercritical: return "RUNAWAY_SUPERCRITICAL";
        case Verdict::kInconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

namespace {

constexpr int kCertGridCells = 2000;
constexpr int kCertQuadNodes = 1024;
constexpr int kDriftSamples = 512;

/// Pass iff some stable (or marginally stable) root r < x_harm exists with
/// mu < 0 sampled across (r, x_harm).
bool drift_sign_check(const ModelParams& p, double x_harm, double* root_out) {
    *root_out = std::numeric_limits<double>::quiet_NaN();
    const FixedPointSet fps = find_fixed_points(p, 1e-10);
    if (fps.drift_identically_zero) return false;
    double root = -1.0;
    for (const FixedPoint& fp : fps.roots) {
        if (fp.x >= x_harm) continue;
        if (fp.stability == Stability::kStable || fp.stability == Stability::kMarginalStable) {
            root = std::max(root, fp.x);
        }
    }
    if (root < 0.0) return false;
    *root_out = root;
    for (int j = 0; j < kDriftSamples; ++j) {
        const double x = root + (j + 0.5) / kDriftSamples * (x_harm - root);
        if (!(drift(p, x) < 0.0)) return false;
    }
    return true;
}

}  // namespace

Certificate certify(const ModelParams& p, double x_harm, double x_start, double horizon) {
    p.validate();
    if (!(x_harm > 0.0 && x_harm < 1.0)) throw ValidationError("certify: x_harm must lie in (0,1)");
    if (!(x_start >= 0.0 && x_start < x_harm)) {
        throw ValidationError("certify: x_start must satisfy 0 <= x_start < x_harm");
    }
    if (!(horizon > 0.0)) throw ValidationError("certify: horizon must be positive");

    Certificate cert;
    cert.params = p;
    cert.x_harm = x_harm;
    cert.x_start = x_start;
    cert.horizon = horizon;
    cert.regime = classify_regime(p);
    cert.mode_location = std::numeric_limits<double>::quiet_NaN();

    bool had_error = false;
    try {
        cert.drift_sign_pass = drift_sign_check(p, x_harm, &cert.drift_root);
    } catch (const std::exception& ex) {
        had_error = true;
        cert.diagnostics += std::string("drift_sign: ") + ex.what() + "; ";
    }
    try {
        const StationaryDensity sd = stationary_density(p, kCertGridCells);
        const ModeReport modes = detect_modes(sd);
        cert.n_modes = static_cast<int>(modes.mode_locations.size());
        if (cert.n_modes > 0) cert.mode_location = modes.mode_locations.front();
        cert.unimodality_pass = cert.n_modes == 1 && modes.mode_locations.front() < x_harm;
    } catch (const std::exception& ex) {
        had_error = true;
        cert.diagnostics += std::string("unimodality: ") + ex.what() + "; ";
    }
    bool mfpt_finite_below_horizon = false;
    try {
        FirstPassageSpec spec;
        spec.x_harm = x_harm;
        spec.x_start = x_start;
        spec.t_max = horizon;
        const QuadratureMfpt q = mfpt_quadrature(p, spec, kCertQuadNodes);
        cert.mfpt = q.mean_fpt;
        cert.mfpt_infinite = q.effectively_infinite;
        cert.mfpt_pass = q.effectively_infinite || q.mean_fpt >= horizon;
        mfpt_finite_below_horizon = !q.effectively_infinite && q.mean_fpt < horizon;
    } catch (const std::exception& ex) {
        had_error = true;
        cert.diagnostics += std::string("mfpt: ") + ex.what() + "; ";
    }

    if (had_error) {
        cert.verdict = Verdict::kInconclusive;
    } else if (cert.drift_sign_pass && cert.unimodality_pass && cert.mfpt_pass) {
        cert.verdict = Verdict::kAlignedSubcritical;
    } else if (mfpt_finite_below_horizon) {
        cert.verdict = Verdict::kRunawaySupercritical;
    } else {
        cert.verdict = Verdict::kInconclusive;
    }
    return cert;
}

std::string certificate_json(const Certificate& c, bool include_timestamp) {
    nlohmann::json j{
        {"verdict", to_string(c.verdict)},
        {"regime", to_string(c.regime)},
        {"checks",
         {{"drift_sign", {{"pass", c.drift_sign_pass}, {"stable_root", c.drift_root}}},
          {"unimodality",
           {{"pass", c.unimodality_pass},
            {"n_modes", c.n_modes},
            {"mode_location", c.mode_location}}},
          {"mfpt",
           {{"pass", c.mfpt_pass},
            {"mean_fpt", c.mfpt_infinite ? nlohmann::json("inf") : nlohmann::json(c.mfpt)},
            {"effectively_infinite", c.mfpt_infinite},
            {"horizon", c.horizon}}}}},
        {"inputs",
         {{"alpha", c.params.alpha},
          {"beta", c.params.beta},
          {"gamma", c.params.gamma},
          {"sigma0", c.params.sigma0},
          {"sigma1", c.params.sigma1},
          {"x_harm", c.x_harm},
          {"x_start", c.x_start},
          {"horizon", c.horizon}}},
        {"diagnostics", c.diagnostics},
        {"toolkit_version", kVersion},
    };
    if (include_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                                  now.time_since_epoch()).count();
    }
    return j.dump();
}

}  // namespace sevdyn
