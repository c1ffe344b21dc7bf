#pragma once

#include <string>

#include "sevdyn/model.hpp"

namespace sevdyn {

enum class Verdict { kAlignedSubcritical, kRunawaySupercritical, kInconclusive };

std::string to_string(Verdict v);

/// Machine-readable stability judgment. ALIGNED_SUBCRITICAL only if all three
/// checks pass; RUNAWAY_SUPERCRITICAL only if the MFPT check fails with a
/// finite mean below the horizon; INCONCLUSIVE otherwise.
struct Certificate {
    Regime regime = Regime::kNearCritical;

    bool drift_sign_pass = false;
    double drift_root = 0.0;  ///< NaN when no qualifying root exists

    bool unimodality_pass = false;
    int n_modes = 0;
    double mode_location = 0.0;  ///< NaN when no mode detected

    bool mfpt_pass = false;
    double mfpt = 0.0;  ///< +inf when effectively infinite
    bool mfpt_infinite = false;

    Verdict verdict = Verdict::kInconclusive;

    // inputs echo
    ModelParams params;
    double x_harm = 0.0;
    double x_start = 0.0;
    double horizon = 0.0;

    std::string diagnostics;  ///< sub-module failure details, empty when clean
};

/// Runs the three checks:
///  (a) drift sign: some stable root r < x_harm with mu < 0 on (r, x_harm);
///  (b) stationary unimodality: exactly one mode, located below x_harm;
///  (c) MFPT: quadrature T(x_start) >= horizon.
/// Sub-module errors degrade the verdict to INCONCLUSIVE with diagnostics.
Certificate certify(const ModelParams& p, double x_harm, double x_start, double horizon);

/// Full certificate as JSON, plus toolkit version; the timestamp field is
/// emitted only when include_timestamp is set so golden comparisons can
/// exclude it.
std::string certificate_json(const Certificate& c, bool include_timestamp = true);

}  // namespace sevdyn
