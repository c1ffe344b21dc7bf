// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sevdyn/calibration.hpp"
#include "sevdyn/criticality.hpp"
#include "sevdyn/first_passage.hpp"
#include "sevdyn/fokker_planck.hpp"
#include "sevdyn/model.hpp"
#include "sevdyn/sde.hpp"
#include "sevdyn/verifier.hpp"

using namespace sevdyn;

namespace {

const ModelParams kPanelA{0.3, 0.5, 0.01, 0.05, 0.1};
const ModelParams kPanelB{0.45, 0.45, 0.01, 0.05, 0.1};
const ModelParams kPanelC{0.6, 0.4, 0.01, 0.05, 0.1};
const ModelParams kZeroDrift{0.0, 0.0, 0.0, 0.05, 0.0};

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// --- criterion 1: uniform stationary law ---------------------------------
void criterion_uniform_stationary() {
    const int n = 2000;
    const StationaryDensity ss = stationary_density(kZeroDrift, n);
    double linf_closed = 0.0;
    for (double m : ss.grid.mass) {
        linf_closed = std::max(linf_closed, std::abs(m * n - 1.0));
    }
    const DensityGrid evolved =
        evolve_density(kZeroDrift, DensityGrid::point_mass(n, 0.5), 0.1, 10000);
    double linf_evolved = 0.0;
    for (double m : evolved.mass) {
        linf_evolved = std::max(linf_evolved, std::abs(m * n - 1.0));
    }
    report(1, "uniform stationary law", linf_closed <= 1e-9 && linf_evolved <= 1e-3,
           fmt("closed-form Linf=%.2e (tol 1e-9), evolved Linf=%.2e (tol 1e-3)",
               linf_closed, linf_evolved));
}

// --- criterion 2: zero-drift MFPT ----------------------------------------
void criterion_zero_drift_mfpt() {
    FirstPassageSpec spec;
    spec.x_harm = 0.7;
    spec.x_start = 0.0;
    spec.t_max = 1e4;
    const double closed_form = 196.0;
    const QuadratureMfpt q = mfpt_quadrature(kZeroDrift, spec, 1024);
    SimConfig cfg;
    cfg.dt = 0.005;
    cfg.n_traj = 10000;
    cfg.seed = 20240917;
    const FptResult mc = mfpt_monte_carlo(kZeroDrift, spec, cfg);
    const double quad_err = std::abs(q.mean_fpt - closed_form) / closed_form;
    const double mc_err = mc.mean_fpt ? std::abs(*mc.mean_fpt - closed_form) / closed_form : 1.0;
    report(2, "zero-drift MFPT (x_harm^2 - x^2)/sigma0^2",
           quad_err <= 0.005 && mc_err <= 0.05 && mc.n_censored == 0,
           fmt("quadrature %.4f (err %.3f%%), MC %.2f (err %.2f%%, censored %ld)",
               q.mean_fpt, 100 * quad_err, mc.mean_fpt.value_or(-1.0), 100 * mc_err,
               mc.n_censored));
}

// --- criterion 3: mass conservation --------------------------------------
void criterion_mass_conservation() {
    bool pass = true;
    std::string detail;
    for (const auto& [name, p] : {std::pair{"A", kPanelA}, {"B", kPanelB}, {"C", kPanelC}}) {
        const DensityGrid out =
            evolve_density(p, DensityGrid::point_mass(2000, 0.1), 0.1, 10000);
        double total = 0.0;
        for (double m : out.mass) total += m;
        const double defect = std::abs(total - 1.0);
        pass = pass && defect <= 1e-9;
        detail += fmt("%s:%.2e ", name, defect);
    }
    report(3, "mass conservation after 1e4 FP steps", pass, detail + "(tol 1e-9)");
}

// --- criterion 4: SDE/PDE agreement --------------------------------------
void criterion_sde_pde_agreement() {
    bool pass = true;
    std::string detail;
    for (const auto& [name, p] : {std::pair{"A", kPanelA}, {"B", kPanelB}, {"C", kPanelC}}) {
        SimConfig cfg;
        cfg.dt = 0.01;
        cfg.n_steps = 15000;    // t = 150
        cfg.record_stride = 250;  // a sample every 2.5 time units
        cfg.x0 = 0.1;
        cfg.seed = 555;
        cfg.n_traj = 10000;
        const Ensemble e = simulate_ensemble(p, cfg);
        const int n_bins = 50;
        std::vector<double> hist(n_bins, 0.0);
        long n_pooled = 0;
        for (const Trajectory& t : e.trajectories) {
            for (std::size_t k = 0; k < t.values.size(); ++k) {
                if (t.times[k] < 50.0) continue;  // burn-in discarded
                const int b = std::min(n_bins - 1, static_cast<int>(t.values[k] * n_bins));
                hist[b] += 1.0;
                ++n_pooled;
            }
        }
        for (double& hm : hist) hm /= static_cast<double>(n_pooled);
        const StationaryDensity ss = stationary_density(p, 2000);
        const std::vector<double> ref = coarsen_masses(ss.grid.mass, n_bins);
        const double l1 = l1_distance(hist, ref);
        pass = pass && l1 <= 0.05;
        detail += fmt("%s:L1=%.4f ", name, l1);
    }
    report(4, "pooled SDE histogram vs closed-form density", pass, detail + "(tol 0.05)");
}

// --- criterion 5: panel regimes and thresholds ----------------------------
void criterion_regimes_and_roots() {
    struct Row {
        const ModelParams* p;
        Regime regime;
        double root;
        double dashed;
    };
    const Row rows[] = {
        {&kPanelA, Regime::kSubcritical, 0.405803, 0.4},
        {&kPanelB, Regime::kNearCritical, 0.521314, 0.5},
        {&kPanelC, Regime::kSupercritical, 0.616228, 0.6},
    };
    bool pass = true;
    std::string detail;
    for (const Row& r : rows) {
        const Regime got = classify_regime(*r.p);
        double root = -1.0;
        const bool has_root = stable_drift_root(*r.p, &root);
        const bool ok = got == r.regime && has_root && std::abs(root - r.root) <= 1e-3 &&
                        std::abs(root - r.dashed) <= 0.03;
        pass = pass && ok;
        detail += fmt("%s/%.4f ", to_string(got).c_str(), root);
    }
    report(5, "regime labels and drift-root thresholds", pass, detail);
}

// --- criterion 6: panel-C stationary mode ---------------------------------
void criterion_panel_c_mode() {
    const StationaryDensity ss = stationary_density(kPanelC, 2000);
    const ModeReport m = detect_modes(ss);
    const bool pass = m.mode_locations.size() == 1 &&
                      std::abs(m.mode_locations[0] - 0.598) <= 1.0 / 2000;
    report(6, "panel-C stationary mode at 0.598",
           pass,
           m.mode_locations.empty() ? "no mode found"
                                    : fmt("mode=%.5f (tol one cell = 5e-4)", m.mode_locations[0]));
}

// --- criterion 7: spectral-gap analytic check -----------------------------
void criterion_spectral_gap() {
    const RelaxationResult r = relaxation_time(kZeroDrift, 2000);
    const double expected = 1.0 / (0.5 * 0.05 * 0.05 * std::numbers::pi * std::numbers::pi);
    const double err = std::abs(r.tau - expected) / expected;
    report(7, "zero-drift relaxation time 1/(D pi^2)", err <= 0.01,
           fmt("tau=%.4f expected=%.4f (err %.4f%%)", r.tau, expected, 100 * err));
}

// --- criterion 8: critical slowing down -----------------------------------
void criterion_critical_slowing_down() {
    // tau along beta = 0.45 over the full panel alpha range
    std::vector<double> alphas, taus;
    for (double a = 0.30; a <= 0.6001; a += 0.025) {
        alphas.push_back(a);
        taus.push_back(relaxation_time(ModelParams{a, 0.45, 0.01, 0.05, 0.1}, 1000).tau);
    }
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < taus.size(); ++i) {
        if (taus[i] > taus[argmax]) argmax = i;
    }
    const bool peak_near_critical = std::abs(alphas[argmax] - 0.45) <= 0.05;

    bool recovery = true;
    double worst = 0.0;
    const std::vector<double> deltas{0.01, 0.02, 0.04, 0.08, 0.16};
    for (double target = 0.25; target <= 3.0; target += 0.25) {
        std::vector<double> synth;
        for (double d : deltas) synth.push_back(1.7 * std::pow(d, -target));
        const double got = fit_scaling_exponent(deltas, synth).exponent;
        worst = std::max(worst, std::abs(got - target));
        recovery = recovery && std::abs(got - target) <= 1e-6;
    }

    std::string table;
    for (std::size_t i = 0; i < alphas.size(); ++i) table += fmt("%.3f:%.2f ", alphas[i], taus[i]);
    report(8, "critical slowing down along beta=0.45", peak_near_critical && recovery,
           fmt("tau argmax at alpha=%.3f (need |alpha-0.45|<=0.05); exact power-law "
               "recovery worst err %.1e (tol 1e-6); tau(alpha): %s",
               alphas[argmax], worst, table.c_str()));
}

// --- criterion 9: calibration recovery ------------------------------------
void criterion_calibration_recovery() {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 2500;
    cfg.x0 = 0.05;
    cfg.seed = 2024;
    cfg.n_traj = 400;  // 1e6 raw increments
    const Ensemble e = simulate_ensemble(kPanelC, cfg);
    const IncrementDataset data = filter_interior(increments_from_ensemble(e), kPanelC);
    const FitResult r = fit_params(data);
    const bool pass = r.converged &&
                      std::abs(r.params.alpha - 0.6) <= 0.15 * 0.6 &&
                      std::abs(r.params.beta - 0.4) <= 0.15 * 0.4 &&
                      std::abs(r.params.gamma - 0.01) <= 0.01 &&
                      std::abs(r.params.sigma0 - 0.05) <= 0.15 * 0.05 &&
                      std::abs(r.params.sigma1 - 0.1) <= 0.15 * 0.1;
    report(9, "panel-C parameter recovery from 1e6 increments", pass,
           fmt("n=%zu fitted a=%.4f b=%.4f g=%.4f s0=%.5f s1=%.5f (true 0.6/0.4/0.01/0.05/0.1)",
               data.size(), r.params.alpha, r.params.beta, r.params.gamma, r.params.sigma0,
               r.params.sigma1));
}

// --- criterion 10: certificate soundness -----------------------------------
void criterion_certificate_soundness() {
    struct Case {
        ModelParams p;
        double x_harm, x_start, horizon, dt;
    };
    const Case cases[] = {
        {{0.0, 1.0, 0.0, 0.02, 0.0}, 0.9, 0.0, 1000.0, 0.02},
        {kPanelA, 0.7, 0.1, 5.0, 0.01},
        {{0.2, 0.6, 0.01, 0.05, 0.1}, 0.8, 0.1, 20.0, 0.01},
    };
    bool pass = true;
    std::string detail;
    for (const Case& c : cases) {
        const Certificate cert = certify(c.p, c.x_harm, c.x_start, c.horizon);
        if (cert.verdict != Verdict::kAlignedSubcritical) {
            pass = false;
            detail += fmt("[verdict %s] ", to_string(cert.verdict).c_str());
            continue;
        }
        // crossing fraction over the certified horizon
        FirstPassageSpec spec;
        spec.x_harm = c.x_harm;
        spec.x_start = c.x_start;
        spec.t_max = c.horizon;
        SimConfig cfg;
        cfg.dt = c.dt;
        cfg.n_traj = 10000;
        cfg.seed = 4242;
        const FptResult mc = mfpt_monte_carlo(c.p, spec, cfg);
        const double crossing = 1.0 - mc.censored_fraction();
        pass = pass && crossing < 0.05;
        detail += fmt("cross=%.4f ", crossing);
    }
    report(10, "ALIGNED certificates show < 5% crossing", pass, detail + "(tol 0.05)");
}

// --- criterion 11: MFPT monotonicity ---------------------------------------
void criterion_mfpt_monotonicity() {
    const double alphas[] = {0.2, 0.3, 0.4, 0.5, 0.6};
    const double betas[] = {0.2, 0.3, 0.4, 0.5, 0.6};
    const double gammas[] = {0.005, 0.02};
    double t[5][5][2];
    FirstPassageSpec spec;
    spec.x_harm = 0.7;
    spec.x_start = 0.1;
    spec.t_max = 1.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 2; ++k) {
                const ModelParams p{alphas[i], betas[j], gammas[k], 0.05, 0.1};
                t[i][j][k] = mfpt_quadrature(p, spec, 512).mean_fpt;
            }
    long violations = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 2; ++k) {
                if (i > 0 && !(t[i][j][k] <= t[i - 1][j][k])) ++violations;
                if (j > 0 && !(t[i][j][k] >= t[i][j - 1][k])) ++violations;
                if (k > 0 && !(t[i][j][k] <= t[i][j][k - 1])) ++violations;
            }
    report(11, "MFPT monotone in alpha, beta, gamma over 5x5x2 grid", violations == 0,
           fmt("%ld violations", violations));
}

// --- criterion 12: determinism ---------------------------------------------
void criterion_determinism() {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 2000;
    cfg.x0 = 0.1;
    cfg.seed = 99;
    cfg.n_traj = 64;
    const Ensemble e1 = simulate_ensemble(kPanelC, cfg, 1);
    const Ensemble e2 = simulate_ensemble(kPanelC, cfg, 2);
    bool same_values = true;
    for (std::size_t i = 0; i < e1.trajectories.size(); ++i) {
        same_values = same_values && e1.trajectories[i].values == e2.trajectories[i].values;
    }
    std::ostringstream csv1, csv2;
    write_ensemble_csv(e1, csv1);
    write_ensemble_csv(e2, csv2);

    FirstPassageSpec spec;
    spec.x_harm = 0.7;
    spec.x_start = 0.1;
    spec.t_max = 100.0;
    const FptResult f1 = mfpt_monte_carlo(kPanelC, spec, cfg, 1);
    const FptResult f2 = mfpt_monte_carlo(kPanelC, spec, cfg, 2);
    const bool same_fpt = f1.mean_fpt == f2.mean_fpt && f1.std_error == f2.std_error;

    const PhaseDiagram p1 = phase_diagram({0.3, 0.6}, {0.4, 0.5}, 0.01, 0.05, 0.1, 256, 1);
    const PhaseDiagram p2 = phase_diagram({0.3, 0.6}, {0.4, 0.5}, 0.01, 0.05, 0.1, 256, 2);
    std::ostringstream ph1, ph2;
    write_phase_csv(p1, ph1);
    write_phase_csv(p2, ph2);

    const bool pass = same_values && csv1.str() == csv2.str() && same_fpt &&
                      ph1.str() == ph2.str();
    report(12, "byte-identical outputs across thread counts", pass,
           fmt("ensemble=%d csv=%d mfpt=%d phase=%d", same_values, csv1.str() == csv2.str(),
               same_fpt, ph1.str() == ph2.str()));
}

}  // namespace

int main() {
    std::printf("severity-dynamics acceptance suite\n");
    criterion_uniform_stationary();
    criterion_zero_drift_mfpt();
    criterion_mass_conservation();
    criterion_sde_pde_agreement();
    criterion_regimes_and_roots();
    criterion_panel_c_mode();
    criterion_spectral_gap();
    criterion_critical_slowing_down();
    criterion_calibration_recovery();
    criterion_certificate_soundness();
    criterion_mfpt_monotonicity();
    criterion_determinism();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criterion(s) failed\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
