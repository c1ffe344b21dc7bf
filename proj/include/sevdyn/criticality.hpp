#pragma once

#include <string>
#include <vector>

#include "sevdyn/fokker_planck.hpp"
#include "sevdyn/model.hpp"

namespace sevdyn {

struct RelaxationResult {
    double spectral_gap = 0.0;        ///< |second least-magnitude eigenvalue|
    double tau = 0.0;                 ///< 1 / spectral_gap
    double leading_eigenvalue = 0.0;  ///< the conservation eigenvalue, ~0
    int iterations = 0;               ///< shift-invert iterations used
};

/// Relaxation time as the inverse spectral gap of the zero-flux generator
/// from assemble_generator. The generator is symmetrized by the similarity
/// transform with sqrt of its stationary masses, the known null vector is
/// deflated, and the gap eigenpair is found by shift-invert iteration with a
/// deterministic starting vector. Throws NumericalError on non-convergence.
RelaxationResult relaxation_time(const ModelParams& p, int n_cells);

struct PhaseCell {
    double alpha = 0.0;
    double beta = 0.0;
    Regime regime = Regime::kNearCritical;
    double tau = 0.0;          ///< NaN when the cell's solve failed
    std::string error;         ///< empty on success
};

struct PhaseDiagram {
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
    std::vector<PhaseCell> cells;  ///< row-major: beta index * |alpha| + alpha index

    const PhaseCell& at(std::size_t alpha_idx, std::size_t beta_idx) const {
        return cells[beta_idx * alpha_grid.size() + alpha_idx];
    }
};

/// Regime label and relaxation time over the (alpha, beta) grid. Per-cell
/// solver failures are recorded in the cell instead of aborting the sweep.
PhaseDiagram phase_diagram(const std::vector<double>& alpha_grid,
                           const std::vector<double>& beta_grid,
                           double gamma, double sigma0, double sigma1,
                           int n_cells, int n_threads = 0);

struct ScalingFit {
    double exponent = 0.0;   ///< fitted z*nu product (minus the log-log slope)
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> delta_values;
    std::vector<double> tau_values;
};

/// Ordinary least squares of log tau against log |delta|; exponent = -slope.
/// Requires >= 4 points, nonzero deltas, positive taus, non-degenerate |delta|.
ScalingFit fit_scaling_exponent(const std::vector<double>& deltas,
                                const std::vector<double>& taus);

/// CSV export, header `alpha,beta,regime,tau`.
void write_phase_csv(const PhaseDiagram& d, std::ostream& os);

/// JSON with exponent, intercept, r_squared and the raw points.
std::string scaling_json(const ScalingFit& fit);

}  // namespace sevdyn
