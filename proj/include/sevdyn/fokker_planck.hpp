#pragma once

#include <iosfwd>
#include <vector>

#include "sevdyn/model.hpp"
#include "sevdyn/numeric.hpp"

namespace sevdyn {

/// Probability masses on a uniform cell-centered grid over [0,1].
/// mass[i] is the probability in cell i (not a density value);
/// density = mass / cell_width.
struct DensityGrid {
    int n_cells = 0;
    double time = 0.0;
    std::vector<double> mass;

    double cell_width() const { return 1.0 / n_cells; }
    double center(int i) const { return (i + 0.5) / n_cells; }

    /// Throws ValidationError unless masses are nonnegative and sum to
    /// 1 within 1e-9.
    void validate() const;

    static DensityGrid uniform(int n_cells);
    /// All mass in the cell containing x0.
    static DensityGrid point_mass(int n_cells, double x0);

    /// Mean and variance of the cell-center distribution.
    double mean() const;
    double variance() const;
};

/// Closed-form stationary density, P_ss(x) proportional to
/// (1/sigma^2(x)) exp(2 int_0^x mu/sigma^2 dz), discretized on cell centers.
struct StationaryDensity {
    DensityGrid grid;  ///< time is +inf
    /// Z with density(x_i) = exp(log_unnormalized[i]) / Z; the logs are
    /// stored max-shifted so exponentiation cannot overflow.
    double normalization_constant = 0.0;
    std::vector<double> log_unnormalized;
};

struct ModeReport {
    std::vector<double> mode_locations;  ///< ascending cell centers
    std::vector<double> mode_masses;     ///< density value at each peak
    bool is_bimodal = false;             ///< true iff >= 2 modes
};

/// Discrete zero-flux generator, dm/dt = A m, in flux-rate form.
/// Face f sits between cells f and f+1 (f = 0 .. n-2); its flux is
/// up_rate[f] * m[f] - down_rate[f] * m[f+1]. Boundary faces carry no flux.
struct GeneratorTridiag {
    int n_cells = 0;
    double h = 0.0;
    std::vector<double> up_rate;    ///< size n-1
    std::vector<double> down_rate;  ///< size n-1
    /// Max-shifted log of the discrete stationary masses (the generator's
    /// exact null vector, equal to the closed-form quadrature density).
    std::vector<double> log_stationary;

    /// Dense tridiagonal form of A.
    Tridiag matrix() const;
};

/// Unnormalized log stationary density on cell centers: cumulative trapezoid
/// of 2 mu / sigma^2 plus the -log sigma^2 prefactor, max-shifted.
std::vector<double> log_stationary_unnormalized(const ModelParams& p, int n_cells);

/// Conservative exponentially-fitted finite-volume discretization of the
/// drift-diffusion flux with zero-flux boundaries. Face weights are the
/// per-cell increments of the quadrature log density, which makes the
/// closed-form stationary state an exact discrete fixed point.
GeneratorTridiag assemble_generator(const ModelParams& p, int n_cells);

/// Advances the density by n_steps implicit (backward Euler) steps of size dt.
/// Mass is conserved to round-off and cells stay nonnegative for any dt.
DensityGrid evolve_density(const ModelParams& p, const DensityGrid& init,
                           double dt, long n_steps);

/// Stationary density via the closed form; requires n_cells >= 16.
StationaryDensity stationary_density(const ModelParams& p, int n_cells);

inline constexpr double kDefaultMinProminence = 0.05;

/// Strict local maxima of the cell-density sequence whose prominence exceeds
/// min_prominence times the global maximum. Boundary cells count as
/// candidate maxima.
ModeReport detect_modes(const DensityGrid& grid,
                        double min_prominence = kDefaultMinProminence);
ModeReport detect_modes(const StationaryDensity& d,
                        double min_prominence = kDefaultMinProminence);

/// CSV export, header `x,p` (density values), 17 significant digits.
void write_density_csv(const DensityGrid& grid, std::ostream& os);

/// Same, preceded by a comment metadata line with parameters and the
/// normalization constant.
void write_stationary_csv(const StationaryDensity& d, const ModelParams& p,
                          std::ostream& os);

/// L1 distance between two mass vectors on the same grid size.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Aggregates fine-grid masses into n_bins coarse bins (n_bins divides n_cells).
std::vector<double> coarsen_masses(const std::vector<double>& mass, int n_bins);

}  // namespace sevdyn
