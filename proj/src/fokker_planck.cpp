#include "sevdyn/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "sevdyn/errors.hpp"
#include "sevdyn/io.hpp"

namespace sevdyn {

void DensityGrid::validate() const {
    if (n_cells < 2 || static_cast<int>(mass.size()) != n_cells) {
        throw ValidationError("density grid: n_cells and mass size mismatch");
    }
    double total = 0.0;
    for (double m : mass) {
        if (!(m >= 0.0)) throw ValidationError("density grid: negative cell mass");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw ValidationError("density grid: total mass " + format_g17(total) + " not 1 within 1e-9");
    }
}

DensityGrid DensityGrid::uniform(int n_cells) {
    DensityGrid g;
    g.n_cells = n_cells;
    g.mass.assign(n_cells, 1.0 / n_cells);
    return g;
}

DensityGrid DensityGrid::point_mass(int n_cells, double x0) {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw ValidationError("point_mass: x0 must lie in [0,1]");
    DensityGrid g;
    g.n_cells = n_cells;
    g.mass.assign(n_cells, 0.0);
    int i = std::min(n_cells - 1, static_cast<int>(x0 * n_cells));
    g.mass[i] = 1.0;
    return g;
}

double DensityGrid::mean() const {
    double s = 0.0;
    for (int i = 0; i < n_cells; ++i) s += center(i) * mass[i];
    return s;
}

double DensityGrid::variance() const {
    const double m = mean();
    double s = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        const double d = center(i) - m;
        s += d * d * mass[i];
    }
    return s;
}

std::vector<double> log_stationary_unnormalized(const ModelParams& p, int n_cells) {
    const double h = 1.0 / n_cells;
    std::vector<double> logd(n_cells);
    // g = 2 mu / sigma^2 integrated by cumulative trapezoid on cell centers.
    double acc = 0.0;
    double g_prev = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        const double x = (i + 0.5) * h;
        const double s2 = diffusion(p, x) * diffusion(p, x);
        const double g = 2.0 * drift(p, x) / s2;
        if (i > 0) acc += 0.5 * (g_prev + g) * h;
        g_prev = g;
        logd[i] = acc - std::log(s2);
    }
    const double top = *std::max_element(logd.begin(), logd.end());
    for (double& v : logd) v -= top;
    return logd;
}

Tridiag GeneratorTridiag::matrix() const {
    Tridiag m;
    m.lower = up_rate;    // A(i+1, i) = up_rate[i]
    m.upper = down_rate;  // A(i, i+1) = down_rate[i]
    m.diag.assign(n_cells, 0.0);
    for (int i = 0; i < n_cells; ++i) {
        double d = 0.0;
        if (i > 0) d += down_rate[i - 1];
        if (i < n_cells - 1) d += up_rate[i];
        m.diag[i] = -d;
    }
    return m;
}

GeneratorTridiag assemble_generator(const ModelParams& p, int n_cells) {
    p.validate();
    if (n_cells < 2) throw ValidationError("assemble_generator: n_cells must be >= 2");
    GeneratorTridiag gen;
    gen.n_cells = n_cells;
    gen.h = 1.0 / n_cells;
    gen.log_stationary = log_stationary_unnormalized(p, n_cells);
    gen.up_rate.resize(n_cells - 1);
    gen.down_rate.resize(n_cells - 1);
    const double h = gen.h;
    for (int f = 0; f < n_cells - 1; ++f) {
        const double xf = (f + 1) * h;  // face between cells f and f+1
        const double D = 0.5 * diffusion(p, xf) * diffusion(p, xf);
        // Exponential fitting: w is the log stationary jump across the face,
        // so the detailed-balance ratio up/down = e^w reproduces it exactly.
        const double w = gen.log_stationary[f + 1] - gen.log_stationary[f];
        gen.up_rate[f] = D / (h * h) * bernoulli_ratio(-w);
        gen.down_rate[f] = D / (h * h) * bernoulli_ratio(w);
    }
    return gen;
}

DensityGrid evolve_density(const ModelParams& p, const DensityGrid& init,
                           double dt, long n_steps) {
    init.validate();
    if (!(dt > 0.0)) throw ValidationError("evolve_density: dt must be positive");
    if (n_steps < 1) throw ValidationError("evolve_density: n_steps must be >= 1");

    const GeneratorTridiag gen = assemble_generator(p, init.n_cells);
    const int n = init.n_cells;

    // (I - dt A) m' = m. The system is an M-matrix with unit column sums:
    // the solve conserves total mass to round-off and cannot produce
    // negative masses from a nonnegative right-hand side.
    Tridiag sys;
    sys.lower.resize(n - 1);
    sys.upper.resize(n - 1);
    sys.diag.resize(n);
    for (int f = 0; f < n - 1; ++f) {
        sys.lower[f] = -dt * gen.up_rate[f];
        sys.upper[f] = -dt * gen.down_rate[f];
    }
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        if (i > 0) d += gen.down_rate[i - 1];
        if (i < n - 1) d += gen.up_rate[i];
        sys.diag[i] = 1.0 + dt * d;
    }

    DensityGrid out = init;
    for (long s = 0; s < n_steps; ++s) {
        out.mass = solve_tridiag(sys, out.mass);
    }
    out.time = init.time + static_cast<double>(n_steps) * dt;
    out.validate();
    return out;
}

StationaryDensity stationary_density(const ModelParams& p, int n_cells) {
    p.validate();
    if (n_cells < 16) throw ValidationError("stationary_density: n_cells must be >= 16");
    StationaryDensity out;
    out.log_unnormalized = log_stationary_unnormalized(p, n_cells);
    out.grid.n_cells = n_cells;
    out.grid.time = std::numeric_limits<double>::infinity();
    out.grid.mass.resize(n_cells);
    const double h = 1.0 / n_cells;
    double z = 0.0;
    for (int i = 0; i < n_cells; ++i) {
        out.grid.mass[i] = std::exp(out.log_unnormalized[i]);
        z += out.grid.mass[i] * h;
    }
    out.normalization_constant = z;
    const double total = z / h;
    for (double& m : out.grid.mass) m /= total;
    return out;
}

namespace {

// Prominence of the peak at index i: walk each side until strictly higher
// terrain (or the boundary), take that side's minimum; the prominence is the
// drop to the higher of the side minima. A side with no cells (boundary
// peak) does not participate.
double peak_prominence(const std::vector<double>& v, int i) {
    const double peak = v[i];
    bool has_side = false;
    double ref = -std::numeric_limits<double>::infinity();
    if (i > 0) {
        double side_min = peak;
        for (int j = i - 1; j >= 0 && v[j] <= peak; --j) side_min = std::min(side_min, v[j]);
        ref = std::max(ref, side_min);
        has_side = true;
    }
    if (i + 1 < static_cast<int>(v.size())) {
        double side_min = peak;
        for (int j = i + 1; j < static_cast<int>(v.size()) && v[j] <= peak; ++j) {
            side_min = std::min(side_min, v[j]);
        }
        ref = std::max(ref, side_min);
        has_side = true;
    }
    return has_side ? peak - ref : peak;
}

}  // namespace

ModeReport detect_modes(const DensityGrid& grid, double min_prominence) {
    grid.validate();
    if (!(min_prominence > 0.0)) {
        throw ValidationError("detect_modes: min_prominence must be positive");
    }
    const int n = grid.n_cells;
    std::vector<double> dens(n);
    for (int i = 0; i < n; ++i) dens[i] = grid.mass[i] / grid.cell_width();
    const double global_max = *std::max_element(dens.begin(), dens.end());

    // Scan maximal runs of equal value; a run strictly above every existing
    // flank is one peak (a symmetric mode can straddle two equal cells, and
    // boundary cells count as candidates). The all-flat sequence has no
    // lower flank and therefore no mode.
    ModeReport report;
    for (int a = 0; a < n;) {
        int b = a;
        while (b + 1 < n && dens[b + 1] == dens[a]) ++b;
        const bool left_ok = (a == 0) || dens[a - 1] < dens[a];
        const bool right_ok = (b == n - 1) || dens[b + 1] < dens[a];
        const bool has_flank = (a > 0) || (b < n - 1);
        if (left_ok && right_ok && has_flank &&
            peak_prominence(dens, a) > min_prominence * global_max) {
            report.mode_locations.push_back(0.5 * (grid.center(a) + grid.center(b)));
            report.mode_masses.push_back(dens[a]);
        }
        a = b + 1;
    }
    report.is_bimodal = report.mode_locations.size() >= 2;
    return report;
}

ModeReport detect_modes(const StationaryDensity& d, double min_prominence) {
    return detect_modes(d.grid, min_prominence);
}

void write_density_csv(const DensityGrid& grid, std::ostream& os) {
    os << "x,p\n";
    for (int i = 0; i < grid.n_cells; ++i) {
        os << format_g17(grid.center(i)) << ','
           << format_g17(grid.mass[i] / grid.cell_width()) << '\n';
    }
}

void write_stationary_csv(const StationaryDensity& d, const ModelParams& p,
                          std::ostream& os) {
    os << "# alpha=" << format_g17(p.alpha) << " beta=" << format_g17(p.beta)
       << " gamma=" << format_g17(p.gamma) << " sigma0=" << format_g17(p.sigma0)
       << " sigma1=" << format_g17(p.sigma1)
       << " n_cells=" << d.grid.n_cells
       << " normalization=" << format_g17(d.normalization_constant) << '\n';
    write_density_csv(d.grid, os);
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ValidationError("l1_distance: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

std::vector<double> coarsen_masses(const std::vector<double>& mass, int n_bins) {
    const int n = static_cast<int>(mass.size());
    if (n_bins < 1 || n % n_bins != 0) {
        throw ValidationError("coarsen_masses: n_bins must divide the cell count");
    }
    const int per = n / n_bins;
    std::vector<double> out(n_bins, 0.0);
    for (int i = 0; i < n; ++i) out[i / per] += mass[i];
    return out;
}

}  // namespace sevdyn
