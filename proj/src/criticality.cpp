#include "sevdyn/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "sevdyn/errors.hpp"
#include "sevdyn/io.hpp"
#include "sevdyn/numeric.hpp"

namespace sevdyn {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void axpy(std::vector<double>& y, double c, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

}  // namespace

RelaxationResult relaxation_time(const ModelParams& p, int n_cells) {
    if (n_cells < 128) throw ValidationError("relaxation_time: n_cells must be >= 128");
    const GeneratorTridiag gen = assemble_generator(p, n_cells);
    const int n = n_cells;

    // Similarity transform with sqrt(pi): the generator becomes symmetric
    // tridiagonal with off-diagonals sqrt(up*down); the diagonal is unchanged.
    Tridiag sym;
    sym.diag.resize(n);
    sym.lower.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        if (i > 0) d += gen.down_rate[i - 1];
        if (i < n - 1) d += gen.up_rate[i];
        sym.diag[i] = -d;
    }
    for (int f = 0; f < n - 1; ++f) {
        sym.lower[f] = std::sqrt(gen.up_rate[f] * gen.down_rate[f]);
    }
    sym.upper = sym.lower;

    // Known null vector: sqrt of the stationary masses (max-shifted logs, so
    // tails underflow harmlessly to zero).
    std::vector<double> v0(n);
    for (int i = 0; i < n; ++i) v0[i] = std::exp(0.5 * gen.log_stationary[i]);
    const double v0n = norm(v0);
    for (double& v : v0) v /= v0n;

    RelaxationResult out;
    out.leading_eigenvalue = dot(v0, tridiag_apply(sym, v0));

    // Shift-invert around zero: all eigenvalues are <= 0, so a small positive
    // shift keeps the system definite; deflating v0 steers the iteration to
    // the gap eigenpair.
    double scale = 0.0;
    for (double d : sym.diag) scale = std::max(scale, std::abs(d));
    const double shift = 1e-10 * scale;
    Tridiag shifted = sym;
    for (double& d : shifted.diag) d -= shift;

    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = (i + 0.5) / n - 0.5;  // deterministic start
    axpy(y, -dot(v0, y), v0);
    {
        const double yn = norm(y);
        if (!(yn > 0.0)) throw NumericalError("relaxation_time: degenerate start vector");
        for (double& v : y) v /= yn;
    }

    // The Rayleigh quotient error is quadratic in the eigenpair residual, so
    // a modest residual target already pins lambda far beyond tau's needs.
    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    const int max_iters = 4000;
    int it = 0;
    for (; it < max_iters; ++it) {
        std::vector<double> z = solve_tridiag(shifted, y);
        axpy(z, -dot(v0, z), v0);
        const double zn = norm(z);
        if (!(zn > 0.0) || !std::isfinite(zn)) {
            throw NumericalError("relaxation_time: shift-invert iterate collapsed");
        }
        for (double& v : z) v /= zn;
        y = z;
        std::vector<double> by = tridiag_apply(sym, y);
        lambda = dot(y, by);
        axpy(by, -lambda, y);
        residual = norm(by);
        if (residual <= 1e-6 * std::abs(lambda)) break;
    }
    out.iterations = std::min(it + 1, max_iters);
    if (it >= max_iters) {
        throw NumericalError("relaxation_time: eigen-solver did not converge (residual " +
                             format_g17(residual) + " after " + std::to_string(out.iterations) +
                             " iterations)");
    }
    if (!(lambda < 0.0)) {
        throw NumericalError("relaxation_time: nonpositive spectral gap estimate");
    }
    out.spectral_gap = -lambda;
    out.tau = 1.0 / out.spectral_gap;
    return out;
}

PhaseDiagram phase_diagram(const std::vector<double>& alpha_grid,
                           const std::vector<double>& beta_grid,
                           double gamma, double sigma0, double sigma1,
                           int n_cells, int n_threads) {
    if (alpha_grid.empty() || beta_grid.empty()) {
        throw ValidationError("phase_diagram: grids must be nonempty");
    }
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()) ||
        !std::is_sorted(beta_grid.begin(), beta_grid.end())) {
        throw ValidationError("phase_diagram: grids must be ascending");
    }
    PhaseDiagram d;
    d.alpha_grid = alpha_grid;
    d.beta_grid = beta_grid;
    d.cells.resize(alpha_grid.size() * beta_grid.size());

    parallel_for_blocks(d.cells.size(), n_threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t idx = b; idx < e; ++idx) {
            const std::size_t bi = idx / alpha_grid.size();
            const std::size_t ai = idx % alpha_grid.size();
            PhaseCell& cell = d.cells[idx];
            cell.alpha = alpha_grid[ai];
            cell.beta = beta_grid[bi];
            ModelParams p{cell.alpha, cell.beta, gamma, sigma0, sigma1};
            try {
                p.validate();
                cell.regime = classify_regime(p);
                cell.tau = relaxation_time(p, n_cells).tau;
            } catch (const std::exception& ex) {
                cell.tau = std::numeric_limits<double>::quiet_NaN();
                cell.error = ex.what();
            }
        }
    });
    return d;
}

ScalingFit fit_scaling_exponent(const std::vector<double>& deltas,
                                const std::vector<double>& taus) {
    if (deltas.size() != taus.size()) {
        throw ValidationError("fit_scaling_exponent: length mismatch");
    }
    if (deltas.size() < 4) throw ValidationError("fit_scaling_exponent: need >= 4 points");
    const std::size_t n = deltas.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (deltas[i] == 0.0) throw ValidationError("fit_scaling_exponent: deltas must be nonzero");
        if (!(taus[i] > 0.0)) throw ValidationError("fit_scaling_exponent: taus must be positive");
        lx[i] = std::log(std::abs(deltas[i]));
        ly[i] = std::log(taus[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mx += lx[i]; my += ly[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw ValidationError("fit_scaling_exponent: all |delta| equal, fit is degenerate");
    }
    ScalingFit fit;
    const double slope = sxy / sxx;
    fit.exponent = -slope;
    fit.intercept = my - slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.delta_values = deltas;
    fit.tau_values = taus;
    return fit;
}

void write_phase_csv(const PhaseDiagram& d, std::ostream& os) {
    os << "alpha,beta,regime,tau\n";
    for (const PhaseCell& c : d.cells) {
        os << format_g17(c.alpha) << ',' << format_g17(c.beta) << ','
           << to_string(c.regime) << ',' << format_g17(c.tau) << '\n';
    }
}

std::string scaling_json(const ScalingFit& fit) {
    nlohmann::json j{
        {"exponent", fit.exponent},
        {"intercept", fit.intercept},
        {"r_squared", fit.r_squared},
        {"points", nlohmann::json::array()},
    };
    for (std::size_t i = 0; i < fit.delta_values.size(); ++i) {
        j["points"].push_back({{"delta", fit.delta_values[i]}, {"tau", fit.tau_values[i]}});
    }
    return j.dump();
}

}  // namespace sevdyn
