#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sevdyn {

/// B(z) = z / (e^z - 1), the exponential-fitting weight. B(0) = 1.
/// Stable for all finite z: series near zero, expm1 elsewhere
/// (z > ~709 underflows cleanly to 0, large negative z tends to -z).
inline double bernoulli_ratio(double z) {
    if (std::abs(z) < 1e-5) {
        return 1.0 - 0.5 * z + z * z / 12.0;
    }
    return z / std::expm1(z);
}

/// log(e^a + e^b) without overflow; (-inf, -inf) -> -inf.
inline double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = a > b ? a : b;
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

/// Fixed-tree pairwise summation. The reduction order depends only on the
/// element count, so results are identical however the terms were produced.
double pairwise_sum(std::span<const double> values);

/// Pairwise sum of f(i) for i in [0, n) with the same fixed tree.
double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& term);

/// Tridiagonal system storage: lower[i] couples row i+1 to i, upper[i] couples
/// row i to i+1; both have size n-1.
struct Tridiag {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;

    std::size_t size() const { return diag.size(); }
};

/// Thomas algorithm. Throws NumericalError on a vanishing or non-finite pivot.
/// No pivoting: callers supply diagonally dominant systems.
std::vector<double> solve_tridiag(const Tridiag& m, std::span<const double> rhs);

/// y = M x for tridiagonal M.
std::vector<double> tridiag_apply(const Tridiag& m, std::span<const double> x);

/// Runs fn(begin, end) over contiguous index blocks, using up to n_threads
/// workers (0 = hardware concurrency). The partition depends only on n_items,
/// never on the thread count, so any writes into preallocated per-index slots
/// are scheduling-independent.
void parallel_for_blocks(std::size_t n_items, int n_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace sevdyn
