#include "sevdyn/numeric.hpp"

#include <algorithm>
#include <thread>

#include "sevdyn/errors.hpp"

namespace sevdyn {

namespace {

constexpr std::size_t kPairwiseBase = 64;

double pairwise_span(std::span<const double> v) {
    if (v.size() <= kPairwiseBase) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_span(v.first(half)) + pairwise_span(v.subspan(half));
}

double pairwise_fn(std::size_t i0, std::size_t i1,
                   const std::function<double(std::size_t)>& term) {
    if (i1 - i0 <= kPairwiseBase) {
        double s = 0.0;
        for (std::size_t i = i0; i < i1; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = i0 + (i1 - i0) / 2;
    return pairwise_fn(i0, mid, term) + pairwise_fn(mid, i1, term);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_span(values);
}

double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
    return pairwise_fn(0, n, term);
}

std::vector<double> solve_tridiag(const Tridiag& m, std::span<const double> rhs) {
    const std::size_t n = m.size();
    if (n == 0 || rhs.size() != n || m.lower.size() + 1 != n || m.upper.size() + 1 != n) {
        throw ValidationError("solve_tridiag: inconsistent dimensions");
    }
    std::vector<double> c(n - 1), d(n), x(n);
    double pivot = m.diag[0];
    if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
        throw NumericalError("solve_tridiag: singular pivot at row 0");
    }
    if (n > 1) c[0] = m.upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = m.diag[i] - m.lower[i - 1] * c[i - 1];
        if (!(std::abs(pivot) > 0.0) || !std::isfinite(pivot)) {
            throw NumericalError("solve_tridiag: singular pivot at row " + std::to_string(i));
        }
        if (i < n - 1) c[i] = m.upper[i] / pivot;
        d[i] = (rhs[i] - m.lower[i - 1] * d[i - 1]) / pivot;
    }
    x[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    return x;
}

std::vector<double> tridiag_apply(const Tridiag& m, std::span<const double> x) {
    const std::size_t n = m.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = m.diag[i] * x[i];
        if (i > 0) s += m.lower[i - 1] * x[i - 1];
        if (i + 1 < n) s += m.upper[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

void parallel_for_blocks(std::size_t n_items, int n_threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    std::size_t workers = n_threads > 0
        ? static_cast<std::size_t>(n_threads)
        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_items);
    if (workers <= 1) {
        if (n_items > 0) fn(0, n_items);
        return;
    }
    const std::size_t chunk = (n_items + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n_items, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace sevdyn
