#include "sevdyn/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <json.hpp>

#include "sevdyn/errors.hpp"
#include "sevdyn/numeric.hpp"
#include "sevdyn/rng.hpp"

namespace sevdyn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// exp() of anything above this overflows double range.
constexpr double kLogOverflow = 709.0;
}  // namespace

void FirstPassageSpec::validate() const {
    if (!(x_harm > 0.0 && x_harm < 1.0)) throw ValidationError("passage.x_harm must lie in (0,1)");
    if (!(x_start >= 0.0 && x_start < x_harm)) {
        throw ValidationError("passage.x_start must satisfy 0 <= x_start < x_harm");
    }
    if (!(t_max > 0.0)) throw ValidationError("passage.t_max must be positive");
}

QuadratureMfpt mfpt_quadrature(const ModelParams& p, const FirstPassageSpec& spec,
                               int n_nodes) {
    p.validate();
    spec.validate();
    if (n_nodes < 64) throw ValidationError("mfpt_quadrature: n_nodes must be >= 64");

    // Nodes over [0, x_harm] with x_start inserted so the outer integral
    // starts exactly there.
    std::vector<double> ys(n_nodes + 1);
    for (int j = 0; j <= n_nodes; ++j) {
        ys[j] = spec.x_harm * static_cast<double>(j) / n_nodes;
    }
    std::size_t start_idx;
    {
        auto it = std::lower_bound(ys.begin(), ys.end(), spec.x_start);
        if (it != ys.end() && std::abs(*it - spec.x_start) < 1e-15) {
            start_idx = static_cast<std::size_t>(it - ys.begin());
        } else {
            start_idx = static_cast<std::size_t>(it - ys.begin());
            ys.insert(it, spec.x_start);
        }
    }
    const std::size_t m = ys.size();

    // log psi by cumulative trapezoid of 2 mu / sigma^2.
    std::vector<double> log_psi(m), q(m);
    double acc = 0.0, g_prev = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double s2 = diffusion(p, ys[j]) * diffusion(p, ys[j]);
        const double g = 2.0 * drift(p, ys[j]) / s2;
        if (j > 0) acc += 0.5 * (g_prev + g) * (ys[j] - ys[j - 1]);
        g_prev = g;
        log_psi[j] = acc;
        q[j] = acc - std::log(s2);  // log(psi/sigma^2)
    }

    // Inner integral I(y) = int_0^y psi/sigma^2, then the outer integrand
    // f(y) = I(y)/psi(y); both accumulated as running log-sum-exp so the
    // exponential sensitivity of psi never overflows.
    double log_inner = kNegInf;
    double log_outer = kNegInf;
    for (std::size_t j = 1; j < m; ++j) {
        const double hseg = ys[j] - ys[j - 1];
        const double log_f_prev = log_inner - log_psi[j - 1];
        log_inner = log_add_exp(log_inner,
                                std::log(0.5 * hseg) + log_add_exp(q[j - 1], q[j]));
        const double log_f = log_inner - log_psi[j];
        if (j > start_idx) {
            log_outer = log_add_exp(log_outer,
                                    std::log(0.5 * hseg) + log_add_exp(log_f_prev, log_f));
        }
    }

    QuadratureMfpt out;
    out.log_mean_fpt = std::log(2.0) + log_outer;  // -inf when x_start == x_harm limit
    if (log_outer == kNegInf) {
        out.mean_fpt = 0.0;
        out.log_mean_fpt = kNegInf;
        return out;
    }
    if (out.log_mean_fpt > kLogOverflow) {
        out.effectively_infinite = true;
        out.mean_fpt = std::numeric_limits<double>::infinity();
        return out;
    }
    out.mean_fpt = std::exp(out.log_mean_fpt);
    return out;
}

FptResult mfpt_monte_carlo(const ModelParams& p, const FirstPassageSpec& spec,
                           const SimConfig& cfg, int n_threads) {
    p.validate();
    spec.validate();
    cfg.validate();

    const long max_steps = static_cast<long>(std::ceil(spec.t_max / cfg.dt));
    const long n = cfg.n_traj;
    std::vector<double> hit_time(n, -1.0);  // -1 marks censored

    parallel_for_blocks(static_cast<std::size_t>(n), n_threads,
                        [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            NormalSampler rng(cfg.seed + i);
            double x = spec.x_start;
            for (long k = 0; k < max_steps; ++k) {
                const double raw = em_step_raw(p, x, cfg.dt, rng.next());
                if (raw >= spec.x_harm) {
                    hit_time[i] = static_cast<double>(k + 1) * cfg.dt;
                    break;
                }
                x = reflect_unit(raw);
            }
        }
    });

    FptResult out;
    out.n_samples = n;
    std::vector<double> hits;
    hits.reserve(n);
    for (double t : hit_time) {
        if (t < 0.0) {
            ++out.n_censored;
        } else {
            hits.push_back(t);
        }
    }
    if (hits.empty()) return out;

    const double mean = pairwise_sum(hits) / static_cast<double>(hits.size());
    out.mean_fpt = mean;
    if (hits.size() > 1) {
        const double ssq = pairwise_sum(hits.size(), [&](std::size_t i) {
            const double d = hits[i] - mean;
            return d * d;
        });
        const double var = ssq / static_cast<double>(hits.size() - 1);
        out.std_error = std::sqrt(var / static_cast<double>(hits.size()));
    }
    return out;
}

namespace {

nlohmann::json params_echo(const ModelParams& p, const FirstPassageSpec& spec) {
    return {
        {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
        {"sigma0", p.sigma0}, {"sigma1", p.sigma1},
        {"x_harm", spec.x_harm}, {"x_start", spec.x_start}, {"t_max", spec.t_max},
    };
}

}  // namespace

std::string mfpt_json_record(const QuadratureMfpt& q, const ModelParams& p,
                             const FirstPassageSpec& spec) {
    nlohmann::json j{
        {"method", "quadrature"},
        {"mean_fpt", q.effectively_infinite ? nlohmann::json("inf") : nlohmann::json(q.mean_fpt)},
        {"log_mean_fpt", q.log_mean_fpt},
        {"effectively_infinite", q.effectively_infinite},
        {"std_error", 0.0},
        {"n_samples", 0},
        {"n_censored", 0},
        {"params", params_echo(p, spec)},
    };
    return j.dump();
}

std::string mfpt_json_record(const FptResult& r, const ModelParams& p,
                             const FirstPassageSpec& spec) {
    nlohmann::json j{
        {"method", "monte_carlo"},
        {"mean_fpt", r.mean_fpt.has_value() ? nlohmann::json(*r.mean_fpt)
                                            : nlohmann::json("censored")},
        {"std_error", r.std_error},
        {"n_samples", r.n_samples},
        {"n_censored", r.n_censored},
        {"params", params_echo(p, spec)},
    };
    return j.dump();
}

}  // namespace sevdyn
