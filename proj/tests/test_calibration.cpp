#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "sevdyn/calibration.hpp"
#include "sevdyn/errors.hpp"
#include "sevdyn/sde.hpp"

using namespace sevdyn;

namespace {

const ModelParams kPanelA{0.3, 0.5, 0.01, 0.05, 0.1};
const ModelParams kPanelC{0.6, 0.4, 0.01, 0.05, 0.1};

IncrementDataset simulate_increments(const ModelParams& p, double x0, long n_traj,
                                     long n_steps, double dt, std::uint64_t seed) {
    SimConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = n_steps;
    cfg.x0 = x0;
    cfg.seed = seed;
    cfg.n_traj = n_traj;
    const Ensemble e = simulate_ensemble(p, cfg, 2);
    return filter_interior(increments_from_ensemble(e), p);
}

}  // namespace

TEST_CASE("pseudo log-likelihood single record, hand arithmetic") {
    IncrementDataset d;
    d.records.push_back({0.5, 0.001, 0.01});
    CHECK(pseudo_log_likelihood(kPanelA, d) == doctest::Approx(3.6764).epsilon(0.0005));
}

TEST_CASE("zero residuals leave only the normalization terms") {
    IncrementDataset d;
    double norm_sum = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = 0.2 + 0.01 * i;
        const double dt = 0.02;
        d.records.push_back({x, drift(kPanelC, x) * dt, dt});
        const double v = diffusion(kPanelC, x) * diffusion(kPanelC, x) * dt;
        norm_sum += -0.5 * std::log(2.0 * std::numbers::pi * v);
    }
    CHECK(pseudo_log_likelihood(kPanelC, d) == doctest::Approx(norm_sum).epsilon(1e-12));
}

TEST_CASE("likelihood is record-wise: order and grouping do not matter") {
    IncrementDataset a, b;
    for (int i = 0; i < 1000; ++i) {
        IncrementRecord r{0.2 + 0.0005 * i, 0.001 * ((i % 7) - 3), 0.01};
        a.records.push_back(r);
        b.records.push_back(r);
    }
    std::reverse(b.records.begin(), b.records.end());
    // same multiset of records, same value up to roundoff of a fixed tree
    CHECK(pseudo_log_likelihood(kPanelA, a) ==
          doctest::Approx(pseudo_log_likelihood(kPanelA, b)).epsilon(1e-12));
    // strict determinism on identical input
    CHECK(pseudo_log_likelihood(kPanelA, a) == pseudo_log_likelihood(kPanelA, a));
}

TEST_CASE("increments derived from a trajectory match recording stride") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 100;
    cfg.x0 = 0.4;
    cfg.seed = 5;
    const Trajectory t = simulate_trajectory(kPanelA, cfg);
    const IncrementDataset d = increments_from_trajectory(t);
    REQUIRE(d.size() == 100);
    for (const IncrementRecord& r : d.records) {
        CHECK(r.dt == doctest::Approx(0.01).epsilon(1e-12));
    }
    CHECK(d.records[0].x == 0.4);
}

TEST_CASE("interior filter drops boundary-adjacent records") {
    IncrementDataset d;
    d.records.push_back({0.001, 0.0, 0.01});   // within 2 sigma sqrt(dt) of 0
    d.records.push_back({0.5, 0.0, 0.01});     // interior
    d.records.push_back({0.999, 0.0, 0.01});   // near 1
    const IncrementDataset f = filter_interior(d, kPanelA);
    REQUIRE(f.size() == 1);
    CHECK(f.records[0].x == 0.5);
}

TEST_CASE("zero-drift recovery: drift parameters vanish, sigma0 within 5%") {
    ModelParams truth{0.0, 0.0, 0.0, 0.05, 0.0};
    const IncrementDataset d = simulate_increments(truth, 0.5, 20, 10000, 0.01, 99);
    const FitResult r = fit_params(d);
    CHECK(r.converged);
    CHECK(r.params.alpha <= 0.02);
    CHECK(r.params.beta <= 0.02);
    CHECK(r.params.gamma <= 0.02);
    CHECK(std::abs(r.params.sigma0 - 0.05) <= 0.0025);
}

TEST_CASE("panel-C recovery within tolerance on a reduced dataset") {
    // a 10x smaller cousin of the full acceptance run, with looser bounds
    const IncrementDataset d = simulate_increments(kPanelC, 0.05, 40, 2500, 0.01, 2024);
    REQUIRE(d.size() > 90000);
    const FitResult r = fit_params(d);
    CHECK(r.converged);
    CHECK(std::abs(r.params.alpha - 0.6) <= 0.3 * 0.6);
    CHECK(std::abs(r.params.beta - 0.4) <= 0.3 * 0.4);
    CHECK(std::abs(r.params.gamma - 0.01) <= 0.02);
    CHECK(std::abs(r.params.sigma0 - 0.05) <= 0.15 * 0.05);
    CHECK(std::abs(r.params.sigma1 - 0.1) <= 0.15 * 0.1);
}

TEST_CASE("fitted point is a local maximum of the likelihood") {
    const IncrementDataset d = simulate_increments(kPanelC, 0.05, 20, 2500, 0.01, 7);
    const FitResult r = fit_params(d);
    const double best = pseudo_log_likelihood(r.params, d);
    for (int j = 0; j < 5; ++j) {
        for (double bump : {0.95, 1.05}) {
            ModelParams q = r.params;
            double* field[] = {&q.alpha, &q.beta, &q.gamma, &q.sigma0, &q.sigma1};
            *field[j] = std::max(*field[j] * bump, j == 3 ? 1e-6 : 0.0);
            CHECK(pseudo_log_likelihood(q, d) <= best + 1e-9 * std::abs(best));
        }
    }
}

TEST_CASE("drift-parameter error shrinks with observed time") {
    // T = 1e3 vs T = 1e4 at fixed dt
    const IncrementDataset small = simulate_increments(kPanelC, 0.05, 40, 2500, 0.01, 11);
    const IncrementDataset big = simulate_increments(kPanelC, 0.05, 400, 2500, 0.01, 11);
    const FitResult rs = fit_params(small);
    const FitResult rb = fit_params(big);
    const double err_small = std::abs(rs.params.alpha - 0.6) + std::abs(rs.params.beta - 0.4) +
                             std::abs(rs.params.gamma - 0.01);
    const double err_big = std::abs(rb.params.alpha - 0.6) + std::abs(rb.params.beta - 0.4) +
                           std::abs(rb.params.gamma - 0.01);
    CHECK(err_big <= err_small + 1e-12);
}

TEST_CASE("fit is deterministic") {
    const IncrementDataset d = simulate_increments(kPanelA, 0.3, 10, 2000, 0.01, 13);
    const FitResult r1 = fit_params(d, kDefaultFitInit, 800, 1e-9);
    const FitResult r2 = fit_params(d, kDefaultFitInit, 800, 1e-9);
    CHECK(r1.params.alpha == r2.params.alpha);
    CHECK(r1.params.sigma0 == r2.params.sigma0);
    CHECK(r1.log_likelihood == r2.log_likelihood);
    CHECK(r1.n_iterations == r2.n_iterations);
    CHECK(r1.objective_trace == r2.objective_trace);
}

TEST_CASE("max_iter exhaustion reports converged = false with best-so-far") {
    const IncrementDataset d = simulate_increments(kPanelA, 0.3, 5, 1000, 0.01, 21);
    const FitResult r = fit_params(d, kDefaultFitInit, 3, 1e-12);
    CHECK_FALSE(r.converged);
    CHECK(r.n_iterations == 3);
    CHECK(std::isfinite(r.log_likelihood));
}

TEST_CASE("csv ingestion: trajectory, ensemble, and increment layouts") {
    {
        std::istringstream in("t,x\n0,0.5\n0.01,0.51\n0.02,0.505\n");
        const IncrementDataset d = read_increment_csv(in);
        REQUIRE(d.size() == 2);
        CHECK(d.records[0].x == 0.5);
        CHECK(d.records[0].dx == doctest::Approx(0.01));
        CHECK(d.records[0].dt == doctest::Approx(0.01));
    }
    {
        // increments never span trajectory boundaries
        std::istringstream in("traj_id,t,x\n0,0,0.5\n0,0.01,0.52\n1,0,0.3\n1,0.01,0.31\n");
        const IncrementDataset d = read_increment_csv(in);
        REQUIRE(d.size() == 2);
        CHECK(d.records[0].x == 0.5);
        CHECK(d.records[1].x == 0.3);
    }
    {
        std::istringstream in("x,dx,dt\n0.5,0.01,0.01\n0.4,-0.02,0.05\n");
        const IncrementDataset d = read_increment_csv(in);
        REQUIRE(d.size() == 2);
        CHECK(d.records[1].dt == 0.05);
    }
    {
        std::istringstream in("hello,world\n1,2\n");
        CHECK_THROWS_AS(read_increment_csv(in), ValidationError);
    }
    {
        std::istringstream in("x,dx,dt\n0.5,abc,0.01\n");
        CHECK_THROWS_AS(read_increment_csv(in), ValidationError);
    }
}

TEST_CASE("round trip: simulated CSV feeds the fit") {
    SimConfig cfg;
    cfg.dt = 0.01;
    cfg.n_steps = 5000;
    cfg.x0 = 0.05;
    cfg.seed = 31;
    cfg.n_traj = 30;
    const Ensemble e = simulate_ensemble(kPanelC, cfg, 2);
    std::ostringstream os;
    write_ensemble_csv(e, os);
    std::istringstream in(os.str());
    IncrementDataset d = read_increment_csv(in);
    d = filter_interior(d, kPanelC);
    const FitResult r = fit_params(d);
    CHECK(std::abs(r.params.alpha - 0.6) <= 0.35 * 0.6);
    CHECK(std::abs(r.params.sigma0 - 0.05) <= 0.15 * 0.05);
    CHECK(std::abs(r.params.sigma1 - 0.1) <= 0.2 * 0.1);
}

TEST_CASE("dataset and argument validation") {
    IncrementDataset d;
    CHECK_THROWS_AS(pseudo_log_likelihood(kPanelA, d), ValidationError);
    for (int i = 0; i < 60; ++i) d.records.push_back({0.5, 0.0, 0.01});
    CHECK_THROWS_AS(fit_params(d), ValidationError);  // < 100 records
    IncrementDataset bad;
    bad.records.push_back({1.5, 0.0, 0.01});
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad.records[0] = {0.5, 0.0, -0.01};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("fit JSON carries every field") {
    const IncrementDataset d = simulate_increments(kPanelA, 0.3, 5, 1000, 0.01, 55);
    const FitResult r = fit_params(d, kDefaultFitInit, 500, 1e-8);
    const auto j = nlohmann::json::parse(fit_json(r));
    CHECK(j.contains("params"));
    CHECK(j.contains("log_likelihood"));
    CHECK(j.contains("converged"));
    CHECK(j.contains("n_iterations"));
    CHECK(j["objective_trace"].size() == static_cast<std::size_t>(r.n_iterations));
}
