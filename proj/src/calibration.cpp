#include "sevdyn/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "sevdyn/errors.hpp"
#include "sevdyn/numeric.hpp"

namespace sevdyn {

void IncrementDataset::validate() const {
    for (const IncrementRecord& r : records) {
        if (!(r.x >= 0.0 && r.x <= 1.0)) throw ValidationError("increment record: x outside [0,1]");
        if (!(r.dt > 0.0)) throw ValidationError("increment record: dt must be positive");
        if (!(r.x + r.dx >= -1.0 && r.x + r.dx <= 2.0)) {
            throw ValidationError("increment record: x + dx outside [-1,2]");
        }
    }
}

IncrementDataset increments_from_trajectory(const Trajectory& t) {
    IncrementDataset out;
    if (t.values.size() < 2) return out;
    out.records.reserve(t.values.size() - 1);
    for (std::size_t k = 0; k + 1 < t.values.size(); ++k) {
        out.records.push_back({t.values[k], t.values[k + 1] - t.values[k],
                               t.times[k + 1] - t.times[k]});
    }
    return out;
}

IncrementDataset increments_from_ensemble(const Ensemble& e) {
    IncrementDataset out;
    for (const Trajectory& t : e.trajectories) {
        IncrementDataset one = increments_from_trajectory(t);
        out.records.insert(out.records.end(), one.records.begin(), one.records.end());
    }
    return out;
}

IncrementDataset filter_interior(const IncrementDataset& data, const ModelParams& reference) {
    IncrementDataset out;
    out.records.reserve(data.records.size());
    for (const IncrementRecord& r : data.records) {
        const double band = 2.0 * diffusion(reference, r.x) * std::sqrt(r.dt);
        if (r.x > band && 1.0 - r.x > band) out.records.push_back(r);
    }
    return out;
}

double pseudo_log_likelihood(const ModelParams& p, const IncrementDataset& data) {
    if (data.records.empty()) throw ValidationError("pseudo_log_likelihood: empty dataset");
    const auto& rec = data.records;
    return pairwise_sum(rec.size(), [&](std::size_t i) {
        const IncrementRecord& r = rec[i];
        const double s = diffusion(p, r.x);
        const double v = s * s * r.dt;
        const double resid = r.dx - drift(p, r.x) * r.dt;
        return -0.5 * std::log(2.0 * std::numbers::pi * v) - resid * resid / (2.0 * v);
    });
}

namespace {

constexpr int kDim = 5;
using Point = std::array<double, kDim>;

Point project_box(Point q) {
    q[0] = std::max(q[0], 0.0);
    q[1] = std::max(q[1], 0.0);
    q[2] = std::max(q[2], 0.0);
    q[3] = std::max(q[3], 1e-6);
    q[4] = std::max(q[4], 0.0);
    return q;
}

ModelParams to_params(const Point& q) { return {q[0], q[1], q[2], q[3], q[4]}; }

struct Vertex {
    Point x;
    double f;  // negative log-likelihood
};

/// One Nelder-Mead run from the given start; every trial point is projected
/// onto the box before evaluation.
void nelder_mead(const std::function<double(const Point&)>& fn, Point start,
                 double step_scale, long max_iter, double tol,
                 std::vector<double>& trace, long& iters_used, bool& converged,
                 Vertex& best_out) {
    std::array<Vertex, kDim + 1> simplex;
    simplex[0] = {project_box(start), 0.0};
    simplex[0].f = fn(simplex[0].x);
    for (int j = 0; j < kDim; ++j) {
        Point q = start;
        q[j] += step_scale * std::max(0.25 * std::abs(start[j]), 0.02);
        simplex[j + 1] = {project_box(q), 0.0};
        simplex[j + 1].f = fn(simplex[j + 1].x);
    }
    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::stable_sort(simplex.begin(), simplex.end(), by_f);

    converged = false;
    int flat_streak = 0;
    double prev_best = simplex[0].f;
    long it = 0;
    for (; it < max_iter; ++it) {
        // Centroid of all but the worst.
        Point c{};
        for (int v = 0; v < kDim; ++v) {
            for (int j = 0; j < kDim; ++j) c[j] += simplex[v].x[j];
        }
        for (int j = 0; j < kDim; ++j) c[j] /= kDim;
        const Vertex& worst = simplex[kDim];

        auto make = [&](double coef) {
            Point q;
            for (int j = 0; j < kDim; ++j) q[j] = c[j] + coef * (c[j] - worst.x[j]);
            q = project_box(q);
            return Vertex{q, fn(q)};
        };
        Vertex refl = make(1.0);
        if (refl.f < simplex[0].f) {
            Vertex expd = make(2.0);
            simplex[kDim] = expd.f < refl.f ? expd : refl;
        } else if (refl.f < simplex[kDim - 1].f) {
            simplex[kDim] = refl;
        } else {
            Vertex contr = refl.f < worst.f ? make(0.5) : make(-0.5);
            if (contr.f < std::min(refl.f, worst.f)) {
                simplex[kDim] = contr;
            } else {
                // Shrink toward the best vertex.
                for (int v = 1; v <= kDim; ++v) {
                    for (int j = 0; j < kDim; ++j) {
                        simplex[v].x[j] = simplex[0].x[j] + 0.5 * (simplex[v].x[j] - simplex[0].x[j]);
                    }
                    simplex[v].x = project_box(simplex[v].x);
                    simplex[v].f = fn(simplex[v].x);
                }
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_f);
        trace.push_back(-simplex[0].f);

        const double improvement = prev_best - simplex[0].f;
        prev_best = simplex[0].f;
        // Converged once a full iteration improves by less than tol and the
        // simplex itself has collapsed (sub-tol spread), so a single stalled
        // reflection does not end the search early.
        const double spread = simplex[kDim].f - simplex[0].f;
        if (improvement < tol && spread < std::max(tol * 100.0, 1e-7 * std::abs(simplex[0].f))) {
            if (++flat_streak >= 3) {
                converged = true;
                ++it;
                break;
            }
        } else {
            flat_streak = 0;
        }
    }
    iters_used = it;
    best_out = simplex[0];
}

}  // namespace

FitResult fit_params(const IncrementDataset& data, const ModelParams& init,
                     long max_iter, double tol) {
    if (data.records.size() < 100) {
        throw ValidationError("fit_params: need at least 100 increment records");
    }
    if (max_iter < 1) throw ValidationError("fit_params: max_iter must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("fit_params: tol must be positive");
    data.validate();

    auto objective = [&data](const Point& q) {
        return -pseudo_log_likelihood(to_params(q), data);
    };

    FitResult out;
    Point start{init.alpha, init.beta, init.gamma, init.sigma0, init.sigma1};
    long budget = max_iter;
    bool converged = false;
    Vertex best{project_box(start), objective(project_box(start))};
    // A restart from the incumbent with a smaller simplex guards against
    // stalls on the box boundary.
    for (int round = 0; round < 2 && budget > 0; ++round) {
        long used = 0;
        bool conv = false;
        Vertex candidate = best;
        nelder_mead(objective, best.x, round == 0 ? 1.0 : 0.1, budget, tol,
                    out.objective_trace, used, conv, candidate);
        out.n_iterations += used;
        budget -= used;
        if (candidate.f < best.f) best = candidate;
        converged = conv;
    }

    out.params = to_params(best.x);
    out.log_likelihood = -best.f;
    out.converged = converged;
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& s, long line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

}  // namespace

IncrementDataset read_increment_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("csv: empty input");
    const std::vector<std::string> header = split_csv_line(line);

    enum class Layout { kSeries, kEnsemble, kIncrements };
    Layout layout;
    if (header == std::vector<std::string>{"t", "x"}) {
        layout = Layout::kSeries;
    } else if (header == std::vector<std::string>{"traj_id", "t", "x"}) {
        layout = Layout::kEnsemble;
    } else if (header == std::vector<std::string>{"x", "dx", "dt"}) {
        layout = Layout::kIncrements;
    } else {
        throw ValidationError("csv: header must be `t,x`, `traj_id,t,x` or `x,dx,dt`");
    }

    IncrementDataset out;
    double prev_t = 0.0, prev_x = 0.0, prev_id = 0.0;
    bool have_prev = false;
    long line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size()) {
            throw ValidationError("csv line " + std::to_string(line_no) + ": wrong field count");
        }
        if (layout == Layout::kIncrements) {
            out.records.push_back({parse_field(f[0], line_no), parse_field(f[1], line_no),
                                   parse_field(f[2], line_no)});
            continue;
        }
        const bool ensemble = layout == Layout::kEnsemble;
        const double id = ensemble ? parse_field(f[0], line_no) : 0.0;
        const double t = parse_field(f[ensemble ? 1 : 0], line_no);
        const double x = parse_field(f[ensemble ? 2 : 1], line_no);
        if (have_prev && (!ensemble || id == prev_id)) {
            out.records.push_back({prev_x, x - prev_x, t - prev_t});
        }
        prev_t = t;
        prev_x = x;
        prev_id = id;
        have_prev = true;
    }
    out.validate();
    return out;
}

std::string fit_json(const FitResult& r) {
    nlohmann::json j{
        {"params", {{"alpha", r.params.alpha},
                    {"beta", r.params.beta},
                    {"gamma", r.params.gamma},
                    {"sigma0", r.params.sigma0},
                    {"sigma1", r.params.sigma1}}},
        {"log_likelihood", r.log_likelihood},
        {"converged", r.converged},
        {"n_iterations", r.n_iterations},
        {"objective_trace", r.objective_trace},
    };
    return j.dump();
}

}  // namespace sevdyn
