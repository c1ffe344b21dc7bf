#include "sevdyn/config.hpp"

#include <algorithm>

#include <json.hpp>

#include "sevdyn/errors.hpp"
#include "sevdyn/io.hpp"

namespace sevdyn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<long>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) fail(path, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> known) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* k) { return key == k; }) == known.end()) {
            fail(path + "." + key, "unknown field");
        }
    }
}

ModelParams parse_model(const json& j) {
    if (!j.is_object()) fail("model", "expected an object");
    reject_unknown_keys(j, "model", {"alpha", "beta", "gamma", "sigma0", "sigma1"});
    ModelParams p;
    if (j.contains("alpha")) p.alpha = get_number(j["alpha"], "model.alpha");
    if (j.contains("beta")) p.beta = get_number(j["beta"], "model.beta");
    if (j.contains("gamma")) p.gamma = get_number(j["gamma"], "model.gamma");
    if (j.contains("sigma0")) p.sigma0 = get_number(j["sigma0"], "model.sigma0");
    if (j.contains("sigma1")) p.sigma1 = get_number(j["sigma1"], "model.sigma1");
    p.validate();  // messages already carry the model. prefix
    return p;
}

SimConfig parse_sim(const json& j) {
    if (!j.is_object()) fail("sim", "expected an object");
    reject_unknown_keys(j, "sim", {"dt", "n_steps", "x0", "seed", "n_traj", "record_stride"});
    SimConfig c;
    if (j.contains("dt")) c.dt = get_number(j["dt"], "sim.dt");
    if (j.contains("n_steps")) c.n_steps = get_integer(j["n_steps"], "sim.n_steps");
    if (j.contains("x0")) c.x0 = get_number(j["x0"], "sim.x0");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            fail("sim.seed", "expected an unsigned integer");
        }
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_traj")) c.n_traj = get_integer(j["n_traj"], "sim.n_traj");
    if (j.contains("record_stride")) {
        c.record_stride = get_integer(j["record_stride"], "sim.record_stride");
    }
    c.validate();
    return c;
}

PassageConfig parse_passage(const json& j) {
    if (!j.is_object()) fail("passage", "expected an object");
    reject_unknown_keys(j, "passage", {"x_harm", "x_start", "t_max", "horizon"});
    PassageConfig c;
    if (j.contains("x_harm")) c.spec.x_harm = get_number(j["x_harm"], "passage.x_harm");
    if (j.contains("x_start")) c.spec.x_start = get_number(j["x_start"], "passage.x_start");
    if (j.contains("t_max")) c.spec.t_max = get_number(j["t_max"], "passage.t_max");
    if (j.contains("horizon")) c.horizon = get_number(j["horizon"], "passage.horizon");
    c.spec.validate();
    return c;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ValidationError(std::string("config: malformed JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ValidationError("config: top level must be an object");
    reject_unknown_keys(j, "config",
                        {"model", "sim", "grid", "passage", "sweep", "scaling", "evolve",
                         "fit", "output_dir", "threads"});

    RunConfig cfg;
    if (j.contains("model")) cfg.model = parse_model(j["model"]);
    else throw ValidationError("model: required block is missing");
    if (j.contains("sim")) cfg.sim = parse_sim(j["sim"]);

    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) fail("grid", "expected an object");
        reject_unknown_keys(g, "grid", {"n_cells"});
        if (g.contains("n_cells")) cfg.grid.n_cells = static_cast<int>(get_integer(g["n_cells"], "grid.n_cells"));
        if (cfg.grid.n_cells < 16) fail("grid.n_cells", "must be >= 16");
    }

    if (j.contains("passage")) cfg.passage = parse_passage(j["passage"]);

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) fail("sweep", "expected an object");
        reject_unknown_keys(s, "sweep", {"alpha_grid", "beta_grid"});
        SweepConfig sw;
        if (s.contains("alpha_grid")) sw.alpha_grid = get_number_array(s["alpha_grid"], "sweep.alpha_grid");
        if (s.contains("beta_grid")) sw.beta_grid = get_number_array(s["beta_grid"], "sweep.beta_grid");
        if (sw.alpha_grid.empty()) fail("sweep.alpha_grid", "must be nonempty");
        if (sw.beta_grid.empty()) fail("sweep.beta_grid", "must be nonempty");
        if (!std::is_sorted(sw.alpha_grid.begin(), sw.alpha_grid.end())) {
            fail("sweep.alpha_grid", "must be ascending");
        }
        if (!std::is_sorted(sw.beta_grid.begin(), sw.beta_grid.end())) {
            fail("sweep.beta_grid", "must be ascending");
        }
        cfg.sweep = sw;
    }

    if (j.contains("scaling")) {
        const json& s = j["scaling"];
        if (!s.is_object()) fail("scaling", "expected an object");
        reject_unknown_keys(s, "scaling", {"deltas"});
        ScalingConfig sc;
        if (s.contains("deltas")) sc.deltas = get_number_array(s["deltas"], "scaling.deltas");
        if (sc.deltas.size() < 4) fail("scaling.deltas", "need at least 4 offsets");
        for (double d : sc.deltas) {
            if (d == 0.0) fail("scaling.deltas", "offsets must be nonzero");
        }
        cfg.scaling = sc;
    }

    if (j.contains("evolve")) {
        const json& e = j["evolve"];
        if (!e.is_object()) fail("evolve", "expected an object");
        reject_unknown_keys(e, "evolve", {"init", "x0", "dt", "n_steps"});
        if (e.contains("init")) cfg.evolve.init = get_string(e["init"], "evolve.init");
        if (cfg.evolve.init != "uniform" && cfg.evolve.init != "delta") {
            fail("evolve.init", "must be \"uniform\" or \"delta\"");
        }
        if (e.contains("x0")) cfg.evolve.x0 = get_number(e["x0"], "evolve.x0");
        if (!(cfg.evolve.x0 >= 0.0 && cfg.evolve.x0 <= 1.0)) fail("evolve.x0", "must lie in [0,1]");
        if (e.contains("dt")) cfg.evolve.dt = get_number(e["dt"], "evolve.dt");
        if (!(cfg.evolve.dt > 0.0)) fail("evolve.dt", "must be positive");
        if (e.contains("n_steps")) cfg.evolve.n_steps = get_integer(e["n_steps"], "evolve.n_steps");
        if (cfg.evolve.n_steps < 1) fail("evolve.n_steps", "must be >= 1");
    }

    if (j.contains("fit")) {
        const json& f = j["fit"];
        if (!f.is_object()) fail("fit", "expected an object");
        reject_unknown_keys(f, "fit", {"input", "max_iter", "tol"});
        FitConfig fc;
        if (f.contains("input")) fc.input = get_string(f["input"], "fit.input");
        if (fc.input.empty()) fail("fit.input", "required path is missing");
        if (f.contains("max_iter")) fc.max_iter = get_integer(f["max_iter"], "fit.max_iter");
        if (fc.max_iter < 1) fail("fit.max_iter", "must be >= 1");
        if (f.contains("tol")) fc.tol = get_number(f["tol"], "fit.tol");
        if (!(fc.tol > 0.0)) fail("fit.tol", "must be positive");
        cfg.fit = fc;
    }

    if (j.contains("output_dir")) cfg.output_dir = get_string(j["output_dir"], "output_dir");
    if (cfg.output_dir.empty()) fail("output_dir", "must be nonempty");
    if (j.contains("threads")) {
        cfg.threads = static_cast<int>(get_integer(j["threads"], "threads"));
        if (cfg.threads < 0) fail("threads", "must be >= 0");
    }
    return cfg;
}

RunConfig load_config(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& overrides) {
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& ex) {
        throw ValidationError("config " + path + ": malformed JSON: " + ex.what());
    }
    for (const auto& [key, value] : overrides) {
        std::string pointer = "/" + key;
        std::replace(pointer.begin(), pointer.end(), '.', '/');
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::parse_error&) {
            parsed = value;  // plain string
        }
        try {
            j[json::json_pointer(pointer)] = parsed;
        } catch (const json::exception& ex) {
            throw ValidationError("override --" + key + ": " + ex.what());
        }
    }
    return parse_config(j.dump());
}

}  // namespace sevdyn
