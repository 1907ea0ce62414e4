#include "netsis/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "netsis/equilibrium.hpp"
#include "netsis/error.hpp"
#include "netsis/graph.hpp"
#include "netsis/prng.hpp"
#include "netsis/spectral.hpp"
#include "netsis/stability.hpp"

namespace netsis {

namespace {

using nlohmann::json;

constexpr double kConvergedTol = 1e-6;
// The fixed-point solver runs well past its API default here so that the
// reported x* sits closer to the true equilibrium than the 1e-12 overshoot
// slack used by the trajectory diagnostics.
constexpr double kPipelineSolverTol = 1e-14;

[[noreturn]] void config_fail(const std::string& message) {
    throw Error(ErrorCode::ConfigError, message);
}

const json& require_key(const json& j, const char* key, const char* where) {
    const auto it = j.find(key);
    if (it == j.end())
        config_fail(std::string("missing required key '") + key + "' in " + where);
    return *it;
}

double require_number(const json& j, const char* key, const char* where) {
    const json& v = require_key(j, key, where);
    if (!v.is_number()) config_fail(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t require_seed(const json& j, const char* key, const char* where) {
    const json& v = require_key(j, key, where);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        config_fail(std::string("'") + key + "' must be an integer seed");
    return v.get<std::uint64_t>();
}

Vector parse_vector(const json& v, const char* key) {
    if (!v.is_array()) config_fail(std::string("'") + key + "' must be an array");
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (const auto& entry : v) {
        if (!entry.is_number())
            config_fail(std::string("'") + key + "' must contain only numbers");
        out[i++] = entry.get<double>();
    }
    return out;
}

Interval parse_interval(const json& v, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        config_fail(std::string("'") + key + "' must be a [lo, hi] pair");
    return Interval{v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& j) {
    if (!j.is_object()) config_fail("config must be a JSON object");
    ExperimentConfig config;

    const json& network = require_key(j, "network", "config");
    if (network.contains("edgelist")) {
        config.network.edgelist_path = network["edgelist"].get<std::string>();
    } else if (network.contains("generator")) {
        const json& gen = network["generator"];
        GeneratorSpec spec;
        spec.n = static_cast<Index>(require_number(gen, "n", "network.generator"));
        spec.extra_edge_prob = require_number(gen, "extra_edge_prob", "network.generator");
        spec.seed = require_seed(gen, "seed", "network.generator");
        config.network.generator = spec;
    } else {
        config_fail("network must specify 'edgelist' or 'generator'");
    }

    config.normalize_in_weights = j.value("normalize_in_weights", false);
    config.strict_scc = j.value("strict_scc", false);

    const json& params = require_key(j, "params", "config");
    if (params.contains("sampled")) {
        const json& sampled = params["sampled"];
        SampledParamsSpec spec;
        spec.beta_range = parse_interval(require_key(sampled, "beta_range", "params.sampled"),
                                         "beta_range");
        spec.delta_range = parse_interval(
            require_key(sampled, "delta_range", "params.sampled"), "delta_range");
        spec.seed = require_seed(sampled, "seed", "params.sampled");
        config.params.sampled = spec;
    } else if (params.contains("beta") && params.contains("delta")) {
        config.params.beta = parse_vector(params["beta"], "beta");
        config.params.delta = parse_vector(params["delta"], "delta");
    } else {
        config_fail("params must specify 'sampled' or both 'beta' and 'delta'");
    }

    config.h = require_number(j, "h", "config");

    const json& x0 = require_key(j, "x0", "config");
    if (x0.is_string() && x0.get<std::string>() == "zero") {
        config.x0.kind = X0Spec::Kind::Zero;
    } else if (x0.is_object() && x0.contains("explicit")) {
        config.x0.kind = X0Spec::Kind::Explicit;
        config.x0.explicit_x0 = parse_vector(x0["explicit"], "x0.explicit");
    } else if (x0.is_object() && x0.contains("uniform_range")) {
        const json& range = x0["uniform_range"];
        config.x0.kind = X0Spec::Kind::UniformRange;
        config.x0.lo = require_number(range, "lo", "x0.uniform_range");
        config.x0.hi = require_number(range, "hi", "x0.uniform_range");
        config.x0.seed = require_seed(range, "seed", "x0.uniform_range");
        if (!(config.x0.lo >= 0.0 && config.x0.lo < config.x0.hi && config.x0.hi <= 1.0))
            config_fail("x0.uniform_range must satisfy 0 <= lo < hi <= 1");
    } else {
        config_fail("x0 must be \"zero\", {\"explicit\": [...]}, or {\"uniform_range\": {...}}");
    }

    config.horizon = static_cast<Index>(require_number(j, "horizon", "config"));
    if (config.horizon < 0) config_fail("horizon must be >= 0");
    config.stop_tol = j.value("stop_tol", 1e-12);
    if (config.stop_tol < 0.0) config_fail("stop_tol must be >= 0");

    if (j.contains("output")) {
        const json& output = j["output"];
        config.trajectory_csv = output.value("trajectory_csv", config.trajectory_csv);
        config.report_json = output.value("report_json", config.report_json);
    }
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        config_fail("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_experiment_config(j);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");

    const Index n = traj.states.empty() ? 0 : traj.states.front().size();
    out << "k";
    for (Index i = 0; i < n; ++i) out << ",x_" << i;
    out << "\n";

    char buf[40];
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        out << k;
        const Vector& x = traj.states[k];
        for (Index i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof(buf), ",%.17g", x[i]);
            out << buf;
        }
        out << "\n";
    }
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

std::vector<Vector> read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

    std::vector<Vector> states;
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::IoError, "'" + path + "' is empty");

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        bool first = true;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            const std::string cell = line.substr(pos, comma - pos);
            if (!first) row.push_back(std::stod(cell));
            first = false;
            pos = comma + 1;
        }
        Vector x(static_cast<Index>(row.size()));
        for (std::size_t i = 0; i < row.size(); ++i) x[static_cast<Index>(i)] = row[i];
        states.push_back(std::move(x));
    }
    return states;
}

namespace {

json error_entry(const Error& e) {
    json entry;
    entry["code"] = e.qualified_code();
    entry["message"] = e.what();
    if (e.node()) entry["node"] = *e.node();
    if (e.value()) entry["value"] = *e.value();
    return entry;
}

json vector_to_json(const VectorRef& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector build_x0(const X0Spec& spec, Index n) {
    switch (spec.kind) {
        case X0Spec::Kind::Zero:
            return Vector::Zero(n);
        case X0Spec::Kind::Explicit: {
            if (spec.explicit_x0.size() != n)
                config_fail("explicit x0 has size " + std::to_string(spec.explicit_x0.size()) +
                            ", expected " + std::to_string(n));
            return spec.explicit_x0;
        }
        case X0Spec::Kind::UniformRange: {
            SplitMix64 rng(spec.seed);
            Vector x0(n);
            for (Index i = 0; i < n; ++i) x0[i] = rng.uniform_half_open(spec.lo, spec.hi);
            return x0;
        }
    }
    config_fail("invalid x0 kind");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, bool validate_only) {
    json report;
    report["rho_threshold"] = nullptr;
    report["regime"] = nullptr;
    report["boundary_warning"] = nullptr;
    report["x_star"] = nullptr;
    report["bounds"] = nullptr;
    report["rho_xi"] = nullptr;
    report["f_mu_residual"] = nullptr;
    report["initial_class"] = nullptr;
    report["overshoot"] = nullptr;
    report["hitting_time"] = nullptr;
    report["lyapunov_monotone"] = nullptr;
    report["empirical_rate"] = nullptr;
    report["converged_to"] = nullptr;
    report["final_error_inf"] = nullptr;
    report["steps"] = nullptr;
    report["errors"] = json::array();

    auto record = [&report](const Error& e) { report["errors"].push_back(error_entry(e)); };

    // Stage 1: graph.
    std::optional<Graph> graph;
    try {
        if (config.network.edgelist_path) {
            std::ifstream in(*config.network.edgelist_path);
            if (!in)
                throw Error(ErrorCode::IoError,
                            "cannot open edge list '" + *config.network.edgelist_path + "'");
            graph = parse_edge_list(in);
        } else if (config.network.generator) {
            const GeneratorSpec& gen = *config.network.generator;
            graph = random_strongly_connected(gen.n, gen.extra_edge_prob, gen.seed);
        } else {
            config_fail("no network source");
        }

        const SccAnalysis scc = strongly_connected_analysis(*graph);
        if (!scc.is_strongly_connected) {
            if (config.strict_scc)
                throw Error(ErrorCode::NotStronglyConnected,
                            "graph is not strongly connected (strict_scc set)");
            std::cerr << "warning: graph is not strongly connected; using largest SCC with "
                      << scc.largest_component_nodes.size() << " of " << graph->n()
                      << " nodes\n";
            graph = scc.largest_component_subgraph;
        }
        if (config.normalize_in_weights) graph = normalize_in_weights(*graph);
    } catch (const Error& e) {
        record(e);
        graph.reset();
    }

    // Stage 2: parameters and model.
    std::optional<SisModel> model;
    if (graph) {
        try {
            SisParams params;
            if (config.params.sampled) {
                const SampledParamsSpec& spec = *config.params.sampled;
                params = sample_params(spec.beta_range, spec.delta_range, config.h,
                                       graph->n(), spec.seed);
            } else {
                if (!config.params.beta || !config.params.delta)
                    config_fail("params must specify 'sampled' or both 'beta' and 'delta'");
                if (config.params.beta->size() != graph->n() ||
                    config.params.delta->size() != graph->n())
                    config_fail("explicit beta/delta must match the final node count " +
                                std::to_string(graph->n()));
                params.beta = *config.params.beta;
                params.delta = *config.params.delta;
                params.h = config.h;
            }
            model = build_and_validate(*graph, params).model;
        } catch (const Error& e) {
            record(e);
        }
    }

    // Stage 3: regime.
    std::optional<RegimeLabel> regime;
    if (model) {
        try {
            regime = classify_regime(*model);
            report["rho_threshold"] = regime->rho_threshold;
            report["regime"] = to_string(regime->regime);
            report["boundary_warning"] = regime->boundary_warning;
        } catch (const Error& e) {
            record(e);
        }
    }

    // Stage 4: endemic equilibrium and error system.
    std::optional<EquilibriumReport> equilibrium;
    std::optional<ErrorSystem> error_system;
    if (model && regime && regime->regime == Regime::EndemicExists) {
        try {
            equilibrium = solve_endemic(*model, kPipelineSolverTol);
            report["x_star"] = vector_to_json(equilibrium->x_star);
            report["bounds"] = {{"hi", vector_to_json(equilibrium->bounds.hi)},
                                {"lo_certified", equilibrium->bounds.lo_certified},
                                {"lo_apriori", equilibrium->bounds.lo_apriori},
                                {"m_index", equilibrium->bounds.m_index}};
        } catch (const Error& e) {
            record(e);
        }
        if (equilibrium) {
            try {
                error_system = build_error_system(*model, equilibrium->x_star);
                report["rho_xi"] = error_system->rho_xi;
                report["f_mu_residual"] = error_system->f_mu_residual;
            } catch (const Error& e) {
                record(e);
            }
        }
    }

    if (validate_only || !model) {
        RunResult result;
        result.exit_code = report["errors"].empty() ? 0 : 1;
        result.report = std::move(report);
        return result;
    }

    // Stage 5: simulation and diagnostics.
    try {
        const Vector x0 = build_x0(config.x0, model->n());
        const Trajectory traj = simulate(*model, x0, config.horizon, config.stop_tol);
        report["steps"] = traj.steps();

        const bool x0_is_zero = (x0.array() == 0.0).all();
        if (equilibrium) {
            const Vector& x_star = equilibrium->x_star;
            report["initial_class"] = to_string(classify_initial(x0, x_star));
            const OvershootReport overshoot = overshoot_check(traj, x_star);
            report["overshoot"] = {{"up", overshoot.up_violations},
                                   {"down", overshoot.down_violations}};
            if (error_system && !x0_is_zero) {
                try {
                    const LyapunovTrace trace =
                        lyapunov_trace(*model, x_star, *error_system, traj);
                    report["lyapunov_monotone"] = trace.monotone;
                } catch (const Error& e) {
                    record(e);
                }
            }
        } else if (x0_is_zero) {
            report["initial_class"] = to_string(InitialClass::Zero);
        }

        if (const auto hit = positivity_hitting_time(traj)) report["hitting_time"] = *hit;

        const Vector target = equilibrium ? equilibrium->x_star
                                          : Vector(Vector::Zero(model->n()));
        if (const auto rate = convergence_rate(traj, target))
            report["empirical_rate"] = *rate;

        const double err_zero = traj.back().lpNorm<Eigen::Infinity>();
        if (equilibrium) {
            const double err_star =
                (traj.back() - equilibrium->x_star).lpNorm<Eigen::Infinity>();
            if (err_star < kConvergedTol) {
                report["converged_to"] = "Endemic";
                report["final_error_inf"] = err_star;
            } else if (err_zero < kConvergedTol) {
                report["converged_to"] = "DiseaseFree";
                report["final_error_inf"] = err_zero;
            } else {
                report["converged_to"] = "Undecided";
                report["final_error_inf"] = err_star;
            }
        } else {
            report["converged_to"] = err_zero < kConvergedTol ? "DiseaseFree" : "Undecided";
            report["final_error_inf"] = err_zero;
        }

        write_trajectory_csv(config.trajectory_csv, traj);
    } catch (const Error& e) {
        record(e);
    }

    RunResult result;
    result.exit_code = report["errors"].empty() ? 0 : 1;
    try {
        std::ofstream out(config.report_json, std::ios::binary);
        if (!out)
            throw Error(ErrorCode::IoError,
                        "cannot open '" + config.report_json + "' for writing");
        out << report.dump(2) << "\n";
    } catch (const Error& e) {
        record(e);
        result.exit_code = 1;
    }
    result.report = std::move(report);
    return result;
}

SweepConfig parse_sweep_config(const json& j) {
    if (!j.is_object()) config_fail("sweep config must be a JSON object");
    SweepConfig config;
    config.base = parse_experiment_config(require_key(j, "base", "sweep config"));
    config.output_dir = j.value("output_dir", config.output_dir);
    config.workers = j.value("workers", 1);
    if (config.workers < 1) config_fail("workers must be >= 1");

    if (j.contains("grid")) {
        const json& grid = j["grid"];
        if (grid.contains("h"))
            for (const auto& v : grid["h"]) config.grid.h.push_back(v.get<double>());
        if (grid.contains("beta_range"))
            for (const auto& v : grid["beta_range"])
                config.grid.beta_range.push_back(parse_interval(v, "grid.beta_range"));
        if (grid.contains("delta_range"))
            for (const auto& v : grid["delta_range"])
                config.grid.delta_range.push_back(parse_interval(v, "grid.delta_range"));
        if (grid.contains("n"))
            for (const auto& v : grid["n"])
                config.grid.n.push_back(static_cast<Index>(v.get<long long>()));
        if (grid.contains("seeds"))
            for (const auto& v : grid["seeds"])
                config.grid.seeds.push_back(v.get<std::uint64_t>());
    }
    return config;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        config_fail("invalid JSON in '" + path + "': " + e.what());
    }
    return parse_sweep_config(j);
}

namespace {

struct SweepCell {
    std::string id;
    std::optional<ExperimentConfig> config;
    std::optional<Error> setup_error;
};

ExperimentConfig derive_cell_config(const SweepConfig& sweep,
                                    const std::optional<double>& h,
                                    const std::optional<Interval>& beta_range,
                                    const std::optional<Interval>& delta_range,
                                    const std::optional<Index>& n,
                                    const std::optional<std::uint64_t>& seed,
                                    const std::string& cell_id) {
    ExperimentConfig config = sweep.base;
    if (h) config.h = *h;
    if (beta_range || delta_range) {
        if (!config.params.sampled)
            config_fail("beta_range/delta_range sweep axes require sampled params");
        if (beta_range) config.params.sampled->beta_range = *beta_range;
        if (delta_range) config.params.sampled->delta_range = *delta_range;
    }
    if (n) {
        if (!config.network.generator)
            config_fail("n sweep axis requires a generated network");
        config.network.generator->n = *n;
    }
    if (seed) {
        if (config.network.generator) config.network.generator->seed = mix_seed(*seed, 1);
        if (config.params.sampled) config.params.sampled->seed = mix_seed(*seed, 2);
        if (config.x0.kind == X0Spec::Kind::UniformRange)
            config.x0.seed = mix_seed(*seed, 3);
    }
    const std::filesystem::path dir = std::filesystem::path(sweep.output_dir) / cell_id;
    config.trajectory_csv = (dir / "trajectory.csv").string();
    config.report_json = (dir / "report.json").string();
    return config;
}

std::string format_double_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
    if (config.grid.empty())
        throw Error(ErrorCode::EmptyGrid, "sweep grid has no axes");

    // Absent axes contribute a single "no override" slot.
    const std::size_t nh = std::max<std::size_t>(config.grid.h.size(), 1);
    const std::size_t nb = std::max<std::size_t>(config.grid.beta_range.size(), 1);
    const std::size_t nd = std::max<std::size_t>(config.grid.delta_range.size(), 1);
    const std::size_t nn = std::max<std::size_t>(config.grid.n.size(), 1);
    const std::size_t ns = std::max<std::size_t>(config.grid.seeds.size(), 1);

    std::vector<SweepCell> cells;
    std::size_t idx = 0;
    for (std::size_t ih = 0; ih < nh; ++ih)
        for (std::size_t ib = 0; ib < nb; ++ib)
            for (std::size_t id = 0; id < nd; ++id)
                for (std::size_t in = 0; in < nn; ++in)
                    for (std::size_t is = 0; is < ns; ++is) {
                        SweepCell cell;
                        char buf[24];
                        std::snprintf(buf, sizeof(buf), "cell_%04zu", idx);
                        cell.id = buf;
                        try {
                            cell.config = derive_cell_config(
                                config,
                                config.grid.h.empty() ? std::nullopt
                                                      : std::optional(config.grid.h[ih]),
                                config.grid.beta_range.empty()
                                    ? std::nullopt
                                    : std::optional(config.grid.beta_range[ib]),
                                config.grid.delta_range.empty()
                                    ? std::nullopt
                                    : std::optional(config.grid.delta_range[id]),
                                config.grid.n.empty() ? std::nullopt
                                                      : std::optional(config.grid.n[in]),
                                config.grid.seeds.empty()
                                    ? std::nullopt
                                    : std::optional(config.grid.seeds[is]),
                                cell.id);
                        } catch (const Error& e) {
                            cell.setup_error = e;
                        }
                        cells.push_back(std::move(cell));
                        ++idx;
                    }

    std::vector<json> reports(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::filesystem::create_directories(std::filesystem::path(config.output_dir) /
                                            cells[c].id);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= cells.size()) return;
            if (cells[c].setup_error) {
                json report;
                report["errors"] = json::array({error_entry(*cells[c].setup_error)});
                const auto path = std::filesystem::path(config.output_dir) / cells[c].id /
                                  "report.json";
                std::ofstream out(path, std::ios::binary);
                out << report.dump(2) << "\n";
                reports[c] = std::move(report);
                failures.fetch_add(1);
                continue;
            }
            try {
                RunResult result = run_experiment(*cells[c].config);
                if (result.exit_code != 0) failures.fetch_add(1);
                reports[c] = std::move(result.report);
            } catch (const std::exception& e) {
                json report;
                report["errors"] = json::array(
                    {{{"code", "cli.Internal"}, {"message", e.what()}}});
                reports[c] = std::move(report);
                failures.fetch_add(1);
            }
        }
    };

    const int thread_count =
        static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.workers),
                                               cells.size()));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SweepResult result;
    result.failed_cells = failures.load();
    const auto summary_path = std::filesystem::path(config.output_dir) / "summary.csv";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary)
        throw Error(ErrorCode::IoError,
                    "cannot open '" + summary_path.string() + "' for writing");
    summary << "cell_id,rho_threshold,regime,rho_xi,converged_to,steps\n";
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const json& report = reports[c];
        auto field = [&report](const char* key) -> std::string {
            if (!report.contains(key) || report[key].is_null()) return "";
            const json& v = report[key];
            if (v.is_number_float()) return format_double_17(v.get<double>());
            if (v.is_string()) return v.get<std::string>();
            return v.dump();
        };
        summary << cells[c].id << ',' << field("rho_threshold") << ',' << field("regime")
                << ',' << field("rho_xi") << ',' << field("converged_to") << ','
                << field("steps") << "\n";
        result.cell_ids.push_back(cells[c].id);
    }
    summary.close();
    result.summary_csv = summary_path.string();
    return result;
}

}  // namespace netsis
