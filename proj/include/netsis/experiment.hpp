#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netsis/model.hpp"
#include "netsis/types.hpp"

namespace netsis {

struct GeneratorSpec {
    Index n = 0;
    double extra_edge_prob = 0.0;
    std::uint64_t seed = 0;
};

struct NetworkSource {
    std::optional<std::string> edgelist_path;
    std::optional<GeneratorSpec> generator;
};

struct SampledParamsSpec {
    Interval beta_range;
    Interval delta_range;
    std::uint64_t seed = 0;
};

struct ParamsSpec {
    std::optional<Vector> beta;  // explicit vectors (both or neither)
    std::optional<Vector> delta;
    std::optional<SampledParamsSpec> sampled;
};

struct X0Spec {
    enum class Kind { Zero, Explicit, UniformRange };
    Kind kind = Kind::Zero;
    Vector explicit_x0;
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t seed = 0;
};

/// Fully determines a run: identical configs produce byte-identical outputs.
struct ExperimentConfig {
    NetworkSource network;
    bool normalize_in_weights = false;
    bool strict_scc = false;  // error instead of extracting the largest SCC
    ParamsSpec params;
    double h = 1.0;
    X0Spec x0;
    Index horizon = 1000;
    double stop_tol = 1e-12;
    std::string trajectory_csv = "trajectory.csv";
    std::string report_json = "report.json";
};

[[nodiscard]] ExperimentConfig parse_experiment_config(const nlohmann::json& j);
[[nodiscard]] ExperimentConfig load_experiment_config(const std::string& path);

struct RunResult {
    nlohmann::json report;
    int exit_code = 0;  // 0 iff report["errors"] is empty
};

/// Full pipeline: load/generate graph -> largest SCC -> optional in-weight
/// normalization -> model validation -> regime classification -> (endemic)
/// equilibrium, bounds, error system -> simulation -> trajectory diagnostics
/// -> trajectory CSV + report JSON. Module errors are collected into the
/// report's `errors` array with module-qualified codes rather than thrown.
/// With validate_only no simulation runs and no files are written.
[[nodiscard]] RunResult run_experiment(const ExperimentConfig& config,
                                       bool validate_only = false);

/// Writes states as lines `k,x_0,...,x_{N-1}` with 17-significant-digit
/// floats (lossless round-trip).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
[[nodiscard]] std::vector<Vector> read_trajectory_csv(const std::string& path);

struct SweepGrid {
    std::vector<double> h;
    std::vector<Interval> beta_range;
    std::vector<Interval> delta_range;
    std::vector<Index> n;
    std::vector<std::uint64_t> seeds;

    [[nodiscard]] bool empty() const {
        return h.empty() && beta_range.empty() && delta_range.empty() && n.empty() &&
               seeds.empty();
    }
};

struct SweepConfig {
    ExperimentConfig base;
    SweepGrid grid;
    std::string output_dir = "sweep";
    int workers = 1;
};

[[nodiscard]] SweepConfig load_sweep_config(const std::string& path);
[[nodiscard]] SweepConfig parse_sweep_config(const nlohmann::json& j);

struct SweepResult {
    std::string summary_csv;  // path of the written summary
    std::vector<std::string> cell_ids;
    int failed_cells = 0;
};

/// Runs one experiment per grid cell (cartesian product, axes in the fixed
/// order h, beta_range, delta_range, n, seeds). A grid seed fans out into
/// derived generator/params/x0 seeds. Cells may run on several workers;
/// outputs are keyed by cell id so the summary is identical for any worker
/// count. Per-cell failures are recorded and the sweep continues.
[[nodiscard]] SweepResult run_sweep(const SweepConfig& config);

}  // namespace netsis
