#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netsis/error.hpp"
#include "netsis/experiment.hpp"
#include "netsis/graph.hpp"

namespace {

int cmd_validate(const std::string& config_path) {
    const netsis::ExperimentConfig config = netsis::load_experiment_config(config_path);
    const netsis::RunResult result = netsis::run_experiment(config, /*validate_only=*/true);
    std::cout << result.report.dump(2) << "\n";
    return result.exit_code;
}

int cmd_run(const std::string& config_path) {
    const netsis::ExperimentConfig config = netsis::load_experiment_config(config_path);
    const netsis::RunResult result = netsis::run_experiment(config);
    std::cout << result.report.dump(2) << "\n";
    if (result.exit_code == 0)
        std::cerr << "wrote " << config.trajectory_csv << " and " << config.report_json
                  << "\n";
    return result.exit_code;
}

int cmd_sweep(const std::string& config_path) {
    const netsis::SweepConfig config = netsis::load_sweep_config(config_path);
    const netsis::SweepResult result = netsis::run_sweep(config);
    std::cerr << "wrote " << result.summary_csv << " (" << result.cell_ids.size()
              << " cells, " << result.failed_cells << " failed)\n";
    return result.failed_cells == 0 ? 0 : 1;
}

int cmd_graph_info(const std::string& edgelist_path) {
    std::ifstream in(edgelist_path);
    if (!in)
        throw netsis::Error(netsis::ErrorCode::IoError,
                            "cannot open edge list '" + edgelist_path + "'");
    const netsis::Graph g = netsis::parse_edge_list(in);
    const netsis::SccAnalysis scc = netsis::strongly_connected_analysis(g);

    nlohmann::json info;
    info["n"] = g.n();
    info["edges"] = (g.weights.array() != 0.0).count();
    info["is_strongly_connected"] = scc.is_strongly_connected;
    info["component_count"] = scc.components.size();
    info["largest_component_size"] = scc.largest_component_nodes.size();
    std::cout << info.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and stability diagnostics for the discrete-time networked SIS model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string edgelist_path;

    auto* validate = app.add_subcommand("validate", "Check a config and its model assumptions");
    validate->add_option("config", config_path, "experiment config JSON")->required();

    auto* run = app.add_subcommand("run", "Run one experiment end to end");
    run->add_option("config", config_path, "experiment config JSON")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
    sweep->add_option("config", config_path, "sweep config JSON")->required();

    auto* graph_info = app.add_subcommand("graph-info", "Inspect an edge-list file");
    graph_info->add_option("edgelist", edgelist_path, "edge-list path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(config_path);
        if (run->parsed()) return cmd_run(config_path);
        if (sweep->parsed()) return cmd_sweep(config_path);
        if (graph_info->parsed()) return cmd_graph_info(edgelist_path);
    } catch (const netsis::Error& e) {
        nlohmann::json err;
        err["errors"] = {{{"code", e.qualified_code()}, {"message", e.what()}}};
        std::cout << err.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
