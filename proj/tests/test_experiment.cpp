#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "netsis/equilibrium.hpp"
#include "netsis/error.hpp"
#include "netsis/experiment.hpp"
#include "netsis/spectral.hpp"
#include "netsis/stability.hpp"

using namespace netsis;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

json endemic_config(const std::string& tag) {
    const std::string dir = "test_out/" + tag;
    std::filesystem::create_directories(dir);
    return json{
        {"network", {{"generator", {{"n", 25}, {"extra_edge_prob", 0.1}, {"seed", 11}}}}},
        {"normalize_in_weights", true},
        {"params",
         {{"sampled",
           {{"beta_range", {0.45, 0.55}}, {"delta_range", {0.25, 0.35}}, {"seed", 21}}}}},
        {"h", 1.0},
        {"x0", {{"uniform_range", {{"lo", 0.0}, {"hi", 0.2}, {"seed", 31}}}}},
        {"horizon", 3000},
        {"stop_tol", 1e-12},
        {"output",
         {{"trajectory_csv", dir + "/trajectory.csv"}, {"report_json", dir + "/report.json"}}}};
}

}  // namespace

TEST_CASE("config parsing validates structure") {
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(json::parse("[]"))), Error);
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(json::parse("{}"))), Error);

    json config = endemic_config("parse");
    config.erase("h");
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(config)), Error);

    config = endemic_config("parse");
    config["x0"] = "nonsense";
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(config)), Error);

    config = endemic_config("parse");
    config["network"] = json::object();
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(config)), Error);

    config = endemic_config("parse");
    config["x0"] = {{"uniform_range", {{"lo", 0.5}, {"hi", 0.2}, {"seed", 1}}}};
    CHECK_THROWS_AS(static_cast<void>(parse_experiment_config(config)), Error);
}

TEST_CASE("run_experiment on an endemic-regime config") {
    const ExperimentConfig config = parse_experiment_config(endemic_config("p2"));
    const RunResult result = run_experiment(config);
    REQUIRE(result.exit_code == 0);

    const json& report = result.report;
    CHECK(report["errors"].empty());
    CHECK(report["regime"] == "EndemicExists");
    CHECK(report["rho_threshold"].get<double>() > 1.0);
    CHECK(report["initial_class"] == "Dl");
    CHECK(report["overshoot"]["up"].get<long>() == 0);
    CHECK(report["converged_to"] == "Endemic");
    CHECK(report["final_error_inf"].get<double>() < 1e-6);
    CHECK(report["lyapunov_monotone"].get<bool>());
    CHECK(report["hitting_time"].get<long>() == 0);
    CHECK(report["rho_xi"].get<double>() < 1.0);
    CHECK(report["f_mu_residual"].get<double>() < 1e-8);
    CHECK(std::filesystem::exists(config.trajectory_csv));
    CHECK(std::filesystem::exists(config.report_json));
}

TEST_CASE("run_experiment surfaces assumption violations with nonzero exit") {
    json config = endemic_config("bad");
    config["params"]["sampled"]["beta_range"] = {0.9, 0.95};
    config["params"]["sampled"]["delta_range"] = {0.25, 0.35};
    // row-normalized weights give h (delta_i + beta_i) > 1 for every node
    const RunResult result = run_experiment(parse_experiment_config(config));
    CHECK(result.exit_code == 1);
    REQUIRE(result.report["errors"].size() == 1);
    CHECK(result.report["errors"][0]["code"] == "model.AssumptionThreeViolated");
}

TEST_CASE("validate_only stops before simulation") {
    const ExperimentConfig config = parse_experiment_config(endemic_config("val"));
    const RunResult result = run_experiment(config, /*validate_only=*/true);
    CHECK(result.exit_code == 0);
    CHECK(result.report["regime"] == "EndemicExists");
    CHECK(result.report["steps"].is_null());
    CHECK_FALSE(std::filesystem::exists("test_out/val/trajectory.csv"));
}

TEST_CASE("identical configs produce byte-identical outputs") {
    const json base = endemic_config("det1");
    json second = endemic_config("det2");

    const RunResult a = run_experiment(parse_experiment_config(base));
    const RunResult b = run_experiment(parse_experiment_config(second));
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);

    CHECK(slurp("test_out/det1/trajectory.csv") == slurp("test_out/det2/trajectory.csv"));
    const std::string report_a = slurp("test_out/det1/report.json");
    CHECK(report_a == slurp("test_out/det2/report.json"));

    // repeat run over the same paths reproduces the same bytes
    const RunResult c = run_experiment(parse_experiment_config(base));
    REQUIRE(c.exit_code == 0);
    CHECK(slurp("test_out/det1/report.json") == report_a);
}

TEST_CASE("trajectory CSV round-trips the recorded states exactly") {
    const ExperimentConfig config = parse_experiment_config(endemic_config("csv"));
    const RunResult result = run_experiment(config);
    REQUIRE(result.exit_code == 0);

    const std::vector<Vector> states = read_trajectory_csv(config.trajectory_csv);
    REQUIRE(static_cast<long>(states.size()) ==
            result.report["steps"].get<long>() + 1);

    // header shape
    std::ifstream in(config.trajectory_csv);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("k,x_0,x_1,", 0) == 0);

    // rebuild the model exactly as the pipeline did and re-run diagnostics
    Graph g = random_strongly_connected(25, 0.1, 11);
    g = normalize_in_weights(g);
    const SisParams params = sample_params({0.45, 0.55}, {0.25, 0.35}, 1.0, g.n(), 21);
    const SisModel model = build_and_validate(g, params).model;
    const EquilibriumReport eq = solve_endemic(model, 1e-14);
    const ErrorSystem es = build_error_system(model, eq.x_star);

    Trajectory traj;
    traj.states = states;

    // the written JSON must itself round-trip the doubles exactly
    const json report = json::parse(slurp(config.report_json));
    CHECK(report["rho_threshold"].get<double>() ==
          classify_regime(model).rho_threshold);
    for (Index i = 0; i < model.n(); ++i)
        CHECK(report["x_star"][static_cast<std::size_t>(i)].get<double>() == eq.x_star[i]);
    CHECK(report["bounds"]["lo_certified"].get<double>() == eq.bounds.lo_certified);
    CHECK(report["bounds"]["lo_apriori"].get<double>() == eq.bounds.lo_apriori);
    CHECK(report["rho_xi"].get<double>() == es.rho_xi);
    CHECK(report["f_mu_residual"].get<double>() == es.f_mu_residual);
    CHECK(report["hitting_time"].get<long>() == *positivity_hitting_time(traj));
    CHECK(to_string(classify_initial(traj.front(), eq.x_star)) ==
          report["initial_class"].get<std::string>());
    const OvershootReport overshoot = overshoot_check(traj, eq.x_star);
    CHECK(overshoot.up_violations == report["overshoot"]["up"].get<long>());
    CHECK(overshoot.down_violations == report["overshoot"]["down"].get<long>());
    const LyapunovTrace trace = lyapunov_trace(model, eq.x_star, es, traj);
    CHECK(trace.monotone == report["lyapunov_monotone"].get<bool>());
    const auto rate = convergence_rate(traj, eq.x_star);
    REQUIRE(rate.has_value());
    CHECK(*rate == report["empirical_rate"].get<double>());  // bit-for-bit
    CHECK((traj.back() - eq.x_star).lpNorm<Eigen::Infinity>() ==
          report["final_error_inf"].get<double>());
}

TEST_CASE("sweep over h produces per-cell reports and a summary") {
    json config;
    config["base"] = endemic_config("sweep_base");
    config["grid"] = {{"h", {0.25, 0.5, 1.0}}};
    config["output_dir"] = "test_out/sweep_h";

    const SweepResult result = run_sweep(parse_sweep_config(config));
    CHECK(result.failed_cells == 0);
    REQUIRE(result.cell_ids.size() == 3);

    const std::string summary = slurp(result.summary_csv);
    CHECK(summary.rfind("cell_id,rho_threshold,regime,rho_xi,converged_to,steps\n", 0) == 0);

    int endemic_count = 0;
    for (const std::string& id : result.cell_ids) {
        const json report =
            json::parse(slurp("test_out/sweep_h/" + id + "/report.json"));
        CHECK(report["errors"].empty());
        if (report["regime"] == "EndemicExists") ++endemic_count;
        CHECK(report["rho_threshold"].get<double>() > 1.0);
    }
    CHECK(endemic_count == 3);  // rho > 1 for every h in the grid
}

TEST_CASE("sweep rejects an empty grid") {
    json config;
    config["base"] = endemic_config("sweep_empty");
    config["output_dir"] = "test_out/sweep_empty";
    try {
        static_cast<void>(run_sweep(parse_sweep_config(config)));
        FAIL("expected EmptyGrid");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyGrid);
    }
}

TEST_CASE("sweep summary is independent of the worker count") {
    json config;
    config["base"] = endemic_config("sweep_w1");
    config["grid"] = {{"seeds", {1, 2, 3, 4, 5, 6}}};
    config["output_dir"] = "test_out/sweep_w1";
    config["workers"] = 1;
    const SweepResult serial = run_sweep(parse_sweep_config(config));

    config["base"] = endemic_config("sweep_w4");
    config["output_dir"] = "test_out/sweep_w4";
    config["workers"] = 4;
    const SweepResult parallel = run_sweep(parse_sweep_config(config));

    CHECK(slurp(serial.summary_csv) == slurp(parallel.summary_csv));
    for (std::size_t c = 0; c < serial.cell_ids.size(); ++c) {
        CHECK(slurp("test_out/sweep_w1/" + serial.cell_ids[c] + "/report.json") ==
              slurp("test_out/sweep_w4/" + parallel.cell_ids[c] + "/report.json"));
    }
}

TEST_CASE("seed grid cells differ from each other deterministically") {
    json config;
    config["base"] = endemic_config("sweep_seeds");
    config["grid"] = {{"seeds", {10, 20}}};
    config["output_dir"] = "test_out/sweep_seeds";
    const SweepResult result = run_sweep(parse_sweep_config(config));
    REQUIRE(result.cell_ids.size() == 2);
    CHECK(slurp("test_out/sweep_seeds/cell_0000/trajectory.csv") !=
          slurp("test_out/sweep_seeds/cell_0001/trajectory.csv"));
}

TEST_CASE("x0 zero stays at the disease-free equilibrium in the endemic regime") {
    json config = endemic_config("zero_x0");
    config["x0"] = "zero";
    const RunResult result = run_experiment(parse_experiment_config(config));
    CHECK(result.exit_code == 0);
    CHECK(result.report["initial_class"] == "Zero");
    CHECK(result.report["converged_to"] == "DiseaseFree");
    CHECK(result.report["hitting_time"].is_null());
    CHECK(result.report["lyapunov_monotone"].is_null());
}

TEST_CASE("non-strongly-connected edge lists fall back to the largest SCC") {
    std::filesystem::create_directories("test_out/scc");
    {
        std::ofstream out("test_out/scc/graph.edges");
        out << "0 1 1\n1 0 1\n1 2 1\n";  // node 2 is a sink
    }
    json config = endemic_config("scc");
    config["network"] = {{"edgelist", "test_out/scc/graph.edges"}};
    const RunResult result = run_experiment(parse_experiment_config(config));
    CHECK(result.exit_code == 0);
    CHECK(result.report["x_star"].size() == 2);

    config["strict_scc"] = true;
    const RunResult strict = run_experiment(parse_experiment_config(config));
    CHECK(strict.exit_code == 1);
    CHECK(strict.report["errors"][0]["code"] == "model.NotStronglyConnected");
}
