// bellgame: simulation and verification runner for the CHSH betting games.
//
// Subcommands:
//   simulate <config> [--out PREFIX]   run one configured game
//   sweep <config> --grid FILE --seeds s1,s2,... [--out PREFIX]
//   oracle [--out FILE]                constants and limiting rates
//   verify <trajectory.csv>            recheck a stride-1 closed-game CSV
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration/usage error,
// 3 protocol violation at runtime.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bellgame/runner.hpp"

namespace {

using namespace bellgame;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

int run_simulate(const std::string& config_path, const std::string& out_prefix) {
    const cli::RunConfig config = cli::parse_config(read_file(config_path));
    const cli::SimulateResult result = cli::simulate(config);
    if (result.exit_code != cli::kExitOk) {
        std::cerr << "simulate failed: " << result.error << "\n";
        return result.exit_code;
    }
    if (!result.csv.empty()) write_file(out_prefix + ".csv", result.csv);
    if (!result.json.empty()) write_file(out_prefix + ".json", result.json);
    std::cout << "wrote " << out_prefix << (result.csv.empty() ? "" : ".csv")
              << (result.json.empty() ? "" : " .json") << "\n";
    return cli::kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& grid_path,
              const std::string& seeds_arg, const std::string& out_prefix) {
    const cli::RunConfig base = cli::parse_config(read_file(config_path));
    const cli::ParameterGrid grid = cli::parse_grid(read_file(grid_path));
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(seeds_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    const cli::SweepResult result = cli::sweep(base, grid, seeds);
    if (result.exit_code != cli::kExitOk) {
        std::cerr << "sweep failed: " << result.error << "\n";
        return result.exit_code;
    }
    write_file(out_prefix + ".sweep.csv", result.csv);
    write_file(out_prefix + ".sweep.json", result.json);
    std::cout << "wrote " << out_prefix << ".sweep.csv .sweep.json\n";
    return cli::kExitOk;
}

int run_oracle(const std::string& out_path) {
    const std::string report = cli::oracle_report_json();
    if (out_path.empty()) {
        std::cout << report;
    } else {
        write_file(out_path, report);
        std::cout << "wrote " << out_path << "\n";
    }
    return cli::kExitOk;
}

int run_verify(const std::string& csv_path) {
    const cli::VerifyResult result = cli::verify_csv(read_file(csv_path));
    if (result.exit_code == cli::kExitOk)
        std::cout << result.detail << "\n";
    else
        std::cerr << "verify failed: " << result.detail << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH betting-game laboratory"};
    app.require_subcommand(1);

    std::string config_path, grid_path, seeds_arg, csv_path;
    std::string out_prefix = "run";
    std::string oracle_out;

    CLI::App* sim = app.add_subcommand("simulate", "run one configured game");
    sim->add_option("config", config_path, "configuration file")->required();
    sim->add_option("--out", out_prefix, "output prefix (default: run)");

    CLI::App* sw = app.add_subcommand("sweep", "run a parameter grid across seeds");
    sw->add_option("config", config_path, "base configuration file")->required();
    sw->add_option("--grid", grid_path, "grid file: one 'path = v1, v2' axis per line")->required();
    sw->add_option("--seeds", seeds_arg, "comma-separated seed list")->required();
    sw->add_option("--out", out_prefix, "output prefix (default: run)");

    CLI::App* orc = app.add_subcommand("oracle", "emit table constants and limiting rates");
    orc->add_option("--out", oracle_out, "output file (default: stdout)");

    CLI::App* ver = app.add_subcommand("verify", "recheck a stride-1 closed-game trajectory");
    ver->add_option("csv", csv_path, "trajectory CSV produced by simulate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : bellgame::cli::kExitConfigError;
    }

    try {
        if (sim->parsed()) return run_simulate(config_path, out_prefix);
        if (sw->parsed()) return run_sweep(config_path, grid_path, seeds_arg, out_prefix);
        if (orc->parsed()) return run_oracle(oracle_out);
        if (ver->parsed()) return run_verify(csv_path);
    } catch (const bellgame::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bellgame::cli::kExitConfigError;
    } catch (const bellgame::GameError& e) {
        std::cerr << "protocol violation: " << e.what() << "\n";
        return bellgame::cli::kExitProtocolViolation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return bellgame::cli::kExitConfigError;
    }
    return bellgame::cli::kExitConfigError;
}
