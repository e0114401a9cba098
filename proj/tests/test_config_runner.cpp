#include <cmath>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "bellgame/config.hpp"
#include "bellgame/runner.hpp"

using namespace bellgame;
using namespace bellgame::cli;

namespace {

const char* kClosedConfig =
    "protocol = closed\n"
    "rounds = 400\n"
    "seed = 7\n"
    "snapshot_stride = 50\n"
    "output = both\n"
    "history_mode = summary\n"
    "\n"
    "[scientist]\n"
    "kind = forcing_closed\n"
    "setting_policy = uniform\n"
    "\n"
    "[nature]\n"
    "kind = quantum\n"
    "fill_rule = uniform\n";

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("config parsing, defaults and validation") {
    const RunConfig config = parse_config(kClosedConfig);
    CHECK(config.protocol == Protocol::closed);
    CHECK(config.rounds == 400);
    CHECK(config.seed == 7);
    CHECK(config.snapshot_stride == 50);
    CHECK(config.scientist.kind == "forcing_closed");
    CHECK(config.nature.kind == "quantum");

    // defaults fill in per protocol
    const RunConfig minimal = parse_config("protocol = closed\nrounds = 10\nseed = 1\n");
    CHECK(minimal.scientist.kind == "forcing_closed");
    CHECK(minimal.nature.kind == "quantum");
    CHECK(minimal.snapshot_stride == 100);

    CHECK_THROWS_AS(parse_config("protocol = closed\nrounds = 0\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol = warp\nrounds = 5\nseed = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("protocol = closed\nrounds = 5\nseed = 1\nbogus = 3\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("protocol = closed\nrounds = 5\nseed = 1\n[nature]\nkind = iid\n"),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config("protocol = closed\nrounds = 5\nseed = 1\n[nature]\nkind = "
                     "deterministic\nlambda = +x++\n"),
        ConfigError);
}

TEST_CASE("config round trips through emit") {
    RunConfig config = parse_config(kClosedConfig);
    CHECK(parse_config(emit_config(config)) == config);

    RunConfig predictive = parse_config(
        "protocol = predictive\nrounds = 50\nseed = 3\n[predictive]\nalphabet = 4\nodds = 0.4, "
        "0.3, 0.2, 0.1\n[nature]\nkind = iid\nweights = 0.25, 0.25, 0.25, 0.25\n");
    CHECK(parse_config(emit_config(predictive)) == predictive);

    RunConfig locality = parse_config(
        "protocol = locality\nrounds = 80\nseed = 5\n[scientist]\nsetting_policy = round_robin\n");
    CHECK(parse_config(emit_config(locality)) == locality);

    RunConfig det = parse_config(
        "protocol = closed\nrounds = 12\nseed = 9\n[nature]\nkind = deterministic\nlambda = "
        "+--+\n");
    CHECK(parse_config(emit_config(det)) == det);
}

TEST_CASE("simulate: deterministic outputs with the documented shape") {
    const RunConfig config = parse_config(kClosedConfig);
    const SimulateResult first = simulate(config);
    const SimulateResult second = simulate(config);
    REQUIRE(first.exit_code == kExitOk);
    CHECK(first.csv == second.csv);    // byte-identical
    CHECK(first.json == second.json);

    std::istringstream csv(first.csv);
    std::string header;
    std::getline(csv, header);
    CHECK(header == kCsvHeader);
    CHECK(count_lines(first.csv) == 1 + 400 / 50);  // snapshots at the stride

    // closed runs leave the locality columns empty
    std::string row;
    std::getline(csv, row);
    CHECK(row.find(",,") != std::string::npos);

    const auto json_has = [&](const std::string& key) {
        return first.json.find("\"" + key + "\"") != std::string::npos;
    };
    CHECK(json_has("schema_version"));
    CHECK(json_has("config"));
    CHECK(json_has("logK_AB"));
    CHECK(json_has("logW_AB"));
    CHECK(json_has("conditional_frequencies"));
    CHECK(json_has("rates"));

    // output mode trims the artifacts
    RunConfig csv_only = config;
    csv_only.output = OutputMode::csv;
    const SimulateResult trimmed = simulate(csv_only);
    CHECK_FALSE(trimmed.csv.empty());
    CHECK(trimmed.json.empty());
}

TEST_CASE("simulate: locality and predictive column conventions") {
    RunConfig locality = parse_config("protocol = locality\nrounds = 60\nseed = 2\n");
    locality.snapshot_stride = 60;
    const SimulateResult loc = simulate(locality);
    REQUIRE(loc.exit_code == kExitOk);
    // row layout: n,s,t,lambda,oA,oB,logK_A,logK_B,(empty logK_AB)...
    std::istringstream in(loc.csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line.find(",,,,") != std::string::npos);  // closed-game block left empty

    RunConfig predictive = parse_config("protocol = predictive\nrounds = 30\nseed = 2\n");
    predictive.snapshot_stride = 30;
    const SimulateResult pred = simulate(predictive);
    REQUIRE(pred.exit_code == kExitOk);
    std::istringstream pin(pred.csv);
    std::getline(pin, line);
    std::getline(pin, line);
    CHECK(line.substr(0, 6) == "30,,,,");  // no settings, no lambda
}

TEST_CASE("simulate: protocol violations exit 3 with the round reported") {
    const RunConfig config = parse_config(
        "protocol = locality\nrounds = 100\nseed = 4\n[nature]\nkind = fixed_lambda\nlambda = "
        "++++\n");
    const SimulateResult result = simulate(config);
    CHECK(result.exit_code == kExitProtocolViolation);
    CHECK(result.violation_round >= 1);
    CHECK(result.violation_round <= 100);
    CHECK_FALSE(result.error.empty());
}

TEST_CASE("verify accepts its own stride-1 output and rejects tampering") {
    RunConfig config = parse_config(kClosedConfig);
    config.rounds = 300;
    config.snapshot_stride = 1;
    const SimulateResult sim = simulate(config);
    REQUIRE(sim.exit_code == kExitOk);

    const VerifyResult ok = verify_csv(sim.csv);
    CHECK(ok.exit_code == kExitOk);

    // flip one lambda character
    std::string tampered = sim.csv;
    const std::size_t pos = tampered.find(",+", tampered.find('\n'));
    REQUIRE(pos != std::string::npos);
    tampered[pos + 1] = '-';
    const VerifyResult bad = verify_csv(tampered);
    CHECK(bad.exit_code != kExitOk);

    // a strided trajectory cannot be verified
    config.snapshot_stride = 10;
    const VerifyResult strided = verify_csv(simulate(config).csv);
    CHECK(strided.exit_code == kExitConfigError);

    // locality trajectories are out of scope for verify
    const RunConfig locality = parse_config("protocol = locality\nrounds = 20\nseed = 2\n");
    const VerifyResult wrong = verify_csv(simulate(locality).csv);
    CHECK(wrong.exit_code == kExitConfigError);
}

TEST_CASE("sweep: cartesian cells, aggregates, and failure reporting") {
    const RunConfig base = parse_config(kClosedConfig);

    ParameterGrid grid = parse_grid("nature.kind = quantum, independent\n");
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    const SweepResult result = sweep(base, grid, seeds);
    REQUIRE(result.exit_code == kExitOk);
    CHECK(count_lines(result.csv) == 1 + 2 * 5);  // header + 10 rows
    CHECK(result.json.find("\"aggregates\"") != std::string::npos);
    CHECK(result.json.find("\"failed_cells\": 0") != std::string::npos);

    // an invalid override surfaces per cell, not as a global failure
    ParameterGrid broken = parse_grid("nature.kind = quantum, iid\n");
    const SweepResult partial = sweep(base, broken, {1, 2});
    REQUIRE(partial.exit_code == kExitOk);
    CHECK(partial.json.find("\"exit_code\": 2") != std::string::npos);
    CHECK(partial.json.find("\"failed_cells\": 2") != std::string::npos);

    CHECK_THROWS_AS(parse_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_grid("# only a comment\n"), ConfigError);
    const SweepResult no_seeds = sweep(base, grid, {});
    CHECK(no_seeds.exit_code == kExitConfigError);
}

TEST_CASE("oracle report carries the headline constants") {
    const std::string report = oracle_report_json();
    CHECK(report.find("\"mu\": 0.0732233047033631") != std::string::npos);
    CHECK(report.find("\"tsirelson\": -2.82842712474619") != std::string::npos);
    CHECK(report.find("\"k_rate_independent_uniform\": 0.3465735902799727") != std::string::npos);
    CHECK(report.find("\"witness\": true") != std::string::npos);
}
