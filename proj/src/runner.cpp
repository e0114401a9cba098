#include "bellgame/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bellgame/oracle.hpp"
#include "bellgame/prng.hpp"

namespace bellgame::cli {

using nlohmann::json;

const char* const kCsvHeader =
    "n,s,t,lambda,omega_A,omega_B,logK_A,logK_B,logK_AB,logW_AB,kl_independence,"
    "C13,C14,C23,C24,S_n,max_cell_freq_error";

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double ols_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) return kNaN;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : points) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxx > 0.0 ? sxy / sxx : kNaN;
}

// slope of y against n over the final 50% of snapshots
template <typename Snapshots, typename Getter>
double tail_rate(const Snapshots& snaps, Getter get) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = snaps.size() / 2; i < snaps.size(); ++i)
        pts.emplace_back(static_cast<double>(snaps[i].n), get(snaps[i]));
    return ols_slope(pts);
}

json config_echo(const RunConfig& c) {
    json j;
    j["protocol"] = c.protocol == Protocol::predictive ? "predictive"
                    : c.protocol == Protocol::locality ? "locality"
                                                       : "closed";
    j["rounds"] = c.rounds;
    j["seed"] = c.seed;
    j["snapshot_stride"] = c.snapshot_stride;
    j["output"] = c.output == OutputMode::csv ? "csv" : c.output == OutputMode::json ? "json" : "both";
    j["history_mode"] = c.history == games::HistoryMode::full ? "full" : "summary";
    j["scientist"] = {
        {"kind", c.scientist.kind},
        {"setting_policy",
         c.scientist.setting_policy == strategies::SettingChoice::uniform ? "uniform"
                                                                          : "round_robin"}};
    j["nature"] = {{"kind", c.nature.kind},
                   {"fill_rule", c.nature.fill == FillRule::uniform ? "uniform" : "copy"},
                   {"lambda", c.nature.lambda},
                   {"p_quantum", c.nature.p_quantum}};
    if (!c.nature.weights.empty()) j["nature"]["weights"] = c.nature.weights;
    if (c.protocol == Protocol::predictive) {
        j["predictive"] = {{"alphabet", c.predictive.alphabet}};
        if (!c.predictive.odds.empty()) j["predictive"]["odds"] = c.predictive.odds;
    }
    return j;
}

json frequency_table(const stats::PairCounts& pairs) {
    json out;
    for (const SettingPair& u : all_setting_pairs()) {
        json row;
        for (std::size_t pi = 0; pi < 4; ++pi) {
            const OutcomePair pair = OutcomePair::from_index(pi);
            const std::string key{outcome_char(pair.a), outcome_char(pair.b)};
            if (pairs.setting_count(u) == 0)
                row[key] = nullptr;
            else
                row[key] = stats::conditional_frequency(pairs, pair.a, pair.b, u);
        }
        out[u.to_string()] = row;
    }
    return out;
}

double balancing_discrepancy(const stats::PairCounts& pairs) {
    double worst = 0.0;
    for (Outcome a : kOutcomes)
        for (int s = 1; s <= 2; ++s) {
            const std::uint64_t n_s = pairs.a_setting_count(s);
            if (n_s == 0) continue;
            const double lhs = static_cast<double>(pairs.a_outcome_count(a, s)) /
                               static_cast<double>(n_s);
            for (int t = 3; t <= 4; ++t) {
                const SettingPair u(s, t);
                if (pairs.setting_count(u) == 0) continue;
                const double rhs = static_cast<double>(pairs.context_outcome_count(a, u)) /
                                   static_cast<double>(pairs.setting_count(u));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        }
    return worst;
}

// ---------------------------------------------------------------------------
// per-protocol simulation
// ---------------------------------------------------------------------------

struct Artifacts {
    std::string csv;
    json summary;
};

std::unique_ptr<games::ClosedNaturePolicy> make_closed_nature(const RunConfig& c) {
    const std::uint64_t seed = make_stream(c.seed, "nature").next();
    if (c.nature.kind == "quantum" || c.nature.kind == "md_lhv")
        return std::make_unique<strategies::QuantumNature>(seed, c.nature.fill);
    if (c.nature.kind == "independent") {
        if (c.nature.weights.empty())
            return std::make_unique<strategies::IndependentLhvNature>(seed);
        std::array<double, 16> law{};
        std::copy(c.nature.weights.begin(), c.nature.weights.end(), law.begin());
        return std::make_unique<strategies::IndependentLhvNature>(seed, law);
    }
    if (c.nature.kind == "deterministic")
        return std::make_unique<strategies::DeterministicNature>(
            HiddenVariable::from_string(c.nature.lambda));
    if (c.nature.kind == "mixture")
        return std::make_unique<strategies::MixtureNature>(seed, c.nature.p_quantum, c.nature.fill);
    throw ConfigError("unknown closed-game nature kind: " + c.nature.kind);
}

Artifacts simulate_closed(const RunConfig& c) {
    strategies::ForcingClosedScientist scientist(make_stream(c.seed, "scientist").next(),
                                                 c.scientist.setting_policy);
    const std::unique_ptr<games::ClosedNaturePolicy> nature = make_closed_nature(c);

    games::RunOptions options;
    options.rounds = c.rounds;
    options.snapshot_stride = c.snapshot_stride;
    options.history = c.history;
    const games::ClosedTrajectory traj = games::run_closed_game(scientist, *nature, options);

    Artifacts out;
    std::string& csv = out.csv;
    csv = kCsvHeader;
    csv += '\n';
    for (const games::ClosedSnapshot& s : traj.snapshots) {
        csv += std::to_string(s.n);
        csv += ',' + std::to_string(s.setting.a()) + ',' + std::to_string(s.setting.b());
        csv += ',' + s.lambda.to_string();
        csv += ',' + std::to_string(outcome_value(s.omega_a));
        csv += ',' + std::to_string(outcome_value(s.omega_b));
        csv += ",,";  // logK_A, logK_B
        csv += ',' + fmt(s.log_k) + ',' + fmt(s.log_w) + ',' + fmt(s.kl);
        for (double cval : s.correlations) csv += ',' + fmt(cval);
        csv += ',' + fmt(s.chsh) + ',' + fmt(s.max_cell_gap);
        csv += '\n';
    }

    const games::ClosedSnapshot& last = traj.snapshots.back();
    const double n = static_cast<double>(traj.state.round);
    json final_values = {
        {"n", traj.state.round},
        {"logK_AB", traj.state.log_k.log_value},
        {"logW_AB", traj.state.log_w},
        {"logK_AB_per_n", traj.state.log_k.log_value / n},
        {"logW_AB_per_n", traj.state.log_w / n},
        {"max_logK_AB", traj.max_log_k},
        {"max_logW_AB", traj.max_log_w},
        {"kl_independence", last.kl},
        {"max_cell_gap", last.max_cell_gap},
        {"C13", last.correlations[0]},
        {"C14", last.correlations[1]},
        {"C23", last.correlations[2]},
        {"C24", last.correlations[3]},
        {"S_n", last.chsh},
        {"conditional_frequencies", frequency_table(traj.state.pairs)},
    };
    json rates = {
        {"logK_AB", tail_rate(traj.snapshots, [](const auto& s) { return s.log_k; })},
        {"logW_AB", tail_rate(traj.snapshots, [](const auto& s) { return s.log_w; })},
    };
    out.summary = {{"schema_version", kSchemaVersion},
                   {"config", config_echo(c)},
                   {"final", final_values},
                   {"rates", rates}};
    return out;
}

Artifacts simulate_locality(const RunConfig& c) {
    strategies::TheoremTwoScientistA scientist_a(make_stream(c.seed, "scientist_a").next(),
                                                 c.scientist.setting_policy);
    strategies::TheoremTwoScientistB scientist_b;
    strategies::UniformNatureA nature_a(make_stream(c.seed, "nature_a").next());

    std::unique_ptr<games::NatureBPolicy> nature_b;
    if (c.nature.kind == "locality_exploit") {
        nature_b = std::make_unique<strategies::LocalityExploitNatureB>(
            make_stream(c.seed, "nature_b").next());
    } else if (c.nature.kind == "fixed_lambda") {
        nature_b = std::make_unique<strategies::FixedLambdaNatureB>(
            HiddenVariable::from_string(c.nature.lambda));
    } else {
        throw ConfigError("unknown locality nature kind: " + c.nature.kind);
    }

    games::RunOptions options;
    options.rounds = c.rounds;
    options.snapshot_stride = c.snapshot_stride;
    options.history = c.history;
    const games::LocalityTrajectory traj =
        games::run_locality_game(scientist_a, nature_a, scientist_b, *nature_b, options);

    Artifacts out;
    std::string& csv = out.csv;
    csv = kCsvHeader;
    csv += '\n';
    for (const games::LocalitySnapshot& s : traj.snapshots) {
        csv += std::to_string(s.n);
        csv += ',' + std::to_string(s.s) + ',' + std::to_string(s.t);
        csv += ',' + s.lambda.to_string();
        csv += ',' + std::to_string(outcome_value(s.omega_a));
        csv += ',' + std::to_string(outcome_value(s.omega_b));
        csv += ',' + fmt(s.log_k_a) + ',' + fmt(s.log_k_b);
        csv += ",,,";  // logK_AB, logW_AB, kl
        for (double cval : s.correlations) csv += ',' + fmt(cval);
        csv += ',' + fmt(s.chsh);
        csv += ',';  // max_cell_freq_error
        csv += '\n';
    }

    const games::LocalitySnapshot& last = traj.snapshots.back();
    const double n = static_cast<double>(traj.state.round);
    json final_values = {
        {"n", traj.state.round},
        {"logK_A", traj.state.log_k_a.log_value},
        {"logK_B", traj.state.log_k_b.log_value},
        {"logK_A_per_n", traj.state.log_k_a.log_value / n},
        {"logK_B_per_n", traj.state.log_k_b.log_value / n},
        {"max_logK_A", traj.max_log_k_a},
        {"max_logK_B", traj.max_log_k_b},
        {"C13", last.correlations[0]},
        {"C14", last.correlations[1]},
        {"C23", last.correlations[2]},
        {"C24", last.correlations[3]},
        {"S_n", last.chsh},
        {"balancing_discrepancy", balancing_discrepancy(traj.state.pairs)},
        {"conditional_frequencies", frequency_table(traj.state.pairs)},
    };
    json rates = {
        {"logK_A", tail_rate(traj.snapshots, [](const auto& s) { return s.log_k_a; })},
        {"logK_B", tail_rate(traj.snapshots, [](const auto& s) { return s.log_k_b; })},
    };
    out.summary = {{"schema_version", kSchemaVersion},
                   {"config", config_echo(c)},
                   {"final", final_values},
                   {"rates", rates}};
    return out;
}

Artifacts simulate_predictive(const RunConfig& c) {
    const std::size_t alphabet = static_cast<std::size_t>(c.predictive.alphabet);
    std::vector<double> odds = c.predictive.odds;
    if (odds.empty()) odds.assign(alphabet, 1.0 / static_cast<double>(alphabet));
    std::vector<double> reality = c.nature.weights;
    if (reality.empty()) reality = odds;

    const gtp::BettingDistribution odds_dist{odds};
    const gtp::SymbolStream stream =
        gtp::iid_stream(reality, make_stream(c.seed, "reality").next());

    gtp::PredictiveOptions options;
    options.rounds = c.rounds;
    options.snapshot_stride = c.snapshot_stride;
    const gtp::PredictiveTrajectory traj = gtp::run_predictive_game(odds_dist, stream, options);

    Artifacts out;
    std::string& csv = out.csv;
    csv = kCsvHeader;
    csv += '\n';
    for (const gtp::PredictiveSnapshot& s : traj.snapshots) {
        csv += std::to_string(s.n);
        csv += ",,,";                          // s, t, lambda
        csv += ',' + std::to_string(s.symbol);  // omega_A carries the symbol
        csv += ',';                             // omega_B
        csv += ',' + fmt(s.capital.log_value);
        csv += ",,,,,,,,,";  // logK_B .. S_n
        csv += ',' + fmt(s.max_freq_error);
        csv += '\n';
    }

    const double n = static_cast<double>(c.rounds);
    json final_values = {
        {"n", c.rounds},
        {"logK", traj.final_capital.log_value},
        {"logK_per_n", traj.final_capital.log_value / n},
        {"max_logK", traj.max_log_value},
        {"max_freq_error", traj.snapshots.back().max_freq_error},
        {"counts", traj.final_counts.counts},
    };
    json rates = {
        {"logK", tail_rate(traj.snapshots, [](const auto& s) { return s.capital.log_value; })},
    };
    out.summary = {{"schema_version", kSchemaVersion},
                   {"config", config_echo(c)},
                   {"final", final_values},
                   {"rates", rates}};
    return out;
}

}  // namespace

SimulateResult simulate(const RunConfig& config) {
    SimulateResult result;
    try {
        Artifacts artifacts;
        switch (config.protocol) {
            case Protocol::closed: artifacts = simulate_closed(config); break;
            case Protocol::locality: artifacts = simulate_locality(config); break;
            case Protocol::predictive: artifacts = simulate_predictive(config); break;
        }
        if (config.output != OutputMode::json) result.csv = std::move(artifacts.csv);
        if (config.output != OutputMode::csv) result.json = artifacts.summary.dump(2) + "\n";
    } catch (const ConfigError& e) {
        result.exit_code = kExitConfigError;
        result.error = e.what();
    } catch (const GameError& e) {
        result.exit_code = kExitProtocolViolation;
        result.violation_round = e.round();
        result.error = std::string(e.what()) + " (round " + std::to_string(e.round()) + ")";
    }
    return result;
}

SweepResult sweep(const RunConfig& base, const ParameterGrid& grid,
                  const std::vector<std::uint64_t>& seeds) {
    SweepResult result;
    if (seeds.empty()) {
        result.exit_code = kExitConfigError;
        result.error = "no seeds given";
        return result;
    }

    struct Cell {
        std::vector<std::pair<std::string, std::string>> point;
        std::uint64_t seed = 0;
        RunConfig config;
        std::string config_error;
    };
    std::vector<Cell> cells;
    try {
        for (std::size_t p = 0; p < grid.point_count(); ++p) {
            for (const std::uint64_t seed : seeds) {
                Cell cell;
                cell.point = grid.point(p);
                cell.seed = seed;
                cell.config = base;
                try {
                    for (const auto& [key, value] : cell.point)
                        apply_override(cell.config, key, value);
                    cell.config.seed = seed;
                    cell.config.output = OutputMode::json;
                } catch (const ConfigError& e) {
                    cell.config_error = e.what();
                }
                cells.push_back(std::move(cell));
            }
        }
    } catch (const ConfigError& e) {
        result.exit_code = kExitConfigError;
        result.error = e.what();
        return result;
    }

    // cells are independent; run them on a small pool and collect by index
    std::vector<SimulateResult> runs(cells.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::min<std::size_t>({cells.size(), std::thread::hardware_concurrency(), 8});
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::max<std::size_t>(workers, 1); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                if (!cells[i].config_error.empty()) {
                    runs[i].exit_code = kExitConfigError;
                    runs[i].error = cells[i].config_error;
                } else {
                    runs[i] = simulate(cells[i].config);
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();

    // rows
    json rows = json::array();
    std::set<std::string> scalar_keys;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        json row;
        json point;
        for (const auto& [key, value] : cells[i].point) point[key] = value;
        row["point"] = point;
        row["seed"] = cells[i].seed;
        row["exit_code"] = runs[i].exit_code;
        if (runs[i].exit_code != kExitOk) {
            row["error"] = runs[i].error;
        } else {
            const json summary = json::parse(runs[i].json);
            row["final"] = summary["final"];
            row["rates"] = summary["rates"];
            for (const auto& [k, v] : summary["final"].items())
                if (v.is_number()) scalar_keys.insert(k);
            for (const auto& [k, v] : summary["rates"].items())
                if (v.is_number()) scalar_keys.insert("rate_" + k);
        }
        rows.push_back(std::move(row));
    }

    // per-point aggregates across seeds
    json aggregates = json::array();
    const std::size_t per_point = seeds.size();
    for (std::size_t p = 0; p < cells.size(); p += per_point) {
        json agg;
        agg["point"] = rows[p]["point"];
        std::size_t failed = 0;
        json metrics;
        for (const std::string& key : scalar_keys) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = p; i < p + per_point; ++i) {
                if (rows[i]["exit_code"] != kExitOk) continue;
                const bool is_rate = key.rfind("rate_", 0) == 0;
                const json& src = is_rate ? rows[i]["rates"][key.substr(5)] : rows[i]["final"][key];
                if (!src.is_number()) continue;
                const double v = src.get<double>();
                lo = std::min(lo, v);
                hi = std::max(hi, v);
                sum += v;
                ++count;
            }
            if (count > 0)
                metrics[key] = {{"mean", sum / static_cast<double>(count)}, {"min", lo}, {"max", hi}};
        }
        for (std::size_t i = p; i < p + per_point; ++i)
            if (rows[i]["exit_code"] != kExitOk) ++failed;
        agg["metrics"] = metrics;
        agg["failed_cells"] = failed;
        aggregates.push_back(std::move(agg));
    }

    json doc = {{"schema_version", kSchemaVersion},
                {"base_config", config_echo(base)},
                {"seeds", seeds},
                {"rows", rows},
                {"aggregates", aggregates}};
    json axes = json::array();
    for (const auto& [key, values] : grid.axes) axes.push_back({{"key", key}, {"values", values}});
    doc["axes"] = axes;
    result.json = doc.dump(2) + "\n";

    // flat CSV: point columns, seed, exit code, scalar metrics
    std::string csv;
    for (const auto& [key, values] : grid.axes) csv += key + ',';
    csv += "seed,exit_code";
    for (const std::string& key : scalar_keys) csv += ',' + key;
    csv += '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (const auto& [key, value] : cells[i].point) csv += value + ',';
        csv += std::to_string(cells[i].seed) + ',' + std::to_string(runs[i].exit_code);
        for (const std::string& key : scalar_keys) {
            csv += ',';
            if (rows[i]["exit_code"] == kExitOk) {
                const bool is_rate = key.rfind("rate_", 0) == 0;
                const json& src = is_rate ? rows[i]["rates"][key.substr(5)] : rows[i]["final"][key];
                if (src.is_number()) csv += fmt(src.get<double>());
            }
        }
        csv += '\n';
    }
    result.csv = std::move(csv);
    return result;
}

std::string oracle_report_json() {
    const ChshTable& table = canonical_chsh_table();
    const oracle::JointWitnessReport witness = oracle::no_joint_witness_report(table);
    const oracle::LimitingRates quantum_uniform =
        oracle::limiting_rates_quantum(FillRule::uniform, table);
    const oracle::LimitingRates quantum_copy =
        oracle::limiting_rates_quantum(FillRule::copy_partner, table);
    std::array<double, 16> uniform_law{};
    uniform_law.fill(1.0 / 16.0);
    const oracle::LimitingRates independent =
        oracle::limiting_rates_independent(uniform_law, table);
    const oracle::LimitingRates mixture_half =
        oracle::limiting_rates_mixture(0.5, FillRule::uniform, table);
    const oracle::LimitingRates deterministic = oracle::limiting_rates_deterministic(
        HiddenVariable::from_string("++++"), table);

    json j = {
        {"schema_version", kSchemaVersion},
        {"mu", table.mu()},
        {"nu", table.nu()},
        {"correlations",
         {{"C13", table.correlation(SettingPair(1, 3))},
          {"C14", table.correlation(SettingPair(1, 4))},
          {"C23", table.correlation(SettingPair(2, 3))},
          {"C24", table.correlation(SettingPair(2, 4))}}},
        {"tsirelson", oracle::table_tsirelson(table)},
        {"no_joint_witness",
         {{"tsirelson", witness.tsirelson},
          {"bound_violated", witness.bound_violated},
          {"feasibility_residual", witness.feasibility_residual},
          {"infeasible", witness.infeasible},
          {"witness", witness.bound_violated && witness.infeasible}}},
        {"k_rate_independent_uniform", independent.k_rate},
        {"limiting",
         {{"kl_quantum_uniform_fill", quantum_uniform.kl},
          {"k_rate_quantum_uniform_fill", quantum_uniform.k_rate},
          {"kl_md_lhv_copy_fill", quantum_copy.kl},
          {"k_rate_md_lhv_copy_fill", quantum_copy.k_rate},
          {"kl_independent_uniform", independent.kl},
          {"k_rate_independent_uniform", independent.k_rate},
          {"kl_mixture_half_uniform_fill", mixture_half.kl},
          {"k_rate_mixture_half_uniform_fill", mixture_half.k_rate},
          {"kl_deterministic_all_plus", deterministic.kl},
          {"k_rate_deterministic_all_plus", deterministic.k_rate}}},
    };
    return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool close(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

VerifyResult verify_csv(const std::string& csv_text) {
    VerifyResult out;
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        out.exit_code = kExitConfigError;
        out.detail = "unrecognized CSV header";
        return out;
    }

    stats::ContingencyCounts counts;
    stats::PairCounts pairs;
    double log_w = 0.0;
    std::uint64_t expected_n = 0;

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_row(line);
        if (f.size() != 17) {
            out.exit_code = kExitConfigError;
            out.detail = "line " + std::to_string(lineno) + ": expected 17 columns";
            return out;
        }
        try {
        const auto fail = [&](const std::string& what) {
            out.exit_code = kExitVerifyFailed;
            out.detail = "line " + std::to_string(lineno) + ": " + what;
        };

        if (f[8].empty() || !f[6].empty()) {
            out.exit_code = kExitConfigError;
            out.detail = "verify supports closed-game trajectories only";
            return out;
        }
        ++expected_n;
        if (std::stoull(f[0]) != expected_n) {
            out.exit_code = kExitConfigError;
            out.detail = "verify needs a stride-1 trajectory (gap before line " +
                         std::to_string(lineno) + ")";
            return out;
        }

        HiddenVariable lambda = HiddenVariable::from_string(f[3]);
        SettingPair u(std::stoi(f[1]), std::stoi(f[2]));
        if (std::stoi(f[4]) != outcome_value(lambda.project(u.a())) ||
            std::stoi(f[5]) != outcome_value(lambda.project(u.b()))) {
            fail("outcomes disagree with the hidden variable's projections");
            return out;
        }

        counts.increment(lambda, u);
        pairs.add_round(lambda, u);
        log_w += std::log(static_cast<double>(counts.n() * counts.count(lambda.index(), u.index()))) -
                 std::log(static_cast<double>(counts.tau_count(lambda.index()) *
                                              counts.setting_count(u.index())));

        if (!close(log_w, std::stod(f[9]))) {
            fail("logW_AB mismatch: recomputed " + fmt(log_w) + ", recorded " + f[9]);
            return out;
        }
        if (!close(stats::kl_independence(counts), std::stod(f[10]))) {
            fail("kl_independence mismatch");
            return out;
        }
        for (const SettingPair& su : all_setting_pairs()) {
            const std::string& cell = f[11 + su.index()];
            if (pairs.setting_count(su) == 0) {
                if (!cell.empty()) {
                    fail("correlation recorded for an unvisited setting " + su.to_string());
                    return out;
                }
                continue;
            }
            if (cell.empty() ||
                !close(stats::empirical_correlation(pairs, su, true), std::stod(cell))) {
                fail("C" + std::to_string(su.a()) + std::to_string(su.b()) + " mismatch");
                return out;
            }
        }
        if (!f[15].empty()) {
            double c[4];
            for (const SettingPair& su : all_setting_pairs())
                c[su.index()] = stats::empirical_correlation(pairs, su, true);
            if (!close(stats::chsh_statistic(c[0], c[1], c[2], c[3]), std::stod(f[15]))) {
                fail("S_n mismatch");
                return out;
            }
        }
        if (!close(stats::max_factorization_gap(counts), std::stod(f[16]))) {
            fail("max_cell_freq_error mismatch");
            return out;
        }
        } catch (const std::exception& e) {
            out.exit_code = kExitConfigError;
            out.detail = "line " + std::to_string(lineno) + ": malformed row (" + e.what() + ")";
            return out;
        }
    }

    if (expected_n == 0) {
        out.exit_code = kExitConfigError;
        out.detail = "no data rows";
        return out;
    }

    // cross-check the recursion against the multinomial closed form
    const double closed_form = stats::w_closed_form(counts);
    if (!close(log_w, closed_form, 1e-8)) {
        out.exit_code = kExitVerifyFailed;
        out.detail = "final logW_AB recursion (" + fmt(log_w) + ") disagrees with closed form (" +
                     fmt(closed_form) + ")";
        return out;
    }
    out.detail = "verified " + std::to_string(expected_n) + " rounds; final logW_AB " + fmt(log_w);
    return out;
}

}  // namespace bellgame::cli
