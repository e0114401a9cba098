#include "bellgame/games.hpp"

#include <cmath>
#include <limits>

namespace bellgame::games {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_bets(const std::array<gtp::BettingDistribution, 4>& bets, std::uint64_t round) {
    for (const auto& bet : bets)
        if (bet.size() != 4) throw GameError("closed-game bet must cover the 4 outcome pairs", round);
}

void check_bets(const std::array<gtp::BettingDistribution, 2>& bets, std::uint64_t round) {
    for (const auto& bet : bets)
        if (bet.size() != 2) throw GameError("locality-game bet must cover the 2 outcomes", round);
}

std::array<double, 4> context_correlations(const stats::PairCounts& pairs, double& chsh_out) {
    std::array<double, 4> c{kNaN, kNaN, kNaN, kNaN};
    bool all_defined = true;
    for (const SettingPair& u : all_setting_pairs()) {
        if (pairs.setting_count(u) == 0) {
            all_defined = false;
            continue;
        }
        c[u.index()] = stats::empirical_correlation(pairs, u, /*use_context=*/true);
    }
    chsh_out = all_defined ? stats::chsh_statistic(c[0], c[1], c[2], c[3]) : kNaN;
    return c;
}

}  // namespace

void apply_closed_round(ClosedGameState& state, const ClosedScientistMove& move,
                        const HiddenVariable& lambda, const ChshTable& table,
                        HistoryMode history) {
    const std::uint64_t round = state.round + 1;
    check_bets(move.bets_by_setting, round);

    const SettingPair u = move.setting;
    const Outcome omega_a = lambda.project(u.a());
    const Outcome omega_b = lambda.project(u.b());
    const OutcomePair pair{omega_a, omega_b};

    state.log_k.log_value +=
        std::log(move.bets_by_setting[u.index()][pair.index()]) - std::log(table.odds(pair, u));
    if (!std::isfinite(state.log_k.log_value))
        throw GameError("non-finite capital in the closed game", round);

    // counts are incremented first; the W factor uses the distributions
    // that include the current round
    state.counts.increment(lambda, u);
    state.pairs.add_round(lambda, u);
    const std::uint64_t joint = state.counts.count(lambda.index(), u.index());
    const std::uint64_t tau_m = state.counts.tau_count(lambda.index());
    const std::uint64_t u_m = state.counts.setting_count(u.index());
    state.log_w += std::log(static_cast<double>(state.counts.n() * joint)) -
                   std::log(static_cast<double>(tau_m * u_m));

    state.round = round;
    if (history == HistoryMode::full)
        state.history.push_back({u, lambda, omega_a, omega_b});
}

ClosedTrajectory run_closed_game(ClosedScientistPolicy& scientist, ClosedNaturePolicy& nature,
                                 const RunOptions& options, const ChshTable& table,
                                 const ClosedRoundCallback& per_round) {
    if (options.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (options.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");

    ClosedTrajectory out;
    out.max_log_k = out.state.log_k.log_value;
    out.max_log_w = out.state.log_w;

    for (std::uint64_t n = 1; n <= options.rounds; ++n) {
        const ClosedScientistMove move = scientist.choose();
        const HiddenVariable lambda = nature.respond(move);
        apply_closed_round(out.state, move, lambda, table, options.history);

        const ClosedRoundRecord record{move.setting, lambda, lambda.project(move.setting.a()),
                                       lambda.project(move.setting.b())};
        scientist.observe(record);
        nature.observe(record);
        if (per_round) per_round(record, out.state);

        out.max_log_k = std::max(out.max_log_k, out.state.log_k.log_value);
        out.max_log_w = std::max(out.max_log_w, out.state.log_w);

        if (n % options.snapshot_stride == 0 || n == options.rounds) {
            ClosedSnapshot snap;
            snap.n = n;
            snap.setting = record.setting;
            snap.lambda = record.lambda;
            snap.omega_a = record.omega_a;
            snap.omega_b = record.omega_b;
            snap.log_k = out.state.log_k.log_value;
            snap.log_w = out.state.log_w;
            snap.kl = stats::kl_independence(out.state.counts);
            snap.correlations = context_correlations(out.state.pairs, snap.chsh);
            snap.max_cell_gap = stats::max_factorization_gap(out.state.counts);
            out.snapshots.push_back(snap);
        }
    }
    return out;
}

void apply_locality_round(LocalityGameState& state, const LocalityAMove& a_move, Outcome omega_a,
                          const LocalityBMove& b_move, const HiddenVariable& lambda,
                          const ChshTable& table, HistoryMode history) {
    const std::uint64_t round = state.round + 1;
    check_bets(a_move.bets_by_setting, round);
    check_bets(b_move.bets_by_setting, round);
    if (a_move.setting != 1 && a_move.setting != 2)
        throw InvalidSetting("A-side setting must be 1 or 2", round);
    if (b_move.setting != 3 && b_move.setting != 4)
        throw InvalidSetting("B-side setting must be 3 or 4", round);

    const int s = a_move.setting;
    const int t = b_move.setting;
    if (lambda.project(s) != omega_a)
        throw ConsistencyViolation("Nature B left the preimage of A's outcome", round);

    const Outcome omega_b = lambda.project(t);
    const SettingPair u(s, t);

    state.log_k_a.log_value +=
        std::log(a_move.bets_by_setting[static_cast<std::size_t>(s - 1)][outcome_index(omega_a)]) -
        std::log(table.marginal_odds(omega_a, s));
    state.log_k_b.log_value +=
        std::log(b_move.bets_by_setting[static_cast<std::size_t>(t - 3)][outcome_index(omega_b)]) -
        std::log(table.conditional_odds(omega_b, omega_a, u));
    if (!std::isfinite(state.log_k_a.log_value) || !std::isfinite(state.log_k_b.log_value))
        throw GameError("non-finite capital in the locality game", round);

    state.pairs.add_round(lambda, u);
    state.round = round;
    if (history == HistoryMode::full)
        state.history.push_back({s, omega_a, t, lambda, omega_b});
}

LocalityTrajectory run_locality_game(ScientistAPolicy& scientist_a, NatureAPolicy& nature_a,
                                     ScientistBPolicy& scientist_b, NatureBPolicy& nature_b,
                                     const RunOptions& options, const ChshTable& table,
                                     const LocalityRoundCallback& per_round) {
    if (options.rounds < 1) throw ConfigError("rounds must be >= 1");
    if (options.snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");

    LocalityTrajectory out;
    out.max_log_k_a = out.state.log_k_a.log_value;
    out.max_log_k_b = out.state.log_k_b.log_value;

    for (std::uint64_t n = 1; n <= options.rounds; ++n) {
        const LocalityAMove a_move = scientist_a.choose();
        const Outcome omega_a = nature_a.respond(a_move);
        const LocalityBMove b_move = scientist_b.choose(a_move, omega_a);
        const HiddenVariable lambda = nature_b.respond(a_move, omega_a, b_move);
        apply_locality_round(out.state, a_move, omega_a, b_move, lambda, table, options.history);

        const LocalityRoundRecord record{a_move.setting, omega_a, b_move.setting, lambda,
                                         lambda.project(b_move.setting)};
        scientist_a.observe(record);
        nature_a.observe(record);
        scientist_b.observe(record);
        nature_b.observe(record);
        if (per_round) per_round(record, out.state);

        out.max_log_k_a = std::max(out.max_log_k_a, out.state.log_k_a.log_value);
        out.max_log_k_b = std::max(out.max_log_k_b, out.state.log_k_b.log_value);

        if (n % options.snapshot_stride == 0 || n == options.rounds) {
            LocalitySnapshot snap;
            snap.n = n;
            snap.s = record.s;
            snap.omega_a = record.omega_a;
            snap.t = record.t;
            snap.lambda = record.lambda;
            snap.omega_b = record.omega_b;
            snap.log_k_a = out.state.log_k_a.log_value;
            snap.log_k_b = out.state.log_k_b.log_value;
            snap.correlations = context_correlations(out.state.pairs, snap.chsh);
            out.snapshots.push_back(snap);
        }
    }
    return out;
}

}  // namespace bellgame::games
