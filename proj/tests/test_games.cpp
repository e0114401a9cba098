#include <cmath>
#include <numbers>

#include <doctest.h>

#include "bellgame/games.hpp"
#include "bellgame/stats.hpp"
#include "bellgame/strategies.hpp"

using namespace bellgame;
using namespace bellgame::games;

namespace {

ClosedScientistMove table_row_move(const SettingPair& u) {
    const ChshTable& t = canonical_chsh_table();
    const auto bet = [&](const SettingPair& su) {
        return gtp::BettingDistribution(
            {t.row(su)[0], t.row(su)[1], t.row(su)[2], t.row(su)[3]});
    };
    return ClosedScientistMove{{bet(SettingPair(1, 3)), bet(SettingPair(1, 4)),
                                bet(SettingPair(2, 3)), bet(SettingPair(2, 4))},
                               u};
}

ClosedScientistMove uniform_move(const SettingPair& u) {
    return ClosedScientistMove{{gtp::uniform_bet(4), gtp::uniform_bet(4), gtp::uniform_bet(4),
                                gtp::uniform_bet(4)},
                               u};
}

}  // namespace

TEST_CASE("closed round: betting the table row freezes K for any move") {
    ClosedGameState state;
    const SettingPair u(1, 4);
    apply_closed_round(state, table_row_move(u), HiddenVariable::from_string("--+-"),
                       canonical_chsh_table());
    apply_closed_round(state, table_row_move(SettingPair(2, 3)), HiddenVariable::from_string("++++"),
                       canonical_chsh_table());
    CHECK(state.log_k.log_value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(state.round == 2);
}

TEST_CASE("closed round: W factors for the first two rounds") {
    SUBCASE("first round factor is always 1") {
        ClosedGameState state;
        apply_closed_round(state, uniform_move(SettingPair(1, 3)),
                           HiddenVariable::from_string("+-+-"), canonical_chsh_table());
        CHECK(state.log_w == 0.0);
    }
    SUBCASE("repeated quadruple, fresh setting: W stays 1") {
        ClosedGameState state;
        const HiddenVariable lambda = HiddenVariable::from_string("+-+-");
        apply_closed_round(state, uniform_move(SettingPair(1, 3)), lambda, canonical_chsh_table());
        apply_closed_round(state, uniform_move(SettingPair(2, 4)), lambda, canonical_chsh_table());
        CHECK(state.log_w == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("fresh quadruple and fresh setting: W doubles") {
        ClosedGameState state;
        apply_closed_round(state, uniform_move(SettingPair(1, 3)),
                           HiddenVariable::from_string("+-+-"), canonical_chsh_table());
        apply_closed_round(state, uniform_move(SettingPair(2, 4)),
                           HiddenVariable::from_string("-+-+"), canonical_chsh_table());
        CHECK(state.log_w == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
        CHECK(stats::w_closed_form(state.counts) ==
              doctest::Approx(std::numbers::ln2).epsilon(1e-12));
    }
}

TEST_CASE("locality round: identity bets freeze both capitals") {
    const ChshTable& t = canonical_chsh_table();
    LocalityGameState state;
    const LocalityAMove a_move{{gtp::uniform_bet(2), gtp::uniform_bet(2)}, 1};
    // B bets the conditional odds for omega_a = +1, s = 1
    const auto cond = [&](int tt) {
        const SettingPair u(1, tt);
        return gtp::BettingDistribution({t.conditional_odds(Outcome::plus, Outcome::plus, u),
                                         t.conditional_odds(Outcome::minus, Outcome::plus, u)});
    };
    const LocalityBMove b_move{{cond(3), cond(4)}, 4};
    apply_locality_round(state, a_move, Outcome::plus, b_move,
                         HiddenVariable::from_string("+--+"), t);
    CHECK(state.log_k_a.log_value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(state.log_k_b.log_value == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("locality round: preimage violations and bad settings are rejected") {
    LocalityGameState state;
    const LocalityAMove a_move{{gtp::uniform_bet(2), gtp::uniform_bet(2)}, 1};
    const LocalityBMove b_move{{gtp::uniform_bet(2), gtp::uniform_bet(2)}, 3};

    // lambda with X_1 = -1 after omega_a = +1 under s = 1
    CHECK_THROWS_AS(apply_locality_round(state, a_move, Outcome::plus, b_move,
                                         HiddenVariable::from_string("-+++"),
                                         canonical_chsh_table()),
                    ConsistencyViolation);
    CHECK(state.round == 0);  // rejected rounds leave no trace

    LocalityAMove bad_a = a_move;
    bad_a.setting = 3;
    CHECK_THROWS_AS(apply_locality_round(state, bad_a, Outcome::plus, b_move,
                                         HiddenVariable::from_string("++++"),
                                         canonical_chsh_table()),
                    InvalidSetting);
}

TEST_CASE("flat B bets drift down at the conditional-entropy rate") {
    // betting 1/2 flat against conditional odds drawn from {2mu, 2nu}
    // loses D(conditional || uniform) = ln 2 - H(2mu, 2nu) per round
    const ChshTable& t = canonical_chsh_table();
    const double two_mu = t.conditional_odds(Outcome::plus, Outcome::plus, SettingPair(1, 3));
    const double two_nu = 1.0 - two_mu;
    const double expected_rate =
        -(std::numbers::ln2 + two_mu * std::log(two_mu) + two_nu * std::log(two_nu));

    struct FlatA final : ScientistAPolicy {
        std::uint64_t n = 0;
        LocalityAMove choose() override {
            return {{gtp::uniform_bet(2), gtp::uniform_bet(2)}, static_cast<int>(n++ % 2) + 1};
        }
    } scientist_a;
    struct FlatB final : ScientistBPolicy {
        std::uint64_t n = 0;
        LocalityBMove choose(const LocalityAMove&, Outcome) override {
            return {{gtp::uniform_bet(2), gtp::uniform_bet(2)}, static_cast<int>(n++ % 2) + 3};
        }
    } scientist_b;
    strategies::UniformNatureA nature_a(111);
    strategies::LocalityExploitNatureB nature_b(222);

    RunOptions options;
    options.rounds = 100000;
    options.snapshot_stride = options.rounds;
    const LocalityTrajectory traj =
        run_locality_game(scientist_a, nature_a, scientist_b, nature_b, options);
    const double rate = traj.state.log_k_b.log_value / static_cast<double>(options.rounds);
    CHECK(std::abs(rate - (-expected_rate)) <= 0.01);
}

TEST_CASE("engine rejects empty runs and bad bets") {
    strategies::ForcingClosedScientist scientist(1);
    strategies::IndependentLhvNature nature(2);
    RunOptions options;
    options.rounds = 0;
    CHECK_THROWS_AS(run_closed_game(scientist, nature, options), ConfigError);

    struct BadScientist final : ClosedScientistPolicy {
        ClosedScientistMove choose() override {
            // a two-symbol bet where a four-symbol one is required
            return {{gtp::uniform_bet(2), gtp::uniform_bet(4), gtp::uniform_bet(4),
                     gtp::uniform_bet(4)},
                    SettingPair(1, 3)};
        }
    } bad;
    options.rounds = 3;
    try {
        run_closed_game(bad, nature, options);
        FAIL("expected a GameError");
    } catch (const GameError& e) {
        CHECK(e.round() == 1);
    }
}

TEST_CASE("same seed, same trajectory") {
    const auto run = [] {
        strategies::ForcingClosedScientist scientist(1234);
        strategies::QuantumNature nature(5678);
        RunOptions options;
        options.rounds = 2000;
        options.snapshot_stride = 100;
        return run_closed_game(scientist, nature, options);
    };
    const ClosedTrajectory a = run();
    const ClosedTrajectory b = run();
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        CHECK(a.snapshots[i].log_k == b.snapshots[i].log_k);  // bit-identical
        CHECK(a.snapshots[i].log_w == b.snapshots[i].log_w);
        CHECK(a.snapshots[i].lambda == b.snapshots[i].lambda);
        CHECK(a.snapshots[i].setting == b.snapshots[i].setting);
    }
}

TEST_CASE("full history replays to an identical trajectory") {
    RunOptions options;
    options.rounds = 500;
    options.snapshot_stride = 50;
    options.history = HistoryMode::full;

    strategies::ForcingClosedScientist scientist(31);
    strategies::QuantumNature nature(32);
    const ClosedTrajectory original = run_closed_game(scientist, nature, options);
    REQUIRE(original.state.history.size() == options.rounds);

    std::vector<HiddenVariable> script;
    for (const ClosedRoundRecord& r : original.state.history) script.push_back(r.lambda);
    strategies::ForcingClosedScientist scientist_again(31);
    strategies::ReplayNature replay(script);
    const ClosedTrajectory rerun = run_closed_game(scientist_again, replay, options);

    CHECK(rerun.state.log_k.log_value == original.state.log_k.log_value);
    CHECK(rerun.state.log_w == original.state.log_w);

    // summary mode retains no per-round history
    options.history = HistoryMode::summary;
    strategies::ForcingClosedScientist s3(31);
    strategies::QuantumNature n3(32);
    CHECK(run_closed_game(s3, n3, options).state.history.empty());

    // exhausted scripts surface as protocol violations
    strategies::ForcingClosedScientist s4(31);
    strategies::ReplayNature short_replay(
        std::vector<HiddenVariable>(script.begin(), script.begin() + 100));
    CHECK_THROWS_AS(run_closed_game(s4, short_replay, options), ReplayExhausted);
}

TEST_CASE("move timing is engine-enforced") {
    // the engine must ask the scientist first, hand exactly that move to
    // nature, and disclose the round to both observers afterwards
    struct Trace {
        std::vector<std::string> events;
    } trace;

    struct SentinelScientist final : ClosedScientistPolicy {
        Trace* trace;
        std::uint64_t n = 0;
        explicit SentinelScientist(Trace* t) : trace(t) {}
        ClosedScientistMove choose() override {
            trace->events.push_back("scientist.move");
            return {{gtp::uniform_bet(4), gtp::uniform_bet(4), gtp::uniform_bet(4),
                     gtp::uniform_bet(4)},
                    SettingPair::from_index(n++ % 4)};
        }
        void observe(const ClosedRoundRecord&) override {
            trace->events.push_back("scientist.observe");
        }
    } scientist(&trace);

    struct SentinelNature final : ClosedNaturePolicy {
        Trace* trace;
        std::uint64_t expected_setting = 0;
        explicit SentinelNature(Trace* t) : trace(t) {}
        HiddenVariable respond(const ClosedScientistMove& announced) override {
            trace->events.push_back("nature.move");
            // nature sees exactly the setting the scientist announced
            CHECK(announced.setting.index() == expected_setting % 4);
            ++expected_setting;
            return HiddenVariable::from_index(expected_setting % 16);
        }
        void observe(const ClosedRoundRecord&) override {
            trace->events.push_back("nature.observe");
        }
    } nature(&trace);

    RunOptions options;
    options.rounds = 8;
    run_closed_game(scientist, nature, options);
    REQUIRE(trace.events.size() == 4 * options.rounds);
    for (std::size_t i = 0; i < trace.events.size(); i += 4) {
        CHECK(trace.events[i] == "scientist.move");
        CHECK(trace.events[i + 1] == "nature.move");
        CHECK(trace.events[i + 2] == "scientist.observe");
        CHECK(trace.events[i + 3] == "nature.observe");
    }
}

TEST_CASE("setting-blind natures cannot react to the announced setting") {
    // identical streams, different announced settings: identical quadruples
    strategies::IndependentLhvNature nature_a(777);
    strategies::IndependentLhvNature nature_b(777);
    std::uint64_t flip = 0;
    for (int i = 0; i < 200; ++i) {
        const ClosedScientistMove move_a = uniform_move(SettingPair::from_index(flip % 4));
        const ClosedScientistMove move_b = uniform_move(SettingPair::from_index((flip + 2) % 4));
        ++flip;
        CHECK(nature_a.respond(move_a) == nature_b.respond(move_b));
    }
}

TEST_CASE("W recursion equals the closed form along random runs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        strategies::ForcingClosedScientist scientist(seed);
        strategies::MixtureNature nature(seed + 100, 0.5);
        RunOptions options;
        options.rounds = 3000;
        options.snapshot_stride = options.rounds;
        const ClosedTrajectory traj = run_closed_game(scientist, nature, options);
        const double closed = stats::w_closed_form(traj.state.counts);
        CHECK(std::abs(traj.state.log_w - closed) <=
              1e-8 * std::max({1.0, std::abs(closed), std::abs(traj.state.log_w)}));
        CHECK(std::isfinite(traj.state.log_k.log_value));
        CHECK(std::isfinite(traj.state.log_w));
    }
}
