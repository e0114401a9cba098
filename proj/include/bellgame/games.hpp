#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "bellgame/core.hpp"
#include "bellgame/gtp.hpp"
#include "bellgame/stats.hpp"

namespace bellgame::games {

// The two hidden-variable protocols as validating state machines. The
// engines own the timing: a policy's move function receives exactly what
// the protocol lets that player see at that point in the round, and the
// full round record is disclosed to everyone only afterwards through
// observe(). A bet therefore cannot depend on the current round's later
// moves by construction.

enum class HistoryMode { full, summary };

struct RunOptions {
    std::uint64_t rounds = 0;
    std::uint64_t snapshot_stride = 100;
    HistoryMode history = HistoryMode::summary;
};

// ---------------------------------------------------------------------------
// Loopholes-closed game: Scientist AB vs Nature AB, capital processes
// K (bets against the odds table) and W (running independence test of the
// announced quadruples against the chosen settings).
// ---------------------------------------------------------------------------

struct ClosedScientistMove {
    // A bet over the four outcome pairs for every joint setting, announced
    // up front, plus the chosen setting.
    std::array<gtp::BettingDistribution, 4> bets_by_setting;
    SettingPair setting;
};

struct ClosedRoundRecord {
    SettingPair setting;
    HiddenVariable lambda;
    Outcome omega_a;
    Outcome omega_b;
};

class ClosedScientistPolicy {
public:
    virtual ~ClosedScientistPolicy() = default;
    virtual ClosedScientistMove choose() = 0;
    virtual void observe(const ClosedRoundRecord&) {}
};

class ClosedNaturePolicy {
public:
    virtual ~ClosedNaturePolicy() = default;
    // Sees the scientist's full announcement (bets and setting).
    virtual HiddenVariable respond(const ClosedScientistMove& announced) = 0;
    virtual void observe(const ClosedRoundRecord&) {}
};

// Base for Natures that are measurement-independent by construction: the
// current round's announcement never reaches draw().
class SettingBlindNaturePolicy : public ClosedNaturePolicy {
public:
    HiddenVariable respond(const ClosedScientistMove&) final { return draw(); }
    virtual HiddenVariable draw() = 0;
};

struct ClosedGameState {
    std::uint64_t round = 0;
    gtp::LogCapital log_k;          // log K
    double log_w = 0.0;             // log W
    stats::ContingencyCounts counts;
    stats::PairCounts pairs;
    std::vector<ClosedRoundRecord> history;  // filled in full mode only
};

// Applies one round: updates K from the announced bet at the realized
// (setting, outcome pair), increments the contingency counts, then updates
// W from the post-increment empirical distributions. Throws GameError
// (with the violating round) on malformed bets.
void apply_closed_round(ClosedGameState& state, const ClosedScientistMove& move,
                        const HiddenVariable& lambda, const ChshTable& table,
                        HistoryMode history = HistoryMode::summary);

struct ClosedSnapshot {
    std::uint64_t n = 0;
    SettingPair setting{1, 3};
    HiddenVariable lambda;
    Outcome omega_a = Outcome::plus;
    Outcome omega_b = Outcome::plus;
    double log_k = 0.0;
    double log_w = 0.0;
    double kl = 0.0;
    std::array<double, 4> correlations{};  // NaN while a context is empty
    double chsh = 0.0;                     // NaN while any context is empty
    double max_cell_gap = 0.0;
};

struct ClosedTrajectory {
    std::vector<ClosedSnapshot> snapshots;
    ClosedGameState state;
    double max_log_k = 0.0;  // maxima over every round
    double max_log_w = 0.0;
};

using ClosedRoundCallback = std::function<void(const ClosedRoundRecord&, const ClosedGameState&)>;

ClosedTrajectory run_closed_game(ClosedScientistPolicy& scientist, ClosedNaturePolicy& nature,
                                 const RunOptions& options,
                                 const ChshTable& table = canonical_chsh_table(),
                                 const ClosedRoundCallback& per_round = nullptr);

// ---------------------------------------------------------------------------
// Locality-loophole game: four players; Nature B picks the hidden variable
// after seeing A's wing, constrained to the preimage of A's outcome.
// ---------------------------------------------------------------------------

struct LocalityAMove {
    std::array<gtp::BettingDistribution, 2> bets_by_setting;  // over {+1,-1}, for s = 1, 2
    int setting;                                              // s
};

struct LocalityBMove {
    std::array<gtp::BettingDistribution, 2> bets_by_setting;  // for t = 3, 4
    int setting;                                              // t
};

struct LocalityRoundRecord {
    int s = 1;
    Outcome omega_a = Outcome::plus;
    int t = 3;
    HiddenVariable lambda;
    Outcome omega_b = Outcome::plus;
};

class ScientistAPolicy {
public:
    virtual ~ScientistAPolicy() = default;
    virtual LocalityAMove choose() = 0;
    virtual void observe(const LocalityRoundRecord&) {}
};

class NatureAPolicy {
public:
    virtual ~NatureAPolicy() = default;
    virtual Outcome respond(const LocalityAMove& a_move) = 0;
    virtual void observe(const LocalityRoundRecord&) {}
};

class ScientistBPolicy {
public:
    virtual ~ScientistBPolicy() = default;
    virtual LocalityBMove choose(const LocalityAMove& a_move, Outcome omega_a) = 0;
    virtual void observe(const LocalityRoundRecord&) {}
};

class NatureBPolicy {
public:
    virtual ~NatureBPolicy() = default;
    virtual HiddenVariable respond(const LocalityAMove& a_move, Outcome omega_a,
                                   const LocalityBMove& b_move) = 0;
    virtual void observe(const LocalityRoundRecord&) {}
};

struct LocalityGameState {
    std::uint64_t round = 0;
    gtp::LogCapital log_k_a;
    gtp::LogCapital log_k_b;
    stats::PairCounts pairs;  // observed (omega_a, omega_b) by setting; population from lambda
    std::vector<LocalityRoundRecord> history;
};

// Validates the preimage constraint X_s(lambda) = omega_a
// (ConsistencyViolation otherwise) and applies both capital updates:
// K_A against p(a|s) = 1/2, K_B against p(b|a,s,t).
void apply_locality_round(LocalityGameState& state, const LocalityAMove& a_move, Outcome omega_a,
                          const LocalityBMove& b_move, const HiddenVariable& lambda,
                          const ChshTable& table, HistoryMode history = HistoryMode::summary);

struct LocalitySnapshot {
    std::uint64_t n = 0;
    int s = 1;
    Outcome omega_a = Outcome::plus;
    int t = 3;
    HiddenVariable lambda;
    Outcome omega_b = Outcome::plus;
    double log_k_a = 0.0;
    double log_k_b = 0.0;
    std::array<double, 4> correlations{};
    double chsh = 0.0;
};

struct LocalityTrajectory {
    std::vector<LocalitySnapshot> snapshots;
    LocalityGameState state;
    double max_log_k_a = 0.0;
    double max_log_k_b = 0.0;
};

using LocalityRoundCallback =
    std::function<void(const LocalityRoundRecord&, const LocalityGameState&)>;

LocalityTrajectory run_locality_game(ScientistAPolicy& scientist_a, NatureAPolicy& nature_a,
                                     ScientistBPolicy& scientist_b, NatureBPolicy& nature_b,
                                     const RunOptions& options,
                                     const ChshTable& table = canonical_chsh_table(),
                                     const LocalityRoundCallback& per_round = nullptr);

}  // namespace bellgame::games
