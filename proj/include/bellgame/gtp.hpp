#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "bellgame/errors.hpp"

namespace bellgame::gtp {

// The simple predictive game over a finite alphabet: a bettor announces a
// distribution q, an outcome w is revealed, and the bettor's capital is
// multiplied by q(w)/p(w), where p is the fixed odds distribution.

// A strictly positive probability vector over an alphabet of size >= 2.
class BettingDistribution {
public:
    explicit BettingDistribution(std::vector<double> weights);

    double operator[](std::size_t i) const { return weights_[i]; }
    std::size_t size() const { return weights_.size(); }
    std::span<const double> weights() const { return weights_; }

    friend bool operator==(const BettingDistribution&, const BettingDistribution&) = default;

private:
    std::vector<double> weights_;
};

BettingDistribution uniform_bet(std::size_t alphabet);

// Log-domain capital account.
//
// log_value is the natural log of the bettable capital (capital starts at
// 1, so log_value starts at 0 and stays finite as long as all bets are
// strictly positive). locked_log is the log of the amount set aside by the
// thrift rule, -infinity while nothing is locked.
//
// The thrift rule is an optional wrapper that converts "capital is
// unbounded along a subsequence" into "capital grows without returning":
// the first time total capital exceeds 2^k (k = 1, 2, ...), half of the
// bettable capital is moved to the locked account and never bet again.
// Locking sacrifices at most half of the growth rate. It is off by
// default; rate measurements use the plain recursion.
struct LogCapital {
    double log_value = 0.0;
    double locked_log = -std::numeric_limits<double>::infinity();
    bool thrift = false;
    int next_threshold_exponent = 1;  // next lock triggers at 2^this

    static LogCapital plain() { return LogCapital{}; }
    static LogCapital thrifted() {
        LogCapital k;
        k.thrift = true;
        return k;
    }

    // log(exp(log_value) + exp(locked_log)), computed stably.
    double total_log() const;
};

// One betting step: multiplies capital by bet[observed]/odds[observed] and
// applies the thrift rule when enabled. Throws GameError if the update
// produces a non-finite log (which would mean a zero or negative weight
// slipped in upstream).
LogCapital capital_update(LogCapital k, const BettingDistribution& bet,
                          const BettingDistribution& odds, std::size_t observed);

// Symbol tallies over the alphabet.
struct FrequencyCounts {
    explicit FrequencyCounts(std::size_t alphabet);

    void add(std::size_t symbol);
    std::uint64_t count(std::size_t symbol) const { return counts[symbol]; }
    std::size_t alphabet() const { return counts.size(); }

    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

// Krichevsky-Trofimov (add-half) predictive distribution:
// weight(a) = (count(a) + 1/2) / (total + A/2).
// Betting it against fixed odds p makes log-capital track
// n * D(empirical || p) up to a ((A-1)/2) log n regret term, which is what
// forces empirical frequencies toward p when capital stays bounded.
BettingDistribution kt_bet(const FrequencyCounts& counts);

// A reality move source; returning nullopt means the stream is exhausted.
using SymbolStream = std::function<std::optional<std::size_t>()>;

// Seeded i.i.d. stream from a distribution (weights nonnegative, sum 1).
SymbolStream iid_stream(std::vector<double> weights, std::uint64_t seed);

struct PredictiveSnapshot {
    std::uint64_t n = 0;
    std::size_t symbol = 0;  // symbol observed at round n
    LogCapital capital;
    std::vector<std::uint64_t> counts;
    double max_freq_error = 0.0;  // max_a |count_a/n - p(a)|
};

struct PredictiveTrajectory {
    std::vector<PredictiveSnapshot> snapshots;
    LogCapital final_capital;
    FrequencyCounts final_counts{2};
    double max_log_value = 0.0;  // max over all rounds, not just snapshots
};

struct PredictiveOptions {
    std::uint64_t rounds = 0;
    std::uint64_t snapshot_stride = 1;
    bool thrift = false;
};

// Runs the predictive game with the KT bettor against fixed odds.
// Deterministic given (odds, stream, options). Throws StreamExhausted if
// the stream ends early and ConfigError if rounds == 0.
PredictiveTrajectory run_predictive_game(const BettingDistribution& odds,
                                         const SymbolStream& reality,
                                         const PredictiveOptions& options);

}  // namespace bellgame::gtp
